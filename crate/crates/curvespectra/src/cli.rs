//! Command-line front end: analyze curves, reproduce the reference
//! table, and query the lattice/Dirac and 2D-operator computations
//! directly.
//!
//! Exit codes: 0 on success, 1 on input or domain errors, 2 when a
//! theorem-level inequality flag fails verification (the conjectural
//! flag never affects the exit code).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, round12, AnalyzeOptions, Report, TableRow};
use crate::catalog;
use crate::dirac;
use crate::error::Result;
use crate::expr::{parse_curve_file, CurveDef};
use crate::geometry::{self, GeometryOptions};
use crate::schrodinger2d::{self, Operator2DSpec};
use crate::sturm1d::HillConfig;

#[derive(Parser)]
#[command(
    name = "curvespectra",
    version,
    about = "Spectral lower bounds, 2D operator spectra, and flat-torus Dirac minima for closed parametric curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one curve: geometry, spectra, and inequality flags
    Analyze(AnalyzeArgs),
    /// Recompute the five bundled comparison-table rows
    Table(TableArgs),
    /// Minimize the squared Dirac eigenvalue family on a Hopf-torus lattice
    Dirac(DiracArgs),
    /// First eigenvalue of the 2D periodic operator of a spherical curve
    Schrodinger2d(Schrodinger2dArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ConfigArgs {
    /// Arc-length samples M (power of two, at least 64)
    #[arg(long, default_value_t = 2048)]
    samples: usize,
    /// Starting Fourier cutoff of the eigenvalue convergence loop
    #[arg(long, default_value_t = 32)]
    initial_cutoff: usize,
    /// Largest Fourier cutoff the loop may reach
    #[arg(long, default_value_t = 512)]
    max_cutoff: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Catalog name (see README) or path to a curve definition file
    #[arg(long)]
    curve: String,
    /// Solve the 2D operator when the curve bounds a spherical area
    #[arg(long = "enable-2d", default_value_t = true, action = clap::ArgAction::Set)]
    enable_2d: bool,
    /// Known generator count of the curve complement's fundamental
    /// group; adds the conjectural strengthened-bound flag
    #[arg(long)]
    rho: Option<u32>,
    /// Self-intersection threshold as a fraction of L/M (0 disables)
    #[arg(long, default_value_t = 0.25)]
    simplicity_factor: f64,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct DiracArgs {
    /// Curve length L
    #[arg(long = "L")]
    length: f64,
    /// Enclosed spherical area A in [0, 4 pi]
    #[arg(long = "A")]
    area: f64,
    /// Chern class of the circle bundle
    #[arg(long = "m", default_value_t = 1)]
    chern: i64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct Schrodinger2dArgs {
    /// Catalog name or path to a curve definition file; must lie on the
    /// unit sphere and pass the simplicity check
    #[arg(long)]
    curve: String,
    /// Self-intersection threshold as a fraction of L/M (0 disables)
    #[arg(long, default_value_t = 0.25)]
    simplicity_factor: f64,
    #[command(flatten)]
    config: ConfigArgs,
}

/// Entry point; returns the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Table(args) => cmd_table(args),
        Command::Dirac(args) => cmd_dirac(args),
        Command::Schrodinger2d(args) => cmd_schrodinger2d(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

/// Resolves a curve argument: catalog name first, then file path.
fn load_curve(source: &str) -> Result<CurveDef> {
    if let Some(entry) = catalog::lookup(source) {
        return parse_curve_file(entry.source);
    }
    if Path::new(source).exists() {
        let text = std::fs::read_to_string(source)?;
        return parse_curve_file(&text);
    }
    // neither a catalog name nor an existing file: report the catalog
    Err(catalog::load(source).unwrap_err())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let curve = load_curve(&args.curve)?;
    let options = AnalyzeOptions {
        samples: args.config.samples,
        initial_cutoff: args.config.initial_cutoff,
        max_cutoff: args.config.max_cutoff,
        enable_2d: args.enable_2d,
        rho: args.rho,
        simplicity_factor: args.simplicity_factor,
    };
    let report = analysis::analyze_curve(&curve, &options)?;
    match args.config.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => print!("{}", report_csv(&report)),
        Format::Text => print!("{}", report_text(&report)),
    }
    Ok(if report.theorem_flags_hold() { 0 } else { 2 })
}

fn cmd_table(args: TableArgs) -> Result<u8> {
    let options = AnalyzeOptions {
        samples: args.config.samples,
        initial_cutoff: args.config.initial_cutoff,
        max_cutoff: args.config.max_cutoff,
        ..AnalyzeOptions::default()
    };
    let rows = analysis::reproduce_table(&options)?;
    match args.config.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => print!("{}", table_csv(&rows)),
        Format::Text => print!("{}", table_text(&rows)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct DiracReport {
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "A")]
    area: f64,
    m: i64,
    v1: [f64; 2],
    v2: [f64; 2],
    theta: f64,
    spin: [u8; 2],
    dual1: [f64; 2],
    dual2: [f64; 2],
    admissible: bool,
    minimum: f64,
    k: i64,
    l: i64,
}

fn cmd_dirac(args: DiracArgs) -> Result<u8> {
    let lattice = dirac::hopf_lattice(args.length, args.area)?;
    let minimum = dirac::dirac_minimum(args.length, args.area, args.chern)?;
    let admissible = 4.0 * PI * args.area - args.area * args.area
        <= args.length * args.length * (1.0 + 1e-12);
    let round2 = |v: [f64; 2]| [round12(v[0]), round12(v[1])];
    let report = DiracReport {
        length: round12(args.length),
        area: round12(args.area),
        m: args.chern,
        v1: round2(lattice.v1),
        v2: round2(lattice.v2),
        theta: round12(lattice.theta),
        spin: [lattice.spin.0, lattice.spin.1],
        dual1: round2(lattice.dual1),
        dual2: round2(lattice.dual2),
        admissible,
        minimum: round12(minimum.value),
        k: minimum.k,
        l: minimum.l,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => print!("{}", dirac_csv(&report)),
        Format::Text => print!("{}", dirac_text(&report)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct TwoDReport {
    curve: String,
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "A")]
    area: f64,
    admissible: bool,
    mu1_2d: f64,
    mode: i64,
    cutoff: usize,
}

fn cmd_schrodinger2d(args: Schrodinger2dArgs) -> Result<u8> {
    let curve = load_curve(&args.curve)?;
    let options = AnalyzeOptions {
        samples: args.config.samples,
        initial_cutoff: args.config.initial_cutoff,
        max_cutoff: args.config.max_cutoff,
        simplicity_factor: args.simplicity_factor,
        ..AnalyzeOptions::default()
    };
    options.validate()?;
    let geom = geometry::reparametrize_with(
        &curve,
        &GeometryOptions {
            samples: options.samples,
            simplicity_factor: options.simplicity_factor,
        },
    )?;
    let area = geometry::spherical_area(&geom)?;
    let potential: Vec<f64> = geom.kappa.iter().map(|k| k * k).collect();
    let spec = Operator2DSpec::new(geom.length, area, potential)?;
    let config = HillConfig {
        initial_cutoff: options.initial_cutoff,
        max_cutoff: options.max_cutoff,
        ..HillConfig::default()
    };
    let result = schrodinger2d::mu1(&spec, &config)?;
    let report = TwoDReport {
        curve: curve.name.clone(),
        length: round12(geom.length),
        area: round12(area),
        admissible: spec.admissible,
        mu1_2d: round12(result.value),
        mode: result.mode,
        cutoff: result.cutoff,
    };
    match args.config.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => print!("{}", two_d_csv(&report)),
        Format::Text => print!("{}", two_d_text(&report)),
    }
    Ok(0)
}

fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn opt_int(x: Option<i64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn opt_bool(x: Option<bool>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn report_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve: {}", report.curve);
    let _ = writeln!(out, "geometry");
    let _ = writeln!(out, "  L = {}", report.geometry.length);
    let _ = writeln!(
        out,
        "  rotation_number = {}",
        opt_int(report.geometry.rotation_number)
    );
    let _ = writeln!(out, "  area = {}", opt_num(report.geometry.area));
    let _ = writeln!(out, "spectra");
    let _ = writeln!(out, "  mu1_1d = {}", report.spectra.mu1_1d);
    let _ = writeln!(out, "  mu1_2d = {}", opt_num(report.spectra.mu1_2d));
    let _ = writeln!(out, "  dirac_min = {}", opt_num(report.spectra.dirac_min));
    let _ = writeln!(out, "bounds");
    let _ = writeln!(out, "  fourpi2_L2 = {}", report.bounds.fourpi2_l2);
    let _ = writeln!(out, "  mean_k2 = {}", report.bounds.mean_k2);
    let _ = writeln!(out, "  total_curvature = {}", report.bounds.total_curvature);
    let _ = writeln!(out, "flags");
    let _ = writeln!(out, "  fenchel_ok = {}", report.flags.fenchel_ok);
    let _ = writeln!(out, "  cauchy_schwarz_ok = {}", report.flags.cauchy_schwarz_ok);
    let _ = writeln!(out, "  theorem1_ok = {}", report.flags.theorem1_ok);
    let _ = writeln!(out, "  upper_bound_ok = {}", report.flags.upper_bound_ok);
    let _ = writeln!(out, "  theorem2_ok = {}", opt_bool(report.flags.theorem2_ok));
    let _ = writeln!(
        out,
        "  conjecture_rho_ok = {}",
        opt_bool(report.flags.conjecture_rho_ok)
    );
    let _ = writeln!(out, "  equality_case = {}", report.flags.equality_case);
    let _ = writeln!(out, "slacks");
    let _ = writeln!(out, "  theorem1 = {}", report.slacks.theorem1);
    let _ = writeln!(out, "  fenchel = {}", report.slacks.fenchel);
    let _ = writeln!(out, "  cauchy_schwarz = {}", report.slacks.cauchy_schwarz);
    let _ = writeln!(out, "  upper_bound = {}", report.slacks.upper_bound);
    let _ = writeln!(out, "  theorem2 = {}", opt_num(report.slacks.theorem2));
    let _ = writeln!(
        out,
        "  conjecture_rho = {}",
        opt_num(report.slacks.conjecture_rho)
    );
    let _ = writeln!(out, "provenance");
    let _ = writeln!(out, "  M = {}", report.provenance.samples);
    let _ = writeln!(out, "  N = {}", report.provenance.cutoff);
    let _ = writeln!(
        out,
        "  rho = {}",
        report
            .provenance
            .rho
            .map_or_else(|| "-".into(), |v| v.to_string())
    );
    out
}

const REPORT_CSV_HEADER: &str = "curve,L,rotation_number,area,mu1_1d,mu1_2d,dirac_min,\
fourpi2_L2,mean_k2,total_curvature,fenchel_ok,cauchy_schwarz_ok,theorem1_ok,upper_bound_ok,\
theorem2_ok,conjecture_rho_ok,equality_case,slack_theorem1,slack_fenchel,slack_cauchy_schwarz,\
slack_upper_bound,slack_theorem2,slack_conjecture_rho,M,N,rho";

fn report_csv(report: &Report) -> String {
    let blank_num = |x: Option<f64>| x.map_or_else(String::new, |v| v.to_string());
    let blank_bool = |x: Option<bool>| x.map_or_else(String::new, |v| v.to_string());
    let fields = [
        report.curve.clone(),
        report.geometry.length.to_string(),
        report
            .geometry
            .rotation_number
            .map_or_else(String::new, |v| v.to_string()),
        blank_num(report.geometry.area),
        report.spectra.mu1_1d.to_string(),
        blank_num(report.spectra.mu1_2d),
        blank_num(report.spectra.dirac_min),
        report.bounds.fourpi2_l2.to_string(),
        report.bounds.mean_k2.to_string(),
        report.bounds.total_curvature.to_string(),
        report.flags.fenchel_ok.to_string(),
        report.flags.cauchy_schwarz_ok.to_string(),
        report.flags.theorem1_ok.to_string(),
        report.flags.upper_bound_ok.to_string(),
        blank_bool(report.flags.theorem2_ok),
        blank_bool(report.flags.conjecture_rho_ok),
        report.flags.equality_case.to_string(),
        report.slacks.theorem1.to_string(),
        report.slacks.fenchel.to_string(),
        report.slacks.cauchy_schwarz.to_string(),
        report.slacks.upper_bound.to_string(),
        blank_num(report.slacks.theorem2),
        blank_num(report.slacks.conjecture_rho),
        report.provenance.samples.to_string(),
        report.provenance.cutoff.to_string(),
        report
            .provenance
            .rho
            .map_or_else(String::new, |v| v.to_string()),
    ];
    format!("{}\n{}\n", REPORT_CSV_HEADER, fields.join(","))
}

const TABLE_CSV_HEADER: &str = "curve,fourpi2_L2,mu1,mean_k2,ref_fourpi2_L2,ref_mu1,ref_mean_k2";

fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TABLE_CSV_HEADER}");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.curve,
            row.fourpi2_l2,
            row.mu1,
            row.mean_k2,
            row.ref_fourpi2_l2,
            row.ref_mu1,
            row.ref_mean_k2
        );
    }
    out
}

fn table_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>16} {:>10} {:>9} | {:>16} {:>8} {:>9} | {:>9} {:>9} {:>9} ok",
        "curve",
        "4pi^2/L^2",
        "mu1",
        "mean k^2",
        "ref",
        "ref mu1",
        "ref k^2",
        "dev",
        "dev mu1",
        "dev k^2"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:<18} {:>16} {:>10.6} {:>9.6} | {:>16} {:>8} {:>9} | {:>9.2e} {:>9.2e} {:>9.2e} {}",
            row.curve,
            row.fourpi2_l2,
            row.mu1,
            row.mean_k2,
            row.ref_fourpi2_l2,
            row.ref_mu1,
            row.ref_mean_k2,
            row.dev_fourpi2_l2,
            row.dev_mu1,
            row.dev_mean_k2,
            if row.within_tolerance { "yes" } else { "NO" }
        );
    }
    out
}

fn dirac_text(report: &DiracReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "L = {}", report.length);
    let _ = writeln!(out, "A = {}", report.area);
    let _ = writeln!(out, "m = {}", report.m);
    let _ = writeln!(out, "lattice");
    let _ = writeln!(out, "  v1 = ({}, {})", report.v1[0], report.v1[1]);
    let _ = writeln!(out, "  v2 = ({}, {})", report.v2[0], report.v2[1]);
    let _ = writeln!(out, "  theta = {}", report.theta);
    let _ = writeln!(out, "  spin = ({}, {})", report.spin[0], report.spin[1]);
    let _ = writeln!(out, "dual lattice");
    let _ = writeln!(out, "  v1* = ({}, {})", report.dual1[0], report.dual1[1]);
    let _ = writeln!(out, "  v2* = ({}, {})", report.dual2[0], report.dual2[1]);
    let _ = writeln!(out, "admissible = {}", report.admissible);
    let _ = writeln!(out, "minimum = {}", report.minimum);
    let _ = writeln!(out, "argmin = (k = {}, l = {})", report.k, report.l);
    out
}

fn dirac_csv(report: &DiracReport) -> String {
    format!(
        "L,A,m,v1_x,v1_y,v2_x,v2_y,theta,spin_1,spin_2,dual1_x,dual1_y,dual2_x,dual2_y,admissible,minimum,k,l\n\
         {},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        report.length,
        report.area,
        report.m,
        report.v1[0],
        report.v1[1],
        report.v2[0],
        report.v2[1],
        report.theta,
        report.spin[0],
        report.spin[1],
        report.dual1[0],
        report.dual1[1],
        report.dual2[0],
        report.dual2[1],
        report.admissible,
        report.minimum,
        report.k,
        report.l
    )
}

fn two_d_text(report: &TwoDReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve: {}", report.curve);
    let _ = writeln!(out, "L = {}", report.length);
    let _ = writeln!(out, "A = {}", report.area);
    let _ = writeln!(out, "admissible = {}", report.admissible);
    let _ = writeln!(out, "mu1_2d = {}", report.mu1_2d);
    let _ = writeln!(out, "mode = {}", report.mode);
    let _ = writeln!(out, "cutoff = {}", report.cutoff);
    out
}

fn two_d_csv(report: &TwoDReport) -> String {
    format!(
        "curve,L,A,admissible,mu1_2d,mode,cutoff\n{},{},{},{},{},{},{}\n",
        report.curve,
        report.length,
        report.area,
        report.admissible,
        report.mu1_2d,
        report.mode,
        report.cutoff
    )
}
