//! First eigenvalue of the 2D periodic Schrodinger operator
//!   P = -(1 + A^2/L^2) d^2/dt^2 - 4 d^2/ds^2 - (4A/L) d^2/dtds + q(s)
//! on [0, 2pi) x [0, L). Since the potential depends on s only, the
//! t-mode e^{imt} decouples exactly and each mode reduces to a 1D
//! operator on [0, L] whose Galerkin matrix over e^{2 pi i n s / L} is
//!   delta(n,n') [ (1 + A^2/L^2) m^2 + 4 nu^2 + (4A/L) m nu ] + qhat(n - n'),
//! with nu = 2 pi n / L. The kinetic diagonal equals
//! m^2 + (A m / L + 2 nu)^2, so the lowest eigenvalue of the m-th mode is
//! at least m^2 + min q; the scan over m stops once that bound exceeds
//! the best value found.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::eigensolve::{converge_lowest, HermitianMatrix};
use crate::error::{Error, Result};
use crate::sturm1d::{potential_spectrum, HillConfig};

/// Data defining the operator: circumferences 2pi and L, the mixing
/// weight A (an enclosed spherical area), and uniform arc-length samples
/// of the potential.
#[derive(Debug, Clone)]
pub struct Operator2DSpec {
    pub length: f64,
    pub area: f64,
    pub potential: Vec<f64>,
    /// Whether 4 pi A - A^2 <= L^2 holds (recorded, not enforced).
    pub admissible: bool,
}

impl Operator2DSpec {
    /// Validates L > 0 and 0 <= A < 4 pi (A = 0 is the degenerate
    /// product-torus case) and records isoperimetric admissibility.
    pub fn new(length: f64, area: f64, potential: Vec<f64>) -> Result<Operator2DSpec> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain(format!(
                "operator length must be positive, got {length}"
            )));
        }
        if !(0.0..4.0 * PI).contains(&area) {
            return Err(Error::Domain(format!(
                "enclosed area must lie in [0, 4pi), got {area}"
            )));
        }
        if potential.len() < 2 || !potential.len().is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "potential sample count must be even and at least 2, got {}",
                potential.len()
            )));
        }
        let admissible =
            4.0 * PI * area - area * area <= length * length * (1.0 + 1e-12);
        Ok(Operator2DSpec {
            length,
            area,
            potential,
            admissible,
        })
    }
}

/// Galerkin matrix of the reduced operator for the t-mode e^{imt}.
///
/// The cross-term sign pairs +m with +nu; the opposite pairing gives the
/// complex-conjugate matrix, hence the same spectrum, and the scan below
/// covers both signs of m anyway. The circle equality case (a constant
/// potential 1/r^2 reaching its lowest eigenvalue 4 pi^2 / L^2 at m = 0)
/// pins the reported value.
pub fn mode_matrix(
    spec: &Operator2DSpec,
    hat: &[Complex64],
    mode: i64,
    cutoff: usize,
) -> Result<HermitianMatrix> {
    let m = hat.len();
    if 2 * cutoff > m / 2 {
        return Err(Error::CutoffAliasing {
            cutoff,
            samples: m,
        });
    }
    let dim = 2 * cutoff + 1;
    let base = TAU / spec.length;
    let ratio = spec.area / spec.length;
    let mm = mode as f64;
    HermitianMatrix::from_fn(dim, |i, j| {
        let n = i as i64 - cutoff as i64;
        let np = j as i64 - cutoff as i64;
        let freq = (n - np).rem_euclid(m as i64) as usize;
        let mut entry = hat[freq];
        if n == np {
            // compact kinetic form; reduces bitwise to the 1D diagonal at m = 0
            let nu = base * (n as f64);
            let w = ratio * mm + 2.0 * nu;
            entry += mm * mm + w * w;
        }
        entry
    })
}

/// Result of the mode scan: the first eigenvalue of the 2D operator,
/// the t-mode attaining it, the accepted s-cutoff for that mode, and the
/// largest |m| actually solved.
#[derive(Debug, Clone, Copy)]
pub struct Mode2DResult {
    pub value: f64,
    pub mode: i64,
    pub cutoff: usize,
    pub scanned: i64,
}

/// First eigenvalue: minimum over integer t-modes of the lowest
/// eigenvalue of the reduced 1D operator, each mode solved with the
/// cutoff-doubling convergence loop. Modes are scanned in the order
/// 0, +1, -1, +2, -2, ... and the scan stops at the first |m| whose
/// lower bound m^2 + min q (minus a small interpolation margin) cannot
/// improve on the best value found; ties keep the earliest mode.
pub fn mu1(spec: &Operator2DSpec, config: &HillConfig) -> Result<Mode2DResult> {
    let hat = potential_spectrum(&spec.potential)?;
    let q_min = spec
        .potential
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let margin = 1e-6 * (1.0 + q_min.abs());

    let solve = |mode: i64| -> Result<(f64, usize)> {
        let (vals, accepted) = converge_lowest(
            |n| mode_matrix(spec, &hat, mode, n),
            config.initial_cutoff,
            config.max_cutoff,
            config.tolerance,
        )?;
        Ok((vals[0], accepted))
    };

    let (mut best, mut best_cutoff) = solve(0)?;
    let mut best_mode = 0i64;
    let mut scanned = 0i64;
    let mut abs_mode = 1i64;
    loop {
        let bound = (abs_mode * abs_mode) as f64 + q_min - margin;
        if bound >= best {
            break;
        }
        for mode in [abs_mode, -abs_mode] {
            let (value, accepted) = solve(mode)?;
            scanned = abs_mode;
            if value < best {
                best = value;
                best_mode = mode;
                best_cutoff = accepted;
            }
        }
        abs_mode += 1;
    }
    Ok(Mode2DResult {
        value: best,
        mode: best_mode,
        cutoff: best_cutoff,
        scanned,
    })
}
