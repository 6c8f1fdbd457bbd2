//! Arc length, curvature, arc-length resampling, curvature integrals,
//! rotation number, sphericity detection, and enclosed spherical area.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::expr::CurveDef;

/// Ambient classification of a closed curve.
///
/// `UnitSphere` requires max over samples of | |gamma|^2 - 1 | <= 1e-9 and
/// takes priority over `Plane` (a constant-height circle on the sphere is
/// spherical, not planar). `Plane` covers 2-coordinate curves and
/// 3-coordinate curves whose third coordinate is constant to 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientClass {
    Plane,
    UnitSphere,
    Space,
}

/// Outcome of the grid-based simplicity test (pairwise minimum distance
/// over the arc-length sample grid).
#[derive(Debug, Clone, PartialEq)]
pub enum Simplicity {
    Simple {
        min_gap: f64,
        threshold: f64,
    },
    NotSimple {
        min_gap: f64,
        threshold: f64,
        pair: (usize, usize),
    },
    /// The check was disabled (`simplicity_factor = 0`).
    Unchecked,
}

#[derive(Debug, Clone)]
pub struct GeometryOptions {
    /// Number of arc-length samples M; a power of two, at least 64.
    pub samples: usize,
    /// Simplicity threshold as a fraction of the grid spacing L/M.
    /// The default 0.25 gives the documented threshold L/(4M); 0 disables
    /// the check (the curve is then treated as simple and the enclosed
    /// area is the signed Gauss-Bonnet value normalized into (0, 4pi)).
    pub simplicity_factor: f64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            samples: 2048,
            simplicity_factor: 0.25,
        }
    }
}

impl GeometryOptions {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 64 || !self.samples.is_power_of_two() {
            return Err(Error::Domain(format!(
                "sample count must be a power of two >= 64, got {}",
                self.samples
            )));
        }
        if !(0.0..1.0).contains(&self.simplicity_factor) {
            return Err(Error::Domain(format!(
                "simplicity factor must lie in [0, 1), got {}",
                self.simplicity_factor
            )));
        }
        Ok(())
    }
}

/// Sampled arc-length data for a closed curve.
#[derive(Debug, Clone)]
pub struct CurveGeometry {
    pub name: String,
    /// Total arc length L.
    pub length: f64,
    /// Uniform arc-length grid s_i = i L / M, i = 0..M.
    pub s_grid: Vec<f64>,
    /// Parameter values t(s_i) realizing the grid.
    pub t_grid: Vec<f64>,
    /// Space curvature kappa(s_i) >= 0.
    pub kappa: Vec<f64>,
    /// Signed geodesic curvature; present for Plane and UnitSphere curves.
    pub kappa_g: Option<Vec<f64>>,
    pub ambient: AmbientClass,
    /// Tangent winding number; present for Plane curves.
    pub rotation_number: Option<i64>,
    /// |winding integral / 2pi - rotation_number| diagnostic.
    pub rotation_residual: Option<f64>,
    /// Enclosed spherical area A in (0, 4pi); present for UnitSphere curves
    /// that pass (or skip) the simplicity check.
    pub area: Option<f64>,
    pub simplicity: Simplicity,
}

const QUADRATURE_TOL: f64 = 1e-10;

/// Nodes and weights of the 5-point Gauss-Legendre rule on [-1, 1].
const GAUSS5: [(f64, f64); 5] = [
    (-0.906179845938664, 0.23692688505618908),
    (-0.5384693101056831, 0.47862867049936647),
    (0.0, 0.5688888888888889),
    (0.5384693101056831, 0.47862867049936647),
    (0.906179845938664, 0.23692688505618908),
];

fn gauss5<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GAUSS5 {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

fn adaptive_simpson<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(f64) -> Result<f64>>(
        f: &mut F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    let fa = f(a)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// L = integral of |gamma'| over the domain, to absolute tolerance 1e-10.
pub fn arc_length(curve: &CurveDef) -> Result<f64> {
    let (t0, t1) = curve.domain;
    adaptive_simpson(&mut |t| curve.speed(t), t0, t1, QUADRATURE_TOL)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Space curvature kappa = |gamma' x gamma''| / |gamma'|^3.
pub fn curvature_at(curve: &CurveDef, t: f64) -> Result<f64> {
    let speed = curve.speed(t)?;
    let v = curve.velocity(t)?;
    let a = curve.acceleration(t)?;
    Ok(norm(cross(v, a)) / speed.powi(3))
}

/// Signed geodesic curvature at `t` for the given ambient.
///
/// Sign convention (recorded in report metadata): on the unit sphere
/// kappa_g = det(gamma, gamma', gamma'') / |gamma'|^3, in the plane
/// kappa_g = (x'y'' - y'x'') / |gamma'|^3; both are positive for a
/// counterclockwise circle, which makes the Gauss-Bonnet area
/// A = 2pi - integral(kappa_g) agree with A = 2pi(1 - sqrt(1 - r^2))
/// for counterclockwise circles of Euclidean radius r on the sphere.
fn geodesic_curvature_at(curve: &CurveDef, t: f64, ambient: AmbientClass) -> Result<f64> {
    let speed = curve.speed(t)?;
    let v = curve.velocity(t)?;
    let a = curve.acceleration(t)?;
    let value = match ambient {
        AmbientClass::Plane => v[0] * a[1] - v[1] * a[0],
        AmbientClass::UnitSphere => {
            let p = curve.point(t)?;
            p[0] * (v[1] * a[2] - v[2] * a[1]) - p[1] * (v[0] * a[2] - v[2] * a[0])
                + p[2] * (v[0] * a[1] - v[1] * a[0])
        }
        AmbientClass::Space => {
            return Err(Error::Internal(
                "geodesic curvature requested for a space curve".into(),
            ))
        }
    };
    Ok(value / speed.powi(3))
}

const AMBIENT_SAMPLES: usize = 4096;
const SPHERE_TOL: f64 = 1e-9;
const PLANE_TOL: f64 = 1e-12;

fn classify_ambient(curve: &CurveDef) -> Result<AmbientClass> {
    let (t0, t1) = curve.domain;
    if curve.dim() == 2 {
        return Ok(AmbientClass::Plane);
    }
    let mut sphere_defect: f64 = 0.0;
    let mut plane_defect: f64 = 0.0;
    let z0 = curve.point(t0)?[2];
    for i in 0..AMBIENT_SAMPLES {
        let t = t0 + (t1 - t0) * (i as f64) / (AMBIENT_SAMPLES as f64);
        let p = curve.point(t)?;
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        sphere_defect = sphere_defect.max((r2 - 1.0).abs());
        plane_defect = plane_defect.max((p[2] - z0).abs());
    }
    if sphere_defect <= SPHERE_TOL {
        Ok(AmbientClass::UnitSphere)
    } else if plane_defect <= PLANE_TOL {
        Ok(AmbientClass::Plane)
    } else {
        Ok(AmbientClass::Space)
    }
}

/// Monotone cumulative arc-length table over 16 M panels with a 5-point
/// Gauss rule per panel, and its bracketed Newton inversion.
struct ArcTable {
    edges: Vec<f64>,
    cum: Vec<f64>,
    panel: Vec<f64>,
}

impl ArcTable {
    fn build(curve: &CurveDef, panels: usize) -> Result<ArcTable> {
        let (t0, t1) = curve.domain;
        let mut edges = Vec::with_capacity(panels + 1);
        for j in 0..=panels {
            edges.push(t0 + (t1 - t0) * (j as f64) / (panels as f64));
        }
        let mut cum = Vec::with_capacity(panels + 1);
        let mut panel = Vec::with_capacity(panels);
        cum.push(0.0);
        let mut speed = |t: f64| curve.speed(t);
        for j in 0..panels {
            let len = gauss5(&mut speed, edges[j], edges[j + 1])?;
            panel.push(len);
            cum.push(cum[j] + len);
        }
        Ok(ArcTable { edges, cum, panel })
    }

    /// Solves sigma(t) = s for t, to |sigma(t) - s| <= tol.
    fn invert(&self, curve: &CurveDef, s: f64, tol: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(self.edges[0]);
        }
        let p = self.panel.len();
        let j = self.cum[..p].partition_point(|&c| c <= s).saturating_sub(1);
        let mut lo = self.edges[j];
        let mut hi = self.edges[j + 1];
        let base = self.cum[j];
        let mut speed = |t: f64| curve.speed(t);
        let width = hi - lo;
        let mut x = if self.panel[j] > 0.0 {
            lo + width * ((s - base) / self.panel[j]).clamp(0.0, 1.0)
        } else {
            0.5 * (lo + hi)
        };
        for _ in 0..100 {
            let g = base + gauss5(&mut speed, self.edges[j], x)? - s;
            if g.abs() <= tol {
                return Ok(x);
            }
            if g > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let step = g / speed(x)?;
            let candidate = x - step;
            x = if candidate > lo && candidate < hi {
                candidate
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * width {
                return Ok(x);
            }
        }
        Err(Error::Internal(format!(
            "arc-length inversion failed to converge at s = {s}"
        )))
    }
}

pub fn reparametrize(curve: &CurveDef, samples: usize) -> Result<CurveGeometry> {
    reparametrize_with(
        curve,
        &GeometryOptions {
            samples,
            ..GeometryOptions::default()
        },
    )
}

pub fn reparametrize_with(curve: &CurveDef, options: &GeometryOptions) -> Result<CurveGeometry> {
    options.validate()?;
    let m = options.samples;
    let length = arc_length(curve)?;
    let table = ArcTable::build(curve, 16 * m)?;

    let step = length / (m as f64);
    let mut s_grid = Vec::with_capacity(m);
    let mut t_grid = Vec::with_capacity(m);
    for i in 0..m {
        let s = step * (i as f64);
        s_grid.push(s);
        t_grid.push(table.invert(curve, s, 1e-12 * length)?);
    }

    let mut kappa = Vec::with_capacity(m);
    for &t in &t_grid {
        kappa.push(curvature_at(curve, t)?);
    }

    let ambient = classify_ambient(curve)?;
    let kappa_g = match ambient {
        AmbientClass::Plane | AmbientClass::UnitSphere => {
            let mut kg = Vec::with_capacity(m);
            for &t in &t_grid {
                kg.push(geodesic_curvature_at(curve, t, ambient)?);
            }
            Some(kg)
        }
        AmbientClass::Space => None,
    };

    let (rotation_number, rotation_residual) = if ambient == AmbientClass::Plane {
        let kg = kappa_g.as_ref().unwrap();
        let winding = kg.iter().sum::<f64>() * step / TAU;
        let n = winding.round();
        (Some(n as i64), Some((winding - n).abs()))
    } else {
        (None, None)
    };

    let (simplicity, area) = if ambient == AmbientClass::UnitSphere {
        let simplicity = if options.simplicity_factor == 0.0 {
            Simplicity::Unchecked
        } else {
            grid_simplicity(curve, &t_grid, options.simplicity_factor * step)?
        };
        let area = match simplicity {
            Simplicity::NotSimple { .. } => None,
            _ => {
                let kg = kappa_g.as_ref().unwrap();
                let total_kg = kg.iter().sum::<f64>() * step;
                Some(normalize_area(2.0 * PI - total_kg))
            }
        };
        (simplicity, area)
    } else {
        (Simplicity::Unchecked, None)
    };

    Ok(CurveGeometry {
        name: curve.name.clone(),
        length,
        s_grid,
        t_grid,
        kappa,
        kappa_g,
        ambient,
        rotation_number,
        rotation_residual,
        area,
        simplicity,
    })
}

fn grid_simplicity(curve: &CurveDef, t_grid: &[f64], threshold: f64) -> Result<Simplicity> {
    let pts: Vec<[f64; 3]> = t_grid
        .iter()
        .map(|&t| curve.point(t))
        .collect::<Result<_>>()?;
    let mut min_gap = f64::INFINITY;
    let mut pair = (0, 0);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let dx = pts[i][0] - pts[j][0];
            let dy = pts[i][1] - pts[j][1];
            let dz = pts[i][2] - pts[j][2];
            let d2 = dx * dx + dy * dy + dz * dz;
            if d2 < min_gap * min_gap {
                min_gap = d2.sqrt();
                pair = (i, j);
            }
        }
    }
    if min_gap < threshold {
        Ok(Simplicity::NotSimple {
            min_gap,
            threshold,
            pair,
        })
    } else {
        Ok(Simplicity::Simple { min_gap, threshold })
    }
}

/// Maps the signed Gauss-Bonnet result into (0, 4pi] by 4pi-periodicity;
/// the orientation of traversal is preserved, not normalized away.
fn normalize_area(raw: f64) -> f64 {
    let four_pi = 4.0 * PI;
    let mut a = raw % four_pi;
    if a <= 0.0 {
        a += four_pi;
    }
    a
}

/// Total curvature by the trapezoid rule on the uniform periodic grid.
pub fn total_curvature(geom: &CurveGeometry) -> f64 {
    let step = geom.length / (geom.kappa.len() as f64);
    geom.kappa.iter().sum::<f64>() * step
}

/// (1/L) times the integral of kappa^2.
pub fn mean_square_curvature(geom: &CurveGeometry) -> f64 {
    geom.kappa.iter().map(|k| k * k).sum::<f64>() / (geom.kappa.len() as f64)
}

/// Winding number of the unit tangent of a plane curve.
pub fn rotation_number(geom: &CurveGeometry) -> Result<i64> {
    geom.rotation_number.ok_or_else(|| Error::NotPlanar {
        name: geom.name.clone(),
    })
}

/// Enclosed area on the unit sphere via Gauss-Bonnet.
pub fn spherical_area(geom: &CurveGeometry) -> Result<f64> {
    if geom.ambient != AmbientClass::UnitSphere {
        return Err(Error::NotSpherical {
            name: geom.name.clone(),
        });
    }
    match &geom.simplicity {
        Simplicity::NotSimple {
            min_gap,
            threshold,
            pair,
        } => Err(Error::SelfIntersection {
            name: geom.name.clone(),
            i: pair.0,
            j: pair.1,
            distance: *min_gap,
            threshold: *threshold,
        }),
        _ => geom
            .area
            .ok_or_else(|| Error::Internal("spherical area missing".into())),
    }
}
