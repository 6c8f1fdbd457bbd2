//! Flat-torus lattices for Hopf tori and the squared Dirac eigenvalue
//! family lambda^2(k,l) = k^2 m^2 + (4 pi^2/L^2)((2l+1) - k m A/(2 pi))^2
//! with its exact minimization over the integer lattice.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Flat torus R^2 / Gamma with holonomy angle and spin structure.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusLattice {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    /// Holonomy angle; A/2 for the Hopf construction.
    pub theta: f64,
    pub dual1: [f64; 2],
    pub dual2: [f64; 2],
    /// Half-integer shift pattern of the spectrum; (0, 1) on Hopf tori.
    pub spin: (u8, u8),
}

/// Dual basis: the unique pair with <v_i, w_j> = delta_ij, i.e. the
/// inverse transpose of the basis matrix.
pub fn dual_lattice(v1: [f64; 2], v2: [f64; 2]) -> Result<([f64; 2], [f64; 2])> {
    let det = v1[0] * v2[1] - v1[1] * v2[0];
    if det.abs() <= 1e-12 {
        return Err(Error::SingularBasis { det });
    }
    // + 0.0 normalizes -0 components
    let w1 = [v2[1] / det + 0.0, -v2[0] / det + 0.0];
    let w2 = [-v1[1] / det + 0.0, v1[0] / det + 0.0];
    Ok((w1, w2))
}

/// Lattice of the Hopf torus over a spherical curve of length L
/// enclosing area A: Gamma = span{(2pi, 0), (A/2, L/2)}, holonomy A/2,
/// spin structure (0, 1). A = 0 is accepted as the degenerate
/// rectangular case.
pub fn hopf_lattice(length: f64, area: f64) -> Result<TorusLattice> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!(
            "curve length must be positive, got {length}"
        )));
    }
    if !(0.0..=4.0 * PI).contains(&area) {
        return Err(Error::Domain(format!(
            "enclosed area must lie in [0, 4pi], got {area}"
        )));
    }
    let v1 = [TAU, 0.0];
    let v2 = [area / 2.0, length / 2.0];
    let (dual1, dual2) = dual_lattice(v1, v2)?;
    Ok(TorusLattice {
        v1,
        v2,
        theta: area / 2.0,
        dual1,
        dual2,
        spin: (0, 1),
    })
}

/// Squared Dirac eigenvalue on the Chern-class-m circle bundle torus:
/// k^2 m^2 + (4 pi^2 / L^2) ((2l+1) - k m A / (2 pi))^2. Requires L > 0.
pub fn dirac_eigenvalue(length: f64, area: f64, chern: i64, k: i64, l: i64) -> f64 {
    let base = TAU / length;
    let affine = (2 * l + 1) as f64 - (k * chern) as f64 * area / TAU;
    ((k * chern) * (k * chern)) as f64 + base * base * affine * affine
}

/// Minimum of the eigenvalue family over the integer lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMinimum {
    pub value: f64,
    pub k: i64,
    pub l: i64,
}

/// Exact integer minimization of lambda^2(k, l).
///
/// For fixed k the expression is a convex quadratic in l, minimal at the
/// rounding of (k m A / (2 pi) - 1) / 2; l is checked there and one step
/// to either side. k is scanned outward from 0 while (km)^2 does not
/// exceed the best value, which is exhaustive since the l-term is
/// nonnegative. Argmin ties (the family is invariant under
/// (k, l) -> (-k, -l-1)) resolve to the smallest |k|, then the smallest
/// |2l+1|, then k >= 0, then 2l+1 > 0, making the result deterministic.
pub fn dirac_minimum(length: f64, area: f64, chern: i64) -> Result<DiracMinimum> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!(
            "curve length must be positive, got {length}"
        )));
    }
    if !(0.0..=4.0 * PI).contains(&area) {
        return Err(Error::Domain(format!(
            "enclosed area must lie in [0, 4pi], got {area}"
        )));
    }
    if chern < 1 {
        return Err(Error::Domain(format!(
            "Chern class must be at least 1, got {chern}"
        )));
    }
    type RankKey = (i64, i64, u8, u8);
    let mut best: Option<(DiracMinimum, RankKey)> = None;
    let rank = |k: i64, l: i64| -> RankKey {
        (k.abs(), (2 * l + 1).abs(), u8::from(k < 0), u8::from(2 * l + 1 < 0))
    };
    let consider = |k: i64, best: &mut Option<(DiracMinimum, RankKey)>| {
        let center = ((k * chern) as f64 * area / TAU - 1.0) / 2.0;
        let l0 = center.round() as i64;
        for l in [l0 - 1, l0, l0 + 1] {
            let value = dirac_eigenvalue(length, area, chern, k, l);
            let key = rank(k, l);
            let better = match best {
                None => true,
                Some((cur, cur_key)) => {
                    value < cur.value || (value == cur.value && key < *cur_key)
                }
            };
            if better {
                *best = Some((DiracMinimum { value, k, l }, key));
            }
        }
    };
    consider(0, &mut best);
    let mut k = 1i64;
    loop {
        let kinetic = ((k * chern) * (k * chern)) as f64;
        if kinetic > best.as_ref().unwrap().0.value {
            break;
        }
        consider(k, &mut best);
        consider(-k, &mut best);
        k += 1;
    }
    Ok(best.unwrap().0)
}

/// First `count` squared Dirac eigenvalues of a circle of length L with
/// the non-trivial spin structure: (4 pi^2 / L^2)(k + 1/2)^2.
pub fn circle_dirac_spectrum(length: f64, count: usize) -> Result<Vec<f64>> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!(
            "circle length must be positive, got {length}"
        )));
    }
    if count == 0 {
        return Err(Error::Domain("spectrum count must be at least 1".into()));
    }
    let base = TAU / length;
    Ok((0..count)
        .map(|k| {
            let half = k as f64 + 0.5;
            base * base * half * half
        })
        .collect())
}
