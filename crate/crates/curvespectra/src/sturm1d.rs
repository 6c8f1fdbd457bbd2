//! Periodic Sturm-Liouville operator -4 d^2/ds^2 + q(s) on a circle of
//! circumference L, diagonalized in the Fourier basis e^{2 pi i n s / L}.
//!
//! The Galerkin matrix over modes n in [-N, N] is
//!   H(n, n') = 4 (2 pi n / L)^2 delta(n, n') + qhat(n - n'),
//! where qhat is the discrete Fourier transform of the potential samples.
//! The cutoff N is doubled until the lowest eigenvalue stabilizes.

use num_complex::Complex64;

use crate::eigensolve::{converge_lowest, symmetric_eigenvalues, HermitianMatrix};
use crate::error::{Error, Result};

/// Convergence policy for the cutoff-doubling loop.
#[derive(Debug, Clone)]
pub struct HillConfig {
    pub initial_cutoff: usize,
    pub max_cutoff: usize,
    /// Absolute tolerance on the change of the lowest eigenvalue per
    /// doubling.
    pub tolerance: f64,
}

impl Default for HillConfig {
    fn default() -> Self {
        HillConfig {
            initial_cutoff: 32,
            max_cutoff: 512,
            tolerance: 1e-9,
        }
    }
}

/// Eigenvalues of the accepted Galerkin matrix, ascending, together with
/// the accepted mode cutoff N (matrix dimension 2N + 1).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub cutoff: usize,
}

impl Spectrum {
    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn matrix_dim(&self) -> usize {
        2 * self.cutoff + 1
    }
}

/// DFT of real samples: qhat(k) = (1/M) sum_j q_j e^{-2 pi i j k / M},
/// for k = 0..M-1. Conjugate symmetry qhat(M - k) = conj(qhat(k)) holds
/// exactly: entries are computed for k <= M/2 and mirrored, with the
/// imaginary parts at k = 0 and k = M/2 set to zero.
pub fn potential_spectrum(samples: &[f64]) -> Result<Vec<Complex64>> {
    let m = samples.len();
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "potential sample count must be even and at least 2, got {m}"
        )));
    }
    let roots: Vec<Complex64> = (0..m)
        .map(|r| Complex64::from_polar(1.0, -std::f64::consts::TAU * (r as f64) / (m as f64)))
        .collect();
    let mut hat = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..=m / 2 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &q) in samples.iter().enumerate() {
            acc += q * roots[(j * k) % m];
        }
        acc /= m as f64;
        if k == 0 || k == m / 2 {
            acc.im = 0.0;
        }
        hat[k] = acc;
        if k != 0 {
            hat[m - k] = acc.conj();
        }
    }
    Ok(hat)
}

/// Value of qhat at a signed frequency, folding into 0..M-1.
fn hat_at(hat: &[Complex64], freq: i64) -> Complex64 {
    let m = hat.len() as i64;
    hat[(freq.rem_euclid(m)) as usize]
}

/// Galerkin matrix of -4 d^2/ds^2 + q over modes [-N, N]. Requires the
/// anti-aliasing bound 2N <= M/2 so every entry qhat(n - n') is a
/// below-Nyquist frequency of the sample grid.
pub fn hill_matrix(
    length: f64,
    hat: &[Complex64],
    cutoff: usize,
) -> Result<HermitianMatrix> {
    let m = hat.len();
    if 2 * cutoff > m / 2 {
        return Err(Error::CutoffAliasing {
            cutoff,
            samples: m,
        });
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("curve length must be positive, got {length}")));
    }
    let dim = 2 * cutoff + 1;
    let base = std::f64::consts::TAU / length;
    HermitianMatrix::from_fn(dim, |i, j| {
        let n = i as i64 - cutoff as i64;
        let np = j as i64 - cutoff as i64;
        let mut entry = hat_at(hat, n - np);
        if n == np {
            let nu = base * (n as f64);
            entry += 4.0 * nu * nu;
        }
        entry
    })
}

/// Full Hill computation: transform the potential samples, then double
/// the cutoff until the lowest eigenvalue moves by less than the
/// configured tolerance.
pub fn hill_spectrum(length: f64, potential: &[f64], config: &HillConfig) -> Result<Spectrum> {
    let hat = potential_spectrum(potential)?;
    let (eigenvalues, cutoff) = converge_lowest(
        |n| hill_matrix(length, &hat, n),
        config.initial_cutoff,
        config.max_cutoff,
        config.tolerance,
    )?;
    Ok(Spectrum { eigenvalues, cutoff })
}

/// Resamples M uniform periodic samples onto J uniform nodes: by strided
/// subsampling when J divides M, otherwise by trigonometric
/// interpolation (the Nyquist mode contributes a pure cosine).
#[allow(clippy::needless_range_loop)]
pub fn resample(samples: &[f64], nodes: usize) -> Result<Vec<f64>> {
    let m = samples.len();
    if nodes == 0 {
        return Err(Error::Domain("resample target must be positive".into()));
    }
    if m.is_multiple_of(nodes) {
        let stride = m / nodes;
        return Ok((0..nodes).map(|j| samples[j * stride]).collect());
    }
    let hat = potential_spectrum(samples)?;
    let out = (0..nodes)
        .map(|jp| {
            let x = (jp as f64) / (nodes as f64);
            let mut value = hat[0].re;
            for k in 1..m / 2 {
                let phase = std::f64::consts::TAU * (k as f64) * x;
                value += 2.0 * (hat[k].re * phase.cos() - hat[k].im * phase.sin());
            }
            let nyquist = std::f64::consts::TAU * ((m / 2) as f64) * x;
            value += hat[m / 2].re * nyquist.cos();
            value
        })
        .collect();
    Ok(out)
}

/// Lowest `count` eigenvalues of the second-order central-difference
/// discretization of -4 d^2/ds^2 + q on J periodic nodes.
pub fn finite_difference_spectrum(
    length: f64,
    potential: &[f64],
    nodes: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if nodes < 3 {
        return Err(Error::Domain(format!(
            "finite differences need at least 3 nodes, got {nodes}"
        )));
    }
    let q = resample(potential, nodes)?;
    let h = length / (nodes as f64);
    let diag = 8.0 / (h * h);
    let off = -4.0 / (h * h);
    let rows: Vec<Vec<f64>> = (0..nodes)
        .map(|i| {
            (0..nodes)
                .map(|j| {
                    if i == j {
                        diag + q[i]
                    } else if (i + 1) % nodes == j || (j + 1) % nodes == i {
                        off
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let vals = symmetric_eigenvalues(rows)?;
    Ok(vals.into_iter().take(count).collect())
}

/// Eliminates the O(h^2) error of the central-difference eigenvalues by
/// Richardson extrapolation between J and 2J nodes:
/// (4 mu(2J) - mu(J)) / 3.
pub fn richardson_spectrum(
    length: f64,
    potential: &[f64],
    nodes: usize,
    count: usize,
) -> Result<Vec<f64>> {
    let coarse = finite_difference_spectrum(length, potential, nodes, count)?;
    let fine = finite_difference_spectrum(length, potential, 2 * nodes, count)?;
    Ok(coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn sample(f: impl Fn(f64) -> f64, length: f64, m: usize) -> Vec<f64> {
        (0..m)
            .map(|j| f(length * (j as f64) / (m as f64)))
            .collect()
    }

    #[test]
    fn dft_of_cosine() {
        let m = 64;
        let q = sample(|s| s.cos(), TAU, m);
        let hat = potential_spectrum(&q).unwrap();
        assert!((hat[0].norm()) < 1e-14);
        assert!((hat[1] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((hat[m - 1] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        for (k, v) in hat.iter().enumerate().take(m - 1).skip(2) {
            assert!(v.norm() < 1e-14, "leak at {k}");
        }
    }

    #[test]
    fn dft_conjugate_symmetry_is_exact() {
        let m = 32;
        let q: Vec<f64> = (0..m).map(|j| ((j * j + 1) as f64).sin()).collect();
        let hat = potential_spectrum(&q).unwrap();
        assert_eq!(hat[0].im, 0.0);
        assert_eq!(hat[m / 2].im, 0.0);
        for k in 1..m {
            assert_eq!(hat[k].re, hat[m - k].re);
            assert_eq!(hat[k].im, -hat[m - k].im);
        }
    }

    #[test]
    fn dft_parseval() {
        let m = 128;
        let q: Vec<f64> = (0..m).map(|j| (0.3 * j as f64).sin() + 0.1).collect();
        let hat = potential_spectrum(&q).unwrap();
        let lhs: f64 = hat.iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 = q.iter().map(|x| x * x).sum::<f64>() / (m as f64);
        assert!((lhs - rhs).abs() < 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn constant_potential_exact_spectrum() {
        // q = c on L = 2 pi: eigenvalues 4 n^2 + c, n in Z
        let c = 3.0;
        let q = vec![c; 256];
        let spec = hill_spectrum(TAU, &q, &HillConfig::default()).unwrap();
        let mut expected: Vec<f64> = vec![c];
        for n in 1..=10 {
            let v = 4.0 * (n * n) as f64 + c;
            expected.push(v);
            expected.push(v);
        }
        for (got, want) in spec.eigenvalues.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                "{got} vs {want}"
            );
        }
        assert_eq!(spec.cutoff, 64);
        assert_eq!(spec.matrix_dim(), 129);
    }

    #[test]
    fn mathieu_ground_state() {
        // -4 u'' + 2 cos(s) u = mu u over 2 pi maps to the Mathieu
        // equation y'' + (a - 2 cos 2x) y = 0; the lowest periodic
        // eigenvalue is the characteristic value a_0(1) = -0.455138604...
        let q = sample(|s| 2.0 * s.cos(), TAU, 512);
        let spec = hill_spectrum(TAU, &q, &HillConfig::default()).unwrap();
        assert!((spec.lowest() - (-0.45513860410)).abs() < 1e-7);
        let oracle = richardson_spectrum(TAU, &q, 512, 1).unwrap();
        assert!((spec.lowest() - oracle[0]).abs() < 1e-6);
    }

    #[test]
    fn hill_matches_finite_difference_oracle() {
        let q = sample(|s| 2.0 * s.cos() + 0.5 * (2.0 * s).sin() - 0.3, TAU, 256);
        let spec = hill_spectrum(TAU, &q, &HillConfig::default()).unwrap();
        let oracle = richardson_spectrum(TAU, &q, 256, 5).unwrap();
        for (h, o) in spec.eigenvalues.iter().take(5).zip(oracle.iter()) {
            assert!((h - o).abs() < 1e-6, "{h} vs {o}");
        }
    }

    #[test]
    fn length_scaling() {
        // scaling the circle by lambda scales eigenvalues by 1/lambda^2
        // when the potential is scaled accordingly
        let m = 256;
        let q1 = sample(|s| (2.0 * s).cos(), TAU, m);
        let lambda = 2.5;
        let q2: Vec<f64> = q1.iter().map(|v| v / (lambda * lambda)).collect();
        let s1 = hill_spectrum(TAU, &q1, &HillConfig::default()).unwrap();
        let s2 = hill_spectrum(lambda * TAU, &q2, &HillConfig::default()).unwrap();
        for (a, b) in s1.eigenvalues.iter().take(8).zip(s2.eigenvalues.iter()) {
            assert!((a / (lambda * lambda) - b).abs() < 1e-9);
        }
    }

    fn small_config() -> HillConfig {
        HillConfig {
            initial_cutoff: 16,
            max_cutoff: 64,
            ..HillConfig::default()
        }
    }

    #[test]
    fn constant_shift_moves_spectrum() {
        let m = 256;
        let q = sample(|s| s.sin().powi(2), TAU, m);
        let shifted: Vec<f64> = q.iter().map(|v| v + 5.0).collect();
        let s1 = hill_spectrum(TAU, &q, &small_config()).unwrap();
        let s2 = hill_spectrum(TAU, &shifted, &small_config()).unwrap();
        for (a, b) in s1.eigenvalues.iter().take(10).zip(s2.eigenvalues.iter()) {
            assert!((a + 5.0 - b).abs() < 1e-9);
        }
    }

    #[test]
    fn reflection_preserves_spectrum() {
        let m = 256;
        let q = sample(|s| (s).cos() + 0.4 * (3.0 * s).sin(), TAU, m);
        let mut reflected = q.clone();
        reflected[1..].reverse();
        let s1 = hill_spectrum(TAU, &q, &small_config()).unwrap();
        let s2 = hill_spectrum(TAU, &reflected, &small_config()).unwrap();
        for (a, b) in s1.eigenvalues.iter().take(10).zip(s2.eigenvalues.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn aliasing_bound_enforced() {
        let q = vec![1.0; 128];
        let hat = potential_spectrum(&q).unwrap();
        assert!(hill_matrix(TAU, &hat, 32).is_ok());
        let err = hill_matrix(TAU, &hat, 33).unwrap_err();
        assert!(matches!(
            err,
            Error::CutoffAliasing {
                cutoff: 33,
                samples: 128
            }
        ));
    }

    #[test]
    fn resample_stride_and_trig_paths() {
        let m = 64;
        let f = |s: f64| (3.0 * s).cos() - 2.0 * (s).sin();
        let q = sample(f, TAU, m);
        let strided = resample(&q, 16).unwrap();
        for (j, v) in strided.iter().enumerate() {
            assert_eq!(*v, q[4 * j]);
        }
        let trig = resample(&q, 24).unwrap();
        for (j, v) in trig.iter().enumerate() {
            let s = TAU * (j as f64) / 24.0;
            assert!((v - f(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn richardson_improves_on_plain_differences() {
        let q = vec![0.0; 128];
        let plain = finite_difference_spectrum(TAU, &q, 64, 3).unwrap();
        let extrapolated = richardson_spectrum(TAU, &q, 64, 3).unwrap();
        // exact eigenvalues: 0, 4, 4
        assert!((plain[1] - 4.0).abs() > 1e-3);
        assert!((extrapolated[1] - 4.0).abs() < 1e-4);
        assert!(extrapolated[0].abs() < 1e-10);
    }

    #[test]
    fn odd_sample_count_rejected() {
        assert!(potential_spectrum(&[1.0; 33]).is_err());
    }

    #[test]
    fn invalid_length_rejected() {
        let hat = potential_spectrum(&[1.0; 64]).unwrap();
        assert!(matches!(
            hill_matrix(-1.0, &hat, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pi_periodic_potential_on_two_pi_circle() {
        // q(s) = 2 cos(2s): eigenfunctions split into even/odd mode
        // classes; check against the finite-difference oracle
        let q = sample(|s| 2.0 * (2.0 * s).cos(), TAU, 256);
        let spec = hill_spectrum(TAU, &q, &HillConfig::default()).unwrap();
        let oracle = richardson_spectrum(TAU, &q, 256, 4).unwrap();
        for (h, o) in spec.eigenvalues.iter().take(4).zip(oracle.iter()) {
            assert!((h - o).abs() < 1e-5, "{h} vs {o}");
        }
    }
}
