//! Dense Hermitian eigenvalue computation.
//!
//! Real symmetric matrices are reduced to tridiagonal form by Householder
//! reflections and diagonalized by the implicitly shifted QL iteration.
//! Complex Hermitian matrices H = X + iY are embedded as the real
//! symmetric block matrix [[X, -Y], [Y, X]], whose spectrum is that of H
//! with every eigenvalue doubled; the doubled values are collapsed by
//! pairing adjacent entries of the sorted result.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds an n x n Hermitian matrix from entries on and above the
    /// diagonal; entries below are filled in by conjugation. `f` is only
    /// called with i <= j. Diagonal entries must have an exactly zero
    /// imaginary part.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<HermitianMatrix>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let z = f(i, j);
                if i == j && z.im != 0.0 {
                    return Err(Error::NonHermitian { i, j });
                }
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        Ok(HermitianMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        if self.data.iter().all(|z| z.im == 0.0) {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| self.data[i * n + j].re).collect())
                .collect();
            return symmetric_eigenvalues(rows);
        }
        // [[X, -Y], [Y, X]] with X = Re H (symmetric), Y = Im H (antisymmetric)
        let mut rows = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let z = self.data[i * n + j];
                rows[i][j] = z.re;
                rows[n + i][n + j] = z.re;
                rows[i][n + j] = -z.im;
                rows[n + i][j] = z.im;
            }
        }
        let doubled = symmetric_eigenvalues(rows)?;
        let mut out = Vec::with_capacity(n);
        for pair in doubled.chunks(2) {
            let gap = pair[1] - pair[0];
            let scale = 1.0 + pair[0].abs().max(pair[1].abs());
            if gap > 1e-8 * scale {
                return Err(Error::Internal(format!(
                    "embedded spectrum failed to pair: gap {gap:e} between {} and {}",
                    pair[0], pair[1]
                )));
            }
            out.push(0.5 * (pair[0] + pair[1]));
        }
        Ok(out)
    }
}

/// Eigenvalues of a dense real symmetric matrix, ascending. Only the
/// lower triangle of `a` is read.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut a, &mut d, &mut e);
    // renumber so e[i] couples d[i] and d[i+1]
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Householder reduction to tridiagonal form without eigenvector
/// accumulation. On exit d holds the diagonal and e[1..] the subdiagonal
/// (e[i] couples rows i-1 and i); `a` is destroyed.
#[allow(clippy::needless_range_loop)]
fn tridiagonalize(a: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i][k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i][j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i][i];
    }
}

/// Implicitly shifted QL iteration on a symmetric tridiagonal matrix;
/// e[i] couples d[i] and d[i+1], e[n-1] is workspace.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 50 {
                return Err(Error::Internal(format!(
                    "QL iteration failed to converge at row {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Repeatedly doubles the mode cutoff until the lowest eigenvalue moves
/// by less than `tol`, returning the accepted spectrum and cutoff.
///
/// Starts at `n0`; each step doubles the cutoff (capped at `n_max`) and
/// compares lowest eigenvalues. Exhausting `n_max` without the change
/// dropping below `tol` is an error. If `n0 >= n_max` the single solve
/// at `n_max` is accepted as is.
pub fn converge_lowest<F>(
    mut build: F,
    n0: usize,
    n_max: usize,
    tol: f64,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(usize) -> Result<HermitianMatrix>,
{
    if n0 == 0 {
        return Err(Error::Domain("initial mode cutoff must be positive".into()));
    }
    if n0 >= n_max {
        let vals = build(n_max)?.eigenvalues()?;
        return Ok((vals, n_max));
    }
    let mut cutoff = n0;
    let mut prev = build(cutoff)?.eigenvalues()?;
    let mut residual = f64::INFINITY;
    while cutoff < n_max {
        let next = (2 * cutoff).min(n_max);
        let vals = build(next)?.eigenvalues()?;
        residual = (vals[0] - prev[0]).abs();
        if residual < tol {
            return Ok((vals, next));
        }
        prev = vals;
        cutoff = next;
    }
    Err(Error::NoConvergence { cutoff, residual })
}
