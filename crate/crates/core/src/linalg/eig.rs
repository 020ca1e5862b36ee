use std::ops::Range;

use num_complex::Complex64;

use super::matrix::{CMat, HermitianMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-14;

/// Spectrum of a hermitian matrix with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: CMat,
    /// Index ranges of eigenvalues that coincide up to the grouping tolerance.
    pub groups: Vec<Range<usize>>,
    /// Spectral norm of the decomposed matrix.
    pub norm: f64,
}

impl EigDecomposition {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn vectors(&self, range: Range<usize>) -> Vec<Vec<Complex64>> {
        range.map(|j| self.eigenvectors.column(j)).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `V diag(f(λ)) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = CMat::zeros(n, n);
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let w = f(l);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[(j, k)].conj();
                }
            }
        }
        HermitianMatrix::from_cmat(&out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Unitary 2×2 rotation zeroing the off-diagonal entry of `[[alpha, gamma], [conj(gamma), beta]]`.
///
/// Returned as `(c, s, phase)`, acting on a column pair by
/// `x_p' = c x_p − s·phase x_q` and `x_q' = s x_p + c·phase x_q` with `phase = e^{−iφ}`.
pub(crate) fn jacobi_rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let r = gamma.norm();
    let phase = (gamma / r).conj();
    let theta = (beta - alpha) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

/// Right-multiplies columns `p`, `q` of `m` by the rotation.
pub(crate) fn rotate_columns(m: &mut CMat, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for k in 0..m.rows() {
        let (xp, xq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = xp * c - xq * phase * s;
        m[(k, q)] = xp * s + xq * phase * c;
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint rotation.
fn rotate_rows(m: &mut CMat, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let ph = phase.conj();
    for k in 0..m.cols() {
        let (xp, xq) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = xp * c - xq * ph * s;
        m[(q, k)] = xp * s + xq * ph * c;
    }
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition; eigenvalues ascending, grouped when
/// consecutive gaps are at most `tol_spec · max(1, ‖a‖)`.
pub fn eig_herm(a: &HermitianMatrix, tol_spec: f64) -> Result<EigDecomposition> {
    if !(tol_spec > 0.0) {
        return Err(Error::invalid("tol_spec must be positive"));
    }
    let n = a.n();
    let mut m = a.as_cmat().clone();
    let mut v = CMat::identity(n);
    let fro = a.frobenius_norm();
    let target = OFF_TOL * fro;
    let mut sweeps = 0;
    let mut off = off_norm(&m);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let g = m[(p, q)];
                if g.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (alpha, beta) = (m[(p, p)].re, m[(q, q)].re);
                let (c, s, phase) = jacobi_rotation(alpha, beta, g);
                rotate_columns(&mut m, p, q, c, s, phase);
                rotate_rows(&mut m, p, q, c, s, phase);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        off = off_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    let norm = eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let gap = tol_spec * norm.max(1.0);
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || eigenvalues[k] - eigenvalues[k - 1] > gap {
            groups.push(start..k);
            start = k;
        }
    }
    Ok(EigDecomposition { eigenvalues, eigenvectors, groups, norm })
}

/// Smallest eigenvalue.
pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    Ok(eig_herm(a, 1e-12)?.min_eigenvalue())
}
