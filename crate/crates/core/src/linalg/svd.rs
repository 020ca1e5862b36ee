use num_complex::Complex64;

use super::eig::{jacobi_rotation, rotate_columns};
use super::matrix::{vec_dot, vec_norm, CMat};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition from one-sided (Hestenes) Jacobi.
///
/// `m · v = u_scaled`, where the columns of `u_scaled` are mutually orthogonal
/// with norms `sigma`. Entries are sorted by decreasing singular value.
#[derive(Clone, Debug)]
pub struct JacobiSvd {
    pub sigma: Vec<f64>,
    pub v: CMat,
    pub u_scaled: CMat,
}

pub fn svd_jacobi(m: &CMat) -> JacobiSvd {
    let cols = m.cols();
    let mut a = m.clone();
    let mut v = CMat::identity(cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let cp = a.column(p);
                let cq = a.column(q);
                let alpha = vec_norm(&cp).powi(2);
                let beta = vec_norm(&cq).powi(2);
                let gamma = vec_dot(&cp, &cq);
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| vec_norm(&a.column(j))).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    JacobiSvd {
        sigma: order.iter().map(|&j| norms[j]).collect(),
        v: CMat::from_fn(cols, cols, |i, j| v[(i, order[j])]),
        u_scaled: CMat::from_fn(m.rows(), cols, |i, j| a[(i, order[j])]),
    }
}

/// Orthonormal basis (columns) of the null space of `m`, keeping right
/// singular vectors whose singular value is at most `cutoff`.
pub fn null_space(m: &CMat, cutoff: f64) -> CMat {
    let svd = svd_jacobi(m);
    let keep: Vec<usize> = (0..svd.sigma.len()).filter(|&j| svd.sigma[j] <= cutoff).collect();
    CMat::from_fn(m.cols(), keep.len(), |i, j| svd.v[(i, keep[j])])
}

/// Orthonormal basis of the column span of `m`, dropping directions whose
/// singular value is at most `cutoff`.
pub fn range_basis(m: &CMat, cutoff: f64) -> CMat {
    let svd = svd_jacobi(m);
    let keep: Vec<usize> = (0..svd.sigma.len()).filter(|&j| svd.sigma[j] > cutoff).collect();
    CMat::from_fn(m.rows(), keep.len(), |i, j| svd.u_scaled[(i, keep[j])] / svd.sigma[keep[j]])
}

/// Numerical rank with cutoff relative to the largest singular value.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let svd = svd_jacobi(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    svd.sigma.iter().filter(|&&s| s > rel_tol * smax.max(f64::MIN_POSITIVE)).count()
}

/// Real matrix embedded as a complex one, for reuse of the complex routines.
pub(crate) fn real_to_cmat(rows: usize, cols: usize, data: &[f64]) -> CMat {
    CMat::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

/// Null space of a real matrix given as rows, returned as real column vectors.
pub(crate) fn real_null_space(rows: &[Vec<f64>], cols: usize, cutoff: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..cols).map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let ns = null_space(&real_to_cmat(rows.len(), cols, &flat), cutoff);
    ns.columns().into_iter().map(|c| c.iter().map(|z| z.re).collect()).collect()
}
