use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use super::eig::eig_herm;
use super::matrix::{vec_norm, CMat, HermitianMatrix, ONE, ZERO};
use super::svd::{null_space, range_basis};
use crate::error::{Error, Result};

const PHASE_THRESHOLD: f64 = 1e-6;

/// Orthogonal projection, stored by a canonical orthonormal basis of its image.
///
/// Projections built from configuration subsets also remember the subset, in
/// which case the basis consists of the matching standard vectors.
#[derive(Clone)]
pub struct Projection {
    n: usize,
    basis: CMat,
    support: Option<Vec<usize>>,
}

impl Projection {
    pub fn zero(n: usize) -> Self {
        Projection { n, basis: CMat::zeros(n, 0), support: None }
    }

    pub fn identity(n: usize) -> Self {
        Projection { n, basis: CMat::identity(n), support: None }
    }

    /// Diagonal 0-1 projection onto the given configurations.
    pub fn from_support(n: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s: Vec<usize> = support.into_iter().collect();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&x| x >= n) {
            return Err(Error::invalid(format!("support index {bad} out of range for dimension {n}")));
        }
        let basis = CMat::from_fn(n, s.len(), |i, j| if s[j] == i { ONE } else { ZERO });
        Ok(Projection { n, basis, support: Some(s) })
    }

    /// Projection onto the span of `vectors`; directions with singular value
    /// at most `tol` are dropped.
    pub fn from_vectors(n: usize, vectors: &[Vec<Complex64>], tol: f64) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        if vectors.is_empty() {
            return Ok(Projection::zero(n));
        }
        let m = CMat::from_columns(n, vectors);
        Ok(Self::from_orthonormal(range_basis(&m, tol)))
    }

    /// Takes columns already known to be orthonormal.
    pub(crate) fn from_orthonormal(q: CMat) -> Self {
        let n = q.rows();
        Projection { n, basis: canonical_basis(&q), support: None }
    }

    /// Reads a projection matrix by its eigenvalues near one.
    pub fn from_matrix(p: &HermitianMatrix, tol: f64) -> Result<Self> {
        let e = eig_herm(p, 1e-9)?;
        let keep: Vec<usize> = (0..p.n()).filter(|&k| e.eigenvalues[k] > 0.5).collect();
        for &l in &e.eigenvalues {
            if l.abs() > tol && (l - 1.0).abs() > tol {
                return Err(Error::invalid(format!("matrix is not a projection (eigenvalue {l})")));
            }
        }
        let q = CMat::from_fn(p.n(), keep.len(), |i, j| e.eigenvectors[(i, keep[j])]);
        Ok(Self::from_orthonormal(q))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.rank() == self.n
    }

    /// Canonical orthonormal image basis, one column per rank.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn support(&self) -> Option<&[usize]> {
        self.support.as_deref()
    }

    /// The matrix `Q Q*`.
    pub fn matrix(&self) -> HermitianMatrix {
        HermitianMatrix::from_cmat(&self.basis.matmul(&self.basis.adjoint()))
    }

    /// The complementary projection `id − p`.
    pub fn complement(&self) -> Projection {
        if let Some(s) = &self.support {
            let rest: Vec<usize> = (0..self.n).filter(|i| s.binary_search(i).is_err()).collect();
            return Projection::from_support(self.n, rest).expect("indices in range");
        }
        if self.is_zero() {
            return Projection::identity(self.n);
        }
        if self.is_identity() {
            return Projection::zero(self.n);
        }
        Self::from_orthonormal(null_space(&self.basis.adjoint(), 1e-8))
    }

    /// `‖(1 − p) v‖`.
    pub fn residual(&self, v: &[Complex64]) -> f64 {
        let coeffs = self.basis.adjoint().mul_vec(v);
        let back = self.basis.mul_vec(&coeffs);
        let diff: Vec<Complex64> = v.iter().zip(&back).map(|(a, b)| a - b).collect();
        vec_norm(&diff)
    }

    /// `p · a · p` written `‖p a‖`-style: Frobenius norm of `Q* a`.
    pub fn annihilation_residual(&self, a: &HermitianMatrix) -> f64 {
        self.basis.adjoint().matmul(a.as_cmat()).frobenius_norm()
    }

    /// Image inclusion, checked column by column.
    pub fn leq(&self, other: &Projection, tol: f64) -> bool {
        loewner_leq(self, other, tol)
    }

    pub fn approx_eq(&self, other: &Projection, tol: f64) -> bool {
        approx_eq(self, other, tol)
    }

    /// Flattened canonical basis, used for deterministic ordering.
    pub fn canonical_key(&self) -> Vec<f64> {
        self.basis.data().iter().flat_map(|z| [z.re, z.im]).collect()
    }

    /// Total order by rank, then canonical form.
    pub fn canonical_cmp(&self, other: &Projection) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| {
            let (a, b) = (self.canonical_key(), other.canonical_key());
            for (x, y) in a.iter().zip(&b) {
                match x.total_cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

impl fmt::Debug for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.support {
            Some(s) => write!(f, "Projection(n={}, support={:?})", self.n, s),
            None => write!(f, "Projection(n={}, rank={}, basis={:?})", self.n, self.rank(), self.basis),
        }
    }
}

/// Pivoted Gram-Schmidt on the columns of `Q Q*`, with the first significant
/// entry of each vector made real positive. Depends only on the projection.
fn canonical_basis(q: &CMat) -> CMat {
    let n = q.rows();
    let r = q.cols();
    if r == 0 {
        return CMat::zeros(n, 0);
    }
    if r == n {
        return CMat::identity(n);
    }
    let p = q.matmul(&q.adjoint());
    let mut cols: Vec<Vec<Complex64>> = p.columns();
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(r);
    let mut used = vec![false; n];
    for _ in 0..r {
        let norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
        let best = (0..n).filter(|&j| !used[j]).map(|j| norms[j]).fold(0.0, f64::max);
        let pick = (0..n)
            .find(|&j| !used[j] && norms[j] >= best * (1.0 - 1e-9))
            .expect("rank exceeds available columns");
        used[pick] = true;
        let mut v: Vec<Complex64> = cols[pick].iter().map(|z| z / norms[pick]).collect();
        for prev in &out {
            let d: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(prev) {
                *x -= d * y;
            }
        }
        let nv = vec_norm(&v);
        for x in v.iter_mut() {
            *x /= nv;
        }
        if let Some(z) = v.iter().find(|z| z.norm() > PHASE_THRESHOLD) {
            let ph = z.conj() / z.norm();
            for x in v.iter_mut() {
                *x *= ph;
            }
        }
        for c in cols.iter_mut() {
            let d: Complex64 = v.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in c.iter_mut().zip(&v) {
                *x -= d * y;
            }
        }
        out.push(v);
    }
    CMat::from_columns(n, &out)
}

/// Projection onto the eigenvectors of the lowest eigenvalue group.
pub fn ground_projection(a: &HermitianMatrix, tol_spec: f64) -> Result<Projection> {
    let e = eig_herm(a, tol_spec)?;
    let g = e.groups[0].clone();
    let q = CMat::from_fn(a.n(), g.len(), |i, j| e.eigenvectors[(i, g.start + j)]);
    Ok(Projection::from_orthonormal(q))
}

/// Projection onto eigenvectors with `|λ| ≤ tol_rank · max(1, ‖a‖)`.
pub fn kernel_projection(a: &HermitianMatrix, tol_rank: f64) -> Result<Projection> {
    let e = eig_herm(a, 1e-9)?;
    let cut = tol_rank * e.norm.max(1.0);
    let keep: Vec<usize> = (0..a.n()).filter(|&k| e.eigenvalues[k].abs() <= cut).collect();
    let q = CMat::from_fn(a.n(), keep.len(), |i, j| e.eigenvectors[(i, keep[j])]);
    Ok(Projection::from_orthonormal(q))
}

/// `image(p) ⊆ image(q)`, tested by `‖(1 − q) v‖ ≤ tol` on the basis of `p`.
pub fn loewner_leq(p: &Projection, q: &Projection, tol: f64) -> bool {
    assert_eq!(p.n, q.n, "projections of different dimension");
    if p.rank() > q.rank() {
        return false;
    }
    if let (Some(a), Some(b)) = (&p.support, &q.support) {
        return a.iter().all(|x| b.binary_search(x).is_ok());
    }
    if q.is_identity() || p.is_zero() {
        return true;
    }
    (0..p.rank()).all(|j| q.residual(&p.basis.column(j)) <= tol)
}

/// Equal rank and mutual inclusion up to `tol`.
pub fn approx_eq(p: &Projection, q: &Projection, tol: f64) -> bool {
    p.n == q.n && p.rank() == q.rank() && loewner_leq(p, q, tol)
}

/// Projection onto `image(p) ∩ image(q)`; directions whose principal angle
/// sine exceeds `tol` are discarded.
pub fn image_intersection(p: &Projection, q: &Projection, tol: f64) -> Projection {
    assert_eq!(p.n, q.n, "projections of different dimension");
    if let (Some(a), Some(b)) = (&p.support, &q.support) {
        let s: Vec<usize> = a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect();
        return Projection::from_support(p.n, s).expect("indices in range");
    }
    if p.is_zero() || q.is_identity() {
        return p.clone();
    }
    if q.is_zero() || p.is_identity() {
        return q.clone();
    }
    let (small, large) = if p.rank() <= q.rank() { (p, q) } else { (q, p) };
    let coeffs = large.basis.adjoint().matmul(&small.basis);
    let inside = large.basis.matmul(&coeffs);
    let mut outside = small.basis.clone();
    outside.add_scaled(-1.0, &inside);
    let ns = null_space(&outside, tol);
    if ns.cols() == 0 {
        return Projection::zero(p.n);
    }
    let vectors = small.basis.matmul(&ns);
    Projection::from_orthonormal(range_basis(&vectors, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq3() -> f64 {
        3f64.sqrt()
    }

    /// `p(z) ⊕ x` for a unit complex `z`: image of `p(z)` is `(1, z)/√2`.
    fn pz_plus(z: Complex64, third: bool) -> Projection {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut vs = vec![vec![Complex64::new(s, 0.0), z * s, ZERO]];
        if third {
            vs.push(vec![ZERO, ZERO, ONE]);
        }
        Projection::from_vectors(3, &vs, 1e-12).unwrap()
    }

    fn u_plus() -> HermitianMatrix {
        let z = Complex64::new(-0.5, sq3() / 2.0);
        HermitianMatrix::new(3, vec![ONE, z.conj(), ZERO, z, ONE, ZERO, ZERO, ZERO, ZERO]).unwrap()
    }

    #[test]
    fn ground_projection_of_sigma_x_plus_two() {
        let a = HermitianMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 2.0]]).unwrap();
        let p = ground_projection(&a, 1e-9).unwrap();
        assert!(approx_eq(&p, &pz_plus(Complex64::new(-1.0, 0.0), false), 1e-10));
    }

    #[test]
    fn ground_projection_of_u_plus() {
        let zp = Complex64::new(-0.5, sq3() / 2.0);
        let p = ground_projection(&u_plus(), 1e-9).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(approx_eq(&p, &pz_plus(-zp, true), 1e-10));
    }

    #[test]
    fn ground_projection_of_identity() {
        assert!(ground_projection(&HermitianMatrix::identity(3), 1e-9).unwrap().is_identity());
    }

    #[test]
    fn kernels() {
        let k = kernel_projection(&HermitianMatrix::diagonal(&[0.0, 0.0, 5.0]), 1e-9).unwrap();
        assert!(approx_eq(&k, &Projection::from_support(3, [0, 1]).unwrap(), 1e-12));
        let a = HermitianMatrix::from_real_rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
        let k = kernel_projection(&a, 1e-9).unwrap();
        assert!(approx_eq(&k, &Projection::from_support(3, [2]).unwrap(), 1e-12));
        let pd = HermitianMatrix::diagonal(&[1.0, 2.0]);
        assert!(kernel_projection(&pd, 1e-9).unwrap().is_zero());
    }

    #[test]
    fn order_examples() {
        let a = Projection::from_vectors(3, &[vec![ONE, ZERO, ZERO]], 1e-12).unwrap();
        let b = Projection::from_vectors(3, &[vec![ONE, ZERO, ZERO], vec![ZERO, ONE, ZERO]], 1e-12).unwrap();
        assert!(loewner_leq(&a, &b, 1e-9));
        assert!(!loewner_leq(&b, &a, 1e-9));
        let zp = Complex64::new(-0.5, sq3() / 2.0);
        assert!(loewner_leq(&pz_plus(-zp, false), &pz_plus(-zp, true), 1e-9));
        let e0 = Projection::from_vectors(2, &[vec![ONE, ZERO]], 1e-12).unwrap();
        let e1 = Projection::from_vectors(2, &[vec![ZERO, ONE]], 1e-12).unwrap();
        assert!(!loewner_leq(&e0, &e1, 1e-9));
    }

    #[test]
    fn intersections() {
        let d = |v: &[f64]| {
            let m = HermitianMatrix::diagonal(v);
            Projection::from_matrix(&m, 1e-9).unwrap()
        };
        let r = image_intersection(&d(&[1.0, 1.0, 0.0]), &d(&[0.0, 1.0, 1.0]), 1e-9);
        assert!(approx_eq(&r, &d(&[0.0, 1.0, 0.0]), 1e-12));

        let zp = Complex64::new(-0.5, sq3() / 2.0);
        let r = image_intersection(&pz_plus(-zp, true), &pz_plus(-zp.conj(), true), 1e-9);
        assert!(approx_eq(&r, &d(&[0.0, 0.0, 1.0]), 1e-12));

        let a = Projection::from_support(8, [0b000, 0b001, 0b010]).unwrap();
        let b = Projection::from_support(8, [0b010, 0b011]).unwrap();
        assert_eq!(image_intersection(&a, &b, 0.0).support(), Some(&[0b010][..]));
    }

    #[test]
    fn canonical_form_ignores_basis_choice() {
        let i = Complex64::new(0.0, 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = Projection::from_vectors(3, &[vec![ONE, ZERO, ZERO], vec![ZERO, ONE, ZERO]], 1e-12).unwrap();
        let b = Projection::from_vectors(3, &[vec![i * s, ONE * s, ZERO], vec![ONE * s, i * s, ZERO]], 1e-12).unwrap();
        let diff = a.basis().data().iter().zip(b.basis().data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        assert_eq!(a.canonical_cmp(&b), Ordering::Equal);
    }

    #[test]
    fn complement_roundtrip() {
        let zp = Complex64::new(-0.5, sq3() / 2.0);
        let p = pz_plus(zp, false);
        let c = p.complement();
        assert_eq!(c.rank(), 2);
        assert!(image_intersection(&p, &c, 1e-9).is_zero());
        assert!(approx_eq(&c.complement(), &p, 1e-10));
    }
}
