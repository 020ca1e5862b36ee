//! Operator subspaces `U` of hermitian matrices, the orthogonal projection onto
//! them, and the linear sections `L(p) = {u ∈ U : p u = 0}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::linalg::{dot, gram_schmidt, null_space as q_null_space, to_f64, Q};
use crate::linalg::{real_null_space, HermitianMatrix, Projection};

/// Which arithmetic backs a subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Functions on a finite configuration space with rational entries.
    ExactCommutative,
    /// Hermitian matrices in double precision.
    FloatHermitian,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::ExactCommutative => "exact-commutative",
            Engine::FloatHermitian => "float-hermitian",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-commutative" => Ok(Engine::ExactCommutative),
            "float" | "float-hermitian" => Ok(Engine::FloatHermitian),
            other => Err(Error::invalid(format!("unknown engine '{other}' (expected exact or float)"))),
        }
    }
}

#[derive(Clone, Debug)]
struct ExactData {
    /// Pairwise orthogonal, not normalized.
    vectors: Vec<Vec<Q>>,
    /// Basis of the orthogonal complement of `U` in `ℚ^X`.
    complement: Vec<Vec<Q>>,
}

/// A real vector space `U` of hermitian `n × n` matrices.
#[derive(Clone, Debug)]
pub struct OperatorSubspace {
    ambient_n: usize,
    engine: Engine,
    basis: Vec<HermitianMatrix>,
    exact: Option<ExactData>,
    contains_identity: bool,
    site_dims: Option<Vec<usize>>,
    spanning_set: Vec<HermitianMatrix>,
}

/// Orthonormal basis of `L(p)` together with its coordinates in the basis of `U`.
#[derive(Clone, Debug)]
pub struct LinearSection {
    pub base_projection: Projection,
    pub basis: Vec<HermitianMatrix>,
    /// Coordinates of each basis element with respect to the basis of `U`.
    pub coordinates: Vec<Vec<f64>>,
    /// Pairwise orthogonal rational functions spanning `L(p)` (exact engine only).
    pub exact_basis: Option<Vec<Vec<Q>>>,
    pub dim: usize,
}

impl OperatorSubspace {
    /// Orthonormalizes the spanning set by modified Gram-Schmidt, dropping
    /// inputs whose residual is at most `tol_rank · max(1, largest norm)`.
    ///
    /// With the exact engine every matrix must be diagonal; its diagonal is
    /// read as a function on `{0, …, n−1}`.
    pub fn from_spanning_set(matrices: &[HermitianMatrix], engine: Engine, tol_rank: f64) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptySpanningSet)?;
        let n = first.n();
        if let Some(m) = matrices.iter().find(|m| m.n() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.n() });
        }
        match engine {
            Engine::ExactCommutative => {
                let mut vectors = Vec::with_capacity(matrices.len());
                for m in matrices {
                    if !m.is_diagonal(0.0) {
                        return Err(Error::invalid("the exact engine needs diagonal matrices"));
                    }
                    let v: Option<Vec<Q>> = m.diagonal_values().iter().map(|&x| BigRational::from_f64(x)).collect();
                    vectors.push(v.ok_or_else(|| Error::invalid("non-finite diagonal entry"))?);
                }
                let mut u = Self::from_functions(n, &vectors)?;
                u.spanning_set = matrices.to_vec();
                Ok(u)
            }
            Engine::FloatHermitian => {
                let scale = matrices.iter().map(|m| m.frobenius_norm()).fold(1.0, f64::max);
                let cut = tol_rank * scale;
                let mut basis: Vec<HermitianMatrix> = Vec::new();
                for m in matrices {
                    let mut w = m.clone();
                    for _ in 0..2 {
                        for b in &basis {
                            let c = b.inner(&w);
                            w.add_scaled(-c, b);
                        }
                    }
                    let norm = w.frobenius_norm();
                    if norm > cut {
                        basis.push(w.scale(1.0 / norm));
                    }
                }
                Ok(Self::from_orthonormal(n, basis, matrices.to_vec()))
            }
        }
    }

    fn from_orthonormal(n: usize, basis: Vec<HermitianMatrix>, spanning_set: Vec<HermitianMatrix>) -> Self {
        let id = HermitianMatrix::identity(n);
        let mut u = OperatorSubspace {
            ambient_n: n,
            engine: Engine::FloatHermitian,
            basis,
            exact: None,
            contains_identity: false,
            site_dims: None,
            spanning_set,
        };
        let resid = (&id - &u.project_onto(&id)).frobenius_norm();
        u.contains_identity = resid <= 1e-8 * (n as f64).sqrt();
        u
    }

    /// Exact subspace of `ℚ^X`, `|X| = n`, spanned by the given functions.
    pub fn from_functions(n: usize, vectors: &[Vec<Q>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptySpanningSet);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let orth = gram_schmidt(vectors);
        let complement = q_null_space(&orth, n);
        let basis = orth.iter().map(|v| function_to_matrix(v)).collect();
        let ones = vec![Q::from_integer(1.into()); n];
        let contains_identity = complement.iter().all(|w| dot(w, &ones).is_zero());
        let spanning_set = vectors.iter().map(|v| diag_matrix(v)).collect();
        Ok(OperatorSubspace {
            ambient_n: n,
            engine: Engine::ExactCommutative,
            basis,
            exact: Some(ExactData { vectors: orth, complement }),
            contains_identity,
            site_dims: None,
            spanning_set,
        })
    }

    pub fn with_site_dims(mut self, dims: Vec<usize>) -> Self {
        self.site_dims = Some(dims);
        self
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis under `⟨a, b⟩ = tr(a* b)`.
    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    /// Rational orthogonal basis of the exact engine.
    pub fn exact_basis(&self) -> Option<&[Vec<Q>]> {
        self.exact.as_ref().map(|e| e.vectors.as_slice())
    }

    /// Rational basis of the orthogonal complement of `U` in `ℚ^X`.
    pub fn exact_complement(&self) -> Option<&[Vec<Q>]> {
        self.exact.as_ref().map(|e| e.complement.as_slice())
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    pub fn site_dims(&self) -> Option<&[usize]> {
        self.site_dims.as_deref()
    }

    pub fn spanning_set(&self) -> &[HermitianMatrix] {
        &self.spanning_set
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// The same space handled by the floating-point engine.
    pub fn to_float(&self) -> OperatorSubspace {
        OperatorSubspace { engine: Engine::FloatHermitian, exact: None, ..self.clone() }
    }

    pub fn coefficients(&self, a: &HermitianMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| b.inner(a)).collect()
    }

    /// `Σ c_i b_i`.
    pub fn element(&self, coeffs: &[f64]) -> HermitianMatrix {
        HermitianMatrix::combination(coeffs, &self.basis)
    }

    /// Orthogonal projection `π_U(a) = Σ ⟨b_i, a⟩ b_i`.
    pub fn project_onto(&self, a: &HermitianMatrix) -> HermitianMatrix {
        if self.basis.is_empty() {
            return HermitianMatrix::zeros(self.ambient_n);
        }
        self.element(&self.coefficients(a))
    }

    /// Exact orthogonal projection of a function onto `U`.
    pub fn project_function(&self, g: &[Q]) -> Option<Vec<Q>> {
        let e = self.exact.as_ref()?;
        let mut out = vec![Q::zero(); self.ambient_n];
        for v in &e.vectors {
            let c = dot(v, g) / dot(v, v);
            for (o, x) in out.iter_mut().zip(v) {
                *o += &c * x;
            }
        }
        Some(out)
    }

    /// Random element with independent standard normal coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> HermitianMatrix {
        let c: Vec<f64> = (0..self.dim()).map(|_| rng.sample(StandardNormal)).collect();
        self.element(&c)
    }

    /// `L(p) = {u ∈ U : p u = 0}` with the default rank tolerance.
    pub fn linear_section(&self, p: &Projection) -> Result<LinearSection> {
        self.linear_section_tol(p, 1e-9)
    }

    /// `L(p)`; in the float engine, singular values at most
    /// `tol · max(1, σ_max)` of `u ↦ p u` count as zero.
    pub fn linear_section_tol(&self, p: &Projection, tol: f64) -> Result<LinearSection> {
        if p.n() != self.ambient_n {
            return Err(Error::DimensionMismatch { expected: self.ambient_n, found: p.n() });
        }
        if let Some(e) = &self.exact {
            let support = support_of(p).ok_or_else(|| {
                Error::invalid("the exact engine needs diagonal 0-1 projections")
            })?;
            let n = self.ambient_n;
            let mut rows: Vec<Vec<Q>> = support
                .iter()
                .map(|&x| (0..n).map(|i| if i == x { Q::from_integer(1.into()) } else { Q::zero() }).collect())
                .collect();
            rows.extend(e.complement.iter().cloned());
            let fns = gram_schmidt(&q_null_space(&rows, n));
            let basis: Vec<HermitianMatrix> = fns.iter().map(|v| function_to_matrix(v)).collect();
            let coordinates = basis.iter().map(|b| self.coefficients(b)).collect();
            return Ok(LinearSection {
                base_projection: p.clone(),
                dim: basis.len(),
                basis,
                coordinates,
                exact_basis: Some(fns),
            });
        }
        let d = self.dim();
        let coordinates: Vec<Vec<f64>> = if p.is_zero() {
            (0..d).map(|j| (0..d).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect()
        } else if p.is_identity() {
            Vec::new()
        } else {
            let qa = p.basis().adjoint();
            let images: Vec<Vec<f64>> = self
                .basis
                .iter()
                .map(|b| qa.matmul(b.as_cmat()).data().iter().flat_map(|z| [z.re, z.im]).collect())
                .collect();
            let len = images[0].len();
            let rows: Vec<Vec<f64>> = (0..len).map(|k| images.iter().map(|col| col[k]).collect()).collect();
            let smax = crate::linalg::svd_jacobi(&real_rows_to_cmat(&rows, d)).sigma.first().copied().unwrap_or(0.0);
            real_null_space(&rows, d, tol * smax.max(1.0))
        };
        let basis: Vec<HermitianMatrix> = coordinates.iter().map(|c| self.element(c)).collect();
        Ok(LinearSection { base_projection: p.clone(), dim: basis.len(), basis, coordinates, exact_basis: None })
    }

    /// `U₀ = {u ∈ U : tr u = 0}`.
    pub fn traceless_part(&self) -> OperatorSubspace {
        if let Some(e) = &self.exact {
            let row: Vec<Q> = e.vectors.iter().map(|v| v.iter().fold(Q::zero(), |a, x| a + x)).collect();
            let coeffs = q_null_space(&[row], e.vectors.len());
            let fns: Vec<Vec<Q>> = coeffs
                .iter()
                .map(|c| {
                    let mut g = vec![Q::zero(); self.ambient_n];
                    for (ci, v) in c.iter().zip(&e.vectors) {
                        for (gx, vx) in g.iter_mut().zip(v) {
                            *gx += ci * vx;
                        }
                    }
                    g
                })
                .collect();
            if fns.is_empty() {
                return self.empty_like();
            }
            let mut u = OperatorSubspace::from_functions(self.ambient_n, &fns).expect("nonempty");
            u.site_dims = self.site_dims.clone();
            return u;
        }
        let traces: Vec<f64> = self.basis.iter().map(|b| b.trace()).collect();
        let coeffs = real_null_space(&[traces], self.dim(), 1e-12);
        let basis: Vec<HermitianMatrix> = coeffs.iter().map(|c| self.element(c)).collect();
        let mut u = OperatorSubspace::from_orthonormal(self.ambient_n, basis.clone(), basis);
        u.site_dims = self.site_dims.clone();
        u
    }

    fn empty_like(&self) -> OperatorSubspace {
        OperatorSubspace {
            ambient_n: self.ambient_n,
            engine: self.engine,
            basis: Vec::new(),
            exact: self.exact.as_ref().map(|_| ExactData {
                vectors: Vec::new(),
                complement: (0..self.ambient_n)
                    .map(|j| (0..self.ambient_n).map(|i| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
                    .collect(),
            }),
            contains_identity: false,
            site_dims: self.site_dims.clone(),
            spanning_set: Vec::new(),
        }
    }

    pub(crate) fn require_identity(&self) -> Result<()> {
        if self.contains_identity {
            Ok(())
        } else {
            Err(Error::MissingIdentity)
        }
    }
}

fn real_rows_to_cmat(rows: &[Vec<f64>], cols: usize) -> crate::linalg::CMat {
    crate::linalg::CMat::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
}

/// Diagonal matrix of a function, normalized to unit Frobenius norm.
fn function_to_matrix(v: &[Q]) -> HermitianMatrix {
    let f: Vec<f64> = v.iter().map(to_f64).collect();
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    HermitianMatrix::diagonal(&f.iter().map(|x| x / norm).collect::<Vec<_>>())
}

fn diag_matrix(v: &[Q]) -> HermitianMatrix {
    HermitianMatrix::diagonal(&v.iter().map(to_f64).collect::<Vec<_>>())
}

/// Support of a diagonal 0-1 projection, recognized exactly.
pub(crate) fn support_of(p: &Projection) -> Option<Vec<usize>> {
    if let Some(s) = p.support() {
        return Some(s.to_vec());
    }
    let b = p.basis();
    let mut s = Vec::with_capacity(p.rank());
    for j in 0..b.cols() {
        let nz: Vec<usize> = (0..b.rows()).filter(|&i| b[(i, j)].norm() > 1e-12).collect();
        if nz.len() != 1 || (b[(nz[0], j)].norm() - 1.0).abs() > 1e-9 {
            return None;
        }
        s.push(nz[0]);
    }
    s.sort_unstable();
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::linalg::q;
    use crate::linalg::{approx_eq, CMat};

    fn m3_space() -> OperatorSubspace {
        let i = Complex64::new(0.0, 1.0);
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let a1 = HermitianMatrix::new(3, vec![z, o, z, o, z, z, z, z, o * 2.0]).unwrap();
        let a2 = HermitianMatrix::new(3, vec![z, -i, z, i, z, z, z, z, z]).unwrap();
        OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(3), a1, a2], Engine::FloatHermitian, 1e-9)
            .unwrap()
    }

    #[test]
    fn m3_span() {
        let u = m3_space();
        assert_eq!(u.dim(), 3);
        assert!(u.contains_identity());
        assert_eq!(u.traceless_part().dim(), 2);
    }

    #[test]
    fn identity_span_and_collinear() {
        let u = OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(2)], Engine::FloatHermitian, 1e-9).unwrap();
        assert_eq!(u.dim(), 1);
        assert_eq!(u.traceless_part().dim(), 0);
        let sx = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let u = OperatorSubspace::from_spanning_set(&[sx.clone(), sx.scale(2.0)], Engine::FloatHermitian, 1e-9).unwrap();
        assert_eq!(u.dim(), 1);
        assert!(!u.contains_identity());
        assert_eq!(u.traceless_part().dim(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(OperatorSubspace::from_spanning_set(&[], Engine::FloatHermitian, 1e-9), Err(Error::EmptySpanningSet)));
        let r = OperatorSubspace::from_spanning_set(
            &[HermitianMatrix::identity(2), HermitianMatrix::identity(3)],
            Engine::FloatHermitian,
            1e-9,
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn projection_is_idempotent() {
        let u = m3_space();
        let a = HermitianMatrix::diagonal(&[1.0, -2.0, 0.5]);
        let pa = u.project_onto(&a);
        let ppa = u.project_onto(&pa);
        assert!((&pa - &ppa).frobenius_norm() < 1e-12);
        for b in u.basis() {
            assert!((&a - &pa).inner(b).abs() < 1e-12);
        }
    }

    #[test]
    fn sections_at_extremes() {
        let u = m3_space();
        assert_eq!(u.linear_section(&Projection::zero(3)).unwrap().dim, 3);
        assert_eq!(u.linear_section(&Projection::identity(3)).unwrap().dim, 0);
        let e3 = Projection::from_support(3, [2]).unwrap();
        let s = u.linear_section(&e3).unwrap();
        assert_eq!(s.dim, 2);
        for b in &s.basis {
            assert!(e3.annihilation_residual(b) < 1e-12);
        }
    }

    #[test]
    fn exact_two_point_section() {
        // three bits, all functions orthogonal to parity
        let n = 8;
        let parity: Vec<Q> = (0..n).map(|x: usize| q(if x.count_ones() % 2 == 0 { 1 } else { -1 })).collect();
        let others: Vec<Vec<Q>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { q(1) } else { q(0) }).collect())
            .collect();
        let u0 = OperatorSubspace::from_functions(n, &others).unwrap();
        assert_eq!(u0.dim(), 8);
        let span: Vec<Vec<Q>> = others
            .iter()
            .map(|e| {
                let c = dot(e, &parity) / q(8);
                e.iter().zip(&parity).map(|(a, b)| a - &c * b).collect()
            })
            .collect();
        let u = OperatorSubspace::from_functions(n, &span).unwrap();
        assert_eq!(u.dim(), 7);
        assert!(u.contains_identity());
        assert_eq!(u.project_function(&parity).unwrap(), vec![q(0); 8]);
        // complement {000, 111}: parities differ
        let p = Projection::from_support(n, (1..7).collect::<Vec<_>>()).unwrap();
        let s = u.linear_section(&p).unwrap();
        assert_eq!(s.dim, 1);
        let g = &s.exact_basis.unwrap()[0];
        assert_eq!(g[0], g[7]);
        assert!(!g[0].is_zero());
        // float view agrees
        let sf = u.to_float().linear_section(&p).unwrap();
        assert_eq!(sf.dim, 1);
    }

    #[test]
    fn support_detection() {
        let p = Projection::from_vectors(3, &[CMat::identity(3).column(1)], 1e-12).unwrap();
        assert_eq!(support_of(&p), Some(vec![1]));
        assert!(approx_eq(&p, &Projection::from_support(3, [1]).unwrap(), 1e-12));
    }
}
