//! Instance generators and an independent brute-force oracle shared by the
//! integration tests.
#![allow(dead_code)]

use groundspace::linalg::{eig_herm, CMat};
use groundspace::{Engine, HermitianMatrix, OperatorSubspace, Projection};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Q = BigRational;

pub fn gaussian_cmat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_cmat(&gaussian_cmat(rng, n, n))
}

/// Projection onto a random `r`-dimensional subspace of the span of the columns of `within`.
pub fn random_subprojection<R: Rng>(rng: &mut R, within: &Projection, r: usize) -> Projection {
    let b = within.basis();
    let mix = gaussian_cmat(rng, b.cols(), r);
    let v = b.matmul(&mix);
    Projection::from_vectors(within.n(), &v.columns(), 1e-9).unwrap()
}

/// A float subspace with the identity, planted positive semidefinite
/// elements with kernels, and random hermitian directions.
pub struct FloatInstance {
    pub u: OperatorSubspace,
    pub planted: Vec<HermitianMatrix>,
    pub n: usize,
}

pub fn random_float_instance<R: Rng>(rng: &mut R) -> FloatInstance {
    let n = rng.random_range(2..=6);
    let d = rng.random_range(2..=8usize).min(n * n);
    let planted_count = rng.random_range(0..=(d - 1).min(3));
    let mut mats = vec![HermitianMatrix::identity(n)];
    let mut planted = Vec::new();
    for _ in 0..planted_count {
        let r = rng.random_range(1..n);
        let v = gaussian_cmat(rng, n, r);
        let w = HermitianMatrix::from_cmat(&v.matmul(&v.adjoint()));
        planted.push(w.clone());
        mats.push(w);
    }
    while mats.len() < d {
        mats.push(random_hermitian(rng, n));
    }
    let u = OperatorSubspace::from_spanning_set(&mats, Engine::FloatHermitian, 1e-9).unwrap();
    FloatInstance { u, planted, n }
}

/// Projections worth testing against an instance: random ones, sub-projections
/// of planted kernels, ground projections and sub-projections of them.
pub fn candidate_projections<R: Rng>(rng: &mut R, inst: &FloatInstance) -> Vec<Projection> {
    let n = inst.n;
    let mut out = Vec::new();
    let r = rng.random_range(0..=n);
    out.push(random_subprojection(rng, &Projection::identity(n), r));
    if let Some(w) = inst.planted.first() {
        let k = groundspace::linalg::kernel_projection(w, 1e-9).unwrap();
        if k.rank() > 0 {
            let r = rng.random_range(1..=k.rank());
            out.push(random_subprojection(rng, &k, r));
        }
        let mut sum = HermitianMatrix::zeros(n);
        for w in &inst.planted {
            sum.add_scaled(rng.random_range(0.5..2.0), w);
        }
        let g = groundspace::ground_projection(&sum, 1e-9).unwrap();
        out.push(g.clone());
        if g.rank() > 1 {
            out.push(random_subprojection(rng, &g, 1));
        }
    }
    out
}

/// Largest distance from a unit vector of one span to the other span, in
/// both directions; both inputs orthonormal.
pub fn span_distance(a: &[HermitianMatrix], b: &[HermitianMatrix]) -> f64 {
    let one_way = |x: &[HermitianMatrix], y: &[HermitianMatrix]| {
        x.iter()
            .map(|v| {
                let mut r = v.clone();
                for w in y {
                    r.add_scaled(-v.inner(w), w);
                }
                r.frobenius_norm()
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> f64 {
    eig_herm(a, 1e-12).unwrap().min_eigenvalue()
}

// exact oracle

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, r);
        let inv = Q::one() / &m[row][c];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..m[r].len() {
                    let d = &f * &m[row][j];
                    m[r][j] -= d;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{x : M x = 0}`.
pub fn null_space(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// A random commutative instance on `n ≤ 6` points: the constant function
/// plus a few small integer functions.
pub fn random_exact_functions<R: Rng>(rng: &mut R) -> (usize, Vec<Vec<Q>>) {
    let n = rng.random_range(2..=6);
    let extra = rng.random_range(0..n);
    let mut fs = vec![vec![Q::one(); n]];
    for _ in 0..extra {
        fs.push((0..n).map(|_| qi(rng.random_range(-3..=3))).collect());
    }
    (n, fs)
}

/// Vertices of `{g ∈ span(fs) : g ≥ 0, Σ g = 1}` by trying every support and
/// solving the equality system there.
pub fn vertices(n: usize, fs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let perp = null_space(fs, n);
    let mut out = Vec::new();
    for t in 1u32..(1 << n) {
        let mut rows: Vec<Vec<Q>> = perp
            .iter()
            .map(|w| {
                let mut r = w.clone();
                r.push(Q::zero());
                r
            })
            .collect();
        for x in (0..n).filter(|x| t >> x & 1 == 0) {
            let mut r = vec![Q::zero(); n + 1];
            r[x] = Q::one();
            rows.push(r);
        }
        rows.push(vec![Q::one(); n + 1]);
        let pivots = rref(&mut rows, n + 1);
        if pivots.contains(&n) || pivots.len() < n {
            continue;
        }
        let mut g = vec![Q::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            g[p] = rows[r][n].clone();
        }
        if (0..n).all(|x| if t >> x & 1 == 1 { g[x].is_positive() } else { g[x].is_zero() }) {
            out.push(g);
        }
    }
    out
}

/// `q_max(p)` straight from the definition: among all `q` whose cone equals
/// `K(p)` take the greatest. Cones are compared through the vertices of their
/// trace-one slices; panics if no greatest element exists.
pub fn brute_force_qmax(n: usize, verts: &[Vec<Q>], p: u32) -> u32 {
    let cone_of = |q: u32| -> Vec<usize> { (0..verts.len()).filter(|&i| (0..n).all(|x| q >> x & 1 == 0 || verts[i][x].is_zero())).collect() };
    let target = cone_of(p);
    let same: Vec<u32> = (0..1u32 << n).filter(|&q| cone_of(q) == target).collect();
    let union = same.iter().fold(0, |a, &q| a | q);
    assert!(same.contains(&union), "no greatest element");
    union
}

pub fn mask_to_support(n: usize, m: u32) -> Vec<usize> {
    (0..n).filter(|x| m >> x & 1 == 1).collect()
}
