//! Facial reduction of `K(p)` in the floating-point engine.
//!
//! Each stage works on a subspace `W ⊆ image(p′)` known to contain the images
//! of all elements of `K(p)`. It asks for the largest `t` such that some
//! trace-one element of `L_W = {u ∈ U : u supported on W}` dominates `t·id_W`.
//! A positive optimum gives a positive definite element on `W` (so `W` is the
//! common support of the cone), a negative one shows the cone is trivial, and
//! an optimum at zero shrinks `W` to the range of the maximal-rank optimizer.

use rand::Rng;
use rand_distr::StandardNormal;

use super::sdp::SdpProblem;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::linalg::{eig_herm, real_null_space, CMat, HermitianMatrix, Projection};
use crate::subspace::{LinearSection, OperatorSubspace};

/// Optimal `t` above this counts as strictly feasible, below its negative as infeasible.
const DECISIVE: f64 = 1e-8;
/// Eigenvalues of the trace-one optimizer above this fraction of the largest span its range.
const RANGE_CUT: f64 = 1e-5;
const SECTION_TOL: f64 = 1e-6;
const MAX_ITER: usize = 200;
const RAY_STREAM: u64 = 0x7261_7973;

#[derive(Clone, Debug)]
pub(crate) struct FloatCone {
    pub dim_k: usize,
    pub witness: Option<HermitianMatrix>,
    /// `L(q_max)`, which equals the linear span of `K(p)`.
    pub span: LinearSection,
    pub q_max: Projection,
    pub stages: usize,
    pub stalled: bool,
}

/// Trace-one slice of a linear section compressed to `W`, in coordinates of
/// the section's orthonormal basis: `F(z) = F₀ + Σ z_j F_j`.
struct Slice {
    compressed: Vec<CMat>,
    offset: Vec<f64>,
    directions: Vec<Vec<f64>>,
    w: usize,
}

impl Slice {
    fn new(basis: &[HermitianMatrix], qw: &CMat) -> Option<Slice> {
        let qa = qw.adjoint();
        let compressed: Vec<CMat> = basis.iter().map(|b| qa.matmul(&b.as_cmat().matmul(qw)).hermitian_part()).collect();
        let traces: Vec<f64> = compressed.iter().map(|c| c.trace().re).collect();
        let tn2: f64 = traces.iter().map(|t| t * t).sum();
        if tn2.sqrt() <= 1e-12 {
            return None;
        }
        let offset = traces.iter().map(|t| t / tn2).collect();
        let directions = real_null_space(&[traces], basis.len(), 1e-12);
        Some(Slice { compressed, offset, directions, w: qw.cols() })
    }

    fn combine(&self, coeffs: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.w, self.w);
        for (c, m) in coeffs.iter().zip(&self.compressed) {
            if *c != 0.0 {
                out.add_scaled(*c, m);
            }
        }
        out
    }

    fn f0(&self) -> CMat {
        self.combine(&self.offset)
    }

    fn f(&self, j: usize) -> CMat {
        self.combine(&self.directions[j])
    }

    /// Section coordinates of `F(z)`.
    fn coords(&self, z: &[f64]) -> Vec<f64> {
        let mut c = self.offset.clone();
        for (zj, dir) in z.iter().zip(&self.directions) {
            for (ci, di) in c.iter_mut().zip(dir) {
                *ci += zj * di;
            }
        }
        c
    }
}

fn trivial(n: usize, u: &OperatorSubspace, stages: usize) -> Result<FloatCone> {
    let id = Projection::identity(n);
    Ok(FloatCone { dim_k: 0, witness: None, span: u.linear_section(&id)?, q_max: id, stages, stalled: false })
}

fn full_element(section: &LinearSection, coords: &[f64]) -> HermitianMatrix {
    HermitianMatrix::combination(coords, &section.basis)
}

/// Accepts `hint` as a witness when it lies in `L(p)`, is positive
/// semidefinite, and is positive definite on `image(p′)`.
fn hint_is_witness(hint: &HermitianMatrix, p: &Projection, u: &OperatorSubspace, tol: f64) -> bool {
    let scale = hint.frobenius_norm().max(1.0);
    if (hint - &u.project_onto(hint)).frobenius_norm() > 1e-8 * scale {
        return false;
    }
    if p.annihilation_residual(hint) > 1e-8 * scale {
        return false;
    }
    let qw = p.complement();
    if qw.rank() == 0 {
        return false;
    }
    let c = HermitianMatrix::from_cmat(&qw.basis().congruence(hint.as_cmat()));
    match eig_herm(&c, 1e-12) {
        Ok(e) => e.min_eigenvalue() > tol.max(1e-9) * scale,
        Err(_) => false,
    }
}

pub(crate) fn analyze(
    p: &Projection,
    u: &OperatorSubspace,
    cfg: &RunConfig,
    hint: Option<&HermitianMatrix>,
) -> Result<FloatCone> {
    let n = u.ambient_n();
    let section0 = u.linear_section_tol(p, cfg.tol_rank)?;
    if let Some(h) = hint {
        if section0.dim > 0 && hint_is_witness(h, p, u, cfg.tol_resid) {
            let w = h.scale(1.0 / h.trace());
            return Ok(FloatCone { dim_k: section0.dim, witness: Some(w), span: section0, q_max: p.clone(), stages: 0, stalled: false });
        }
    }
    let mut qw = p.complement().basis().clone();
    let mut stage = 0;
    loop {
        if qw.cols() == 0 {
            return trivial(n, u, stage);
        }
        let (section, q_max) = if stage == 0 {
            (section0.clone(), p.clone())
        } else {
            let q = Projection::from_orthonormal(qw.clone()).complement();
            (u.linear_section_tol(&q, SECTION_TOL)?, q)
        };
        if section.dim == 0 {
            return trivial(n, u, stage);
        }
        let Some(slice) = Slice::new(&section.basis, &qw) else { return trivial(n, u, stage) };
        let (t, upper, z, s) = maximize_min_eigenvalue(&slice);
        if t > DECISIVE {
            let witness = full_element(&section, &slice.coords(&z));
            return Ok(FloatCone { dim_k: section.dim, witness: Some(witness), span: section, q_max, stages: stage, stalled: false });
        }
        if upper < -DECISIVE {
            return trivial(n, u, stage);
        }
        let e = eig_herm(&HermitianMatrix::from_cmat(&s), 1e-12)?;
        let smax = e.max_eigenvalue();
        let keep: Vec<usize> = (0..slice.w).filter(|&k| e.eigenvalues[k] > RANGE_CUT * smax).collect();
        if keep.len() == slice.w {
            let witness = full_element(&section, &slice.coords(&z));
            return Ok(FloatCone { dim_k: section.dim, witness: Some(witness), span: section, q_max, stages: stage, stalled: true });
        }
        let v = CMat::from_fn(slice.w, keep.len(), |i, j| e.eigenvectors[(i, keep[j])]);
        qw = qw.matmul(&v);
        stage += 1;
    }
}

/// Solves `max t` subject to `F(z) − t·id ⪰ 0`; returns the best `t`, the
/// primal upper bound, the optimal `z`, and the slack `F(z) − t·id`.
fn maximize_min_eigenvalue(slice: &Slice) -> (f64, f64, Vec<f64>, CMat) {
    let w = slice.w;
    let m = slice.directions.len();
    let f0 = slice.f0();
    let mut a: Vec<CMat> = (0..m).map(|j| slice.f(j).scale(-1.0)).collect();
    a.push(CMat::identity(w));
    let mut b = vec![0.0; m];
    b.push(1.0);
    let lmin = eig_herm(&HermitianMatrix::from_cmat(&f0), 1e-12).map(|e| e.min_eigenvalue()).unwrap_or(0.0);
    let mut y0 = vec![0.0; m];
    y0.push(lmin - 1.0);
    let prob = SdpProblem { c: f0, a, b };
    let st = prob.solve(CMat::identity(w).scale(1.0 / w as f64), y0, MAX_ITER, |st| {
        let t = st.y[m];
        (t > 100.0 * DECISIVE && st.dual_residual < 1e-10)
            || (st.primal < -100.0 * DECISIVE && st.primal_residual < 1e-10)
            || st.gap().abs() < 1e-14
            || st.mu < 1e-17
    });
    let t = st.y[m];
    (t, st.primal, st.y[..m].to_vec(), st.s)
}

/// Exposed extreme rays of a cone whose common support is `image(q_max′)`,
/// found by minimizing random linear functionals over the trace-one slice.
pub(crate) fn exposed_rays(fc: &FloatCone, u: &OperatorSubspace, cfg: &RunConfig) -> Result<Vec<HermitianMatrix>> {
    let d = fc.dim_k;
    if d == 0 {
        return Err(Error::TrivialCone);
    }
    if d > cfg.max_ray_dim {
        return Err(Error::Unsupported(format!(
            "exposed-ray search for a cone of dimension {d} exceeds max_ray_dim = {}",
            cfg.max_ray_dim
        )));
    }
    let witness = fc.witness.as_ref().ok_or(Error::TrivialCone)?;
    if d == 1 {
        return Ok(vec![witness.scale(1.0 / witness.trace())]);
    }
    let qw = fc.q_max.complement().basis().clone();
    let Some(slice) = Slice::new(&fc.span.basis, &qw) else { return Err(Error::TrivialCone) };
    let m = slice.directions.len();
    let wc: Vec<f64> = fc.span.basis.iter().map(|b| b.inner(witness)).collect();
    let tr: f64 = wc.iter().zip(&slice.offset).map(|(a, o)| a * o).sum::<f64>()
        / slice.offset.iter().map(|o| o * o).sum::<f64>();
    let wc: Vec<f64> = wc.iter().map(|x| x / tr).collect();
    let z0: Vec<f64> = slice.directions.iter().map(|dir| dir.iter().zip(&wc).map(|(a, b)| a * b).sum()).collect();
    let fs: Vec<CMat> = (0..m).map(|j| slice.f(j)).collect();
    let f0 = slice.f0();
    let w = slice.w;

    let mut rng = cfg.rng(RAY_STREAM);
    let mut rays: Vec<HermitianMatrix> = Vec::new();
    let mut accepted: Vec<Vec<f64>> = Vec::new();
    let mut failures = 0;
    while rays.len() < d && failures < cfg.restarts {
        let g: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let mut gm = CMat::zeros(w, w);
        for (gj, fj) in g.iter().zip(&fs) {
            gm.add_scaled(*gj, fj);
        }
        let eps = 0.5 / (w as f64 * gm.frobenius_norm().max(1e-300));
        let gm = gm.scale(eps);
        let b: Vec<f64> = fs.iter().map(|fj| -fj.trace_product_re(&gm)).collect();
        let a: Vec<CMat> = fs.iter().map(|fj| fj.scale(-1.0)).collect();
        let mut x0 = CMat::identity(w).scale(1.0 / w as f64);
        x0.add_scaled(1.0, &gm);
        let prob = SdpProblem { c: f0.clone(), a, b };
        let st = prob.solve(x0, z0.clone(), MAX_ITER, |st| st.gap().abs() < 1e-14 || st.mu < 1e-17);
        match snap_ray(&st.s, &qw, u) {
            Some(v) => {
                let coords = u.coefficients(&v);
                match independent_part(&accepted, &coords) {
                    Some(unit) => {
                        accepted.push(unit);
                        rays.push(v);
                        failures = 0;
                    }
                    None => failures += 1,
                }
            }
            None => failures += 1,
        }
    }
    Ok(rays)
}

/// Identifies the face generated by a trace-one optimizer; returns its unit
/// trace generator when that face is a ray.
fn snap_ray(s: &CMat, qw: &CMat, u: &OperatorSubspace) -> Option<HermitianMatrix> {
    let e = eig_herm(&HermitianMatrix::from_cmat(s), 1e-12).ok()?;
    let smax = e.max_eigenvalue();
    if smax <= 0.0 {
        return None;
    }
    let keep: Vec<usize> = (0..s.rows()).filter(|&k| e.eigenvalues[k] > 1e-6 * smax).collect();
    let v = CMat::from_fn(s.rows(), keep.len(), |i, j| e.eigenvectors[(i, keep[j])]);
    let image = Projection::from_orthonormal(qw.matmul(&v));
    let sec = u.linear_section_tol(&image.complement(), SECTION_TOL).ok()?;
    if sec.dim != 1 {
        return None;
    }
    let g = &sec.basis[0];
    let tr = g.trace();
    if tr.abs() < 1e-12 {
        return None;
    }
    let g = g.scale(1.0 / tr);
    let lmin = eig_herm(&g, 1e-12).ok()?.min_eigenvalue();
    if lmin < -1e-7 * g.frobenius_norm().max(1.0) {
        return None;
    }
    Some(g)
}

/// Normalized component of `v` orthogonal to the orthonormal `basis`, if not negligible.
fn independent_part(basis: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut r: Vec<f64> = v.iter().map(|x| x / norm).collect();
    for _ in 0..2 {
        for b in basis {
            let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
    }
    let rn = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    (rn > 1e-6).then(|| r.iter().map(|x| x / rn).collect())
}
