//! The cone `K(p) = {u ∈ U : u ⪰ 0, p u = 0}`: its dimension, a maximal-rank
//! witness, and its exposed extreme rays.

mod exact;
mod float;
mod sdp;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::exact::linalg::{to_f64, Q};
use crate::linalg::{HermitianMatrix, Projection};
use crate::subspace::{support_of, Engine, LinearSection, OperatorSubspace};

pub(crate) use exact::zero_set;

/// Everything computed about `K(p)`.
#[derive(Clone, Debug)]
pub struct ConeDescriptor {
    pub base_projection: Projection,
    /// `L(p)`.
    pub section: LinearSection,
    /// Dimension of the linear span of `K(p)`.
    pub dim_k: usize,
    pub is_ray: bool,
    /// Unit-trace element of `K(p)` of maximal rank.
    pub interior_witness: Option<HermitianMatrix>,
    pub extreme_ray_generators: Option<Vec<HermitianMatrix>>,
    /// Kernel of the witness: the greatest projection with the same cone.
    pub q_max: Projection,
    /// Orthonormal basis of the linear span of `K(p)`.
    pub span: Vec<HermitianMatrix>,
    pub engine: Engine,
    /// Facial reduction steps taken before a strictly feasible face was found.
    pub reduction_stages: usize,
    /// Set when facial reduction could not certify its last step.
    pub stalled: bool,
    inner: Inner,
}

#[derive(Clone, Debug)]
enum Inner {
    Exact(exact::ExactCone),
    Float(Box<float::FloatCone>),
}

/// Engine used for `u` under `cfg`.
pub fn effective_engine(u: &OperatorSubspace, cfg: &RunConfig) -> Result<Engine> {
    match cfg.engine {
        None => Ok(u.engine()),
        Some(Engine::FloatHermitian) => Ok(Engine::FloatHermitian),
        Some(Engine::ExactCommutative) if u.is_exact() => Ok(Engine::ExactCommutative),
        Some(Engine::ExactCommutative) => {
            Err(Error::Unsupported("the exact engine needs a commutative subspace given by rational functions".into()))
        }
    }
}

pub(crate) fn function_matrix(g: &[Q]) -> HermitianMatrix {
    HermitianMatrix::diagonal(&g.iter().map(to_f64).collect::<Vec<_>>())
}

pub fn analyze_cone(p: &Projection, u: &OperatorSubspace, cfg: &RunConfig) -> Result<ConeDescriptor> {
    analyze_cone_with_hint(p, u, cfg, None)
}

/// As [`analyze_cone`]; `hint`, if it is an element of `K(p)` positive
/// definite on the range of `id − p`, is used as the witness directly.
pub fn analyze_cone_with_hint(
    p: &Projection,
    u: &OperatorSubspace,
    cfg: &RunConfig,
    hint: Option<&HermitianMatrix>,
) -> Result<ConeDescriptor> {
    cfg.validate()?;
    if p.n() != u.ambient_n() {
        return Err(Error::DimensionMismatch { expected: u.ambient_n(), found: p.n() });
    }
    match effective_engine(u, cfg)? {
        Engine::ExactCommutative => {
            let support = support_of(p).ok_or_else(|| Error::invalid("the exact engine needs diagonal 0-1 projections"))?;
            let n = u.ambient_n();
            let ec = exact::analyze(&support, u)?;
            let section = u.linear_section(p)?;
            let witness = ec.witness.as_ref().map(|g| {
                let total: Q = g.iter().fold(Q::from_integer(0.into()), |a, x| a + x);
                function_matrix(&g.iter().map(|x| x / &total).collect::<Vec<_>>())
            });
            let span: Vec<HermitianMatrix> = ec
                .span
                .iter()
                .map(|g| {
                    let m = function_matrix(g);
                    m.scale(1.0 / m.frobenius_norm())
                })
                .collect();
            Ok(ConeDescriptor {
                base_projection: Projection::from_support(n, support)?,
                section,
                dim_k: ec.span.len(),
                is_ray: ec.span.len() == 1,
                interior_witness: witness,
                extreme_ray_generators: None,
                q_max: Projection::from_support(n, ec.q_max.iter().copied())?,
                span,
                engine: Engine::ExactCommutative,
                reduction_stages: 0,
                stalled: false,
                inner: Inner::Exact(ec),
            })
        }
        Engine::FloatHermitian => {
            let fu;
            let uf = if u.is_exact() {
                fu = u.to_float();
                &fu
            } else {
                u
            };
            let fc = float::analyze(p, uf, cfg, hint)?;
            Ok(ConeDescriptor {
                base_projection: p.clone(),
                section: uf.linear_section_tol(p, cfg.tol_rank)?,
                dim_k: fc.dim_k,
                is_ray: fc.dim_k == 1,
                interior_witness: fc.witness.clone(),
                extreme_ray_generators: None,
                q_max: fc.q_max.clone(),
                span: fc.span.basis.clone(),
                engine: Engine::FloatHermitian,
                reduction_stages: fc.stages,
                stalled: fc.stalled,
                inner: Inner::Float(Box::new(fc)),
            })
        }
    }
}

/// The stored maximal-rank witness.
pub fn relative_interior_point(desc: &ConeDescriptor) -> Result<HermitianMatrix> {
    desc.interior_witness.clone().ok_or(Error::TrivialCone)
}

/// Unit-trace generators of exposed extreme rays.
///
/// Complete in the exact engine; in the float engine, up to `dim_K`
/// linearly independent rays found by supporting-functional search.
pub fn extreme_rays(desc: &ConeDescriptor, u: &OperatorSubspace, cfg: &RunConfig) -> Result<Vec<HermitianMatrix>> {
    if let Some(r) = &desc.extreme_ray_generators {
        return Ok(r.clone());
    }
    if desc.dim_k == 0 {
        return Err(Error::TrivialCone);
    }
    match &desc.inner {
        Inner::Exact(ec) => Ok(exact::rays(ec).iter().map(|g| function_matrix(g)).collect()),
        Inner::Float(fc) => {
            let fu;
            let uf = if u.is_exact() {
                fu = u.to_float();
                &fu
            } else {
                u
            };
            float::exposed_rays(fc, uf, cfg)
        }
    }
}

/// Exact extreme rays as unit-sum rational functions (exact engine only).
pub fn exact_rays(desc: &ConeDescriptor) -> Option<Vec<Vec<Q>>> {
    match &desc.inner {
        Inner::Exact(ec) => Some(exact::rays(ec)),
        Inner::Float(_) => None,
    }
}

/// Exact maximal-support witness as a rational function (exact engine only).
pub fn exact_witness(desc: &ConeDescriptor) -> Option<&[Q]> {
    match &desc.inner {
        Inner::Exact(ec) => ec.witness.as_deref(),
        Inner::Float(_) => None,
    }
}

impl ConeDescriptor {
    /// Fills in `extreme_ray_generators`.
    pub fn with_rays(mut self, u: &OperatorSubspace, cfg: &RunConfig) -> Result<Self> {
        if self.dim_k > 0 {
            self.extreme_ray_generators = Some(extreme_rays(&self, u, cfg)?);
        }
        Ok(self)
    }
}
