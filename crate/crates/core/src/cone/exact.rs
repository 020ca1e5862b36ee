//! `K(p)` for commutative subspaces: nonnegative functions in `U` vanishing on `p`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::dd;
use crate::exact::linalg::Q;
use crate::exact::simplex::{maximize, LpOutcome};
use crate::linalg::Projection;
use crate::subspace::OperatorSubspace;

#[derive(Clone, Debug)]
pub(crate) struct ExactCone {
    /// Union of the supports of all elements of `K(p)`.
    pub support: Vec<usize>,
    /// Nonnegative element of `U` whose support is `support`.
    pub witness: Option<Vec<Q>>,
    /// Pairwise orthogonal basis of the linear span of `K(p)`.
    pub span: Vec<Vec<Q>>,
    /// Complement of `support`.
    pub q_max: Vec<usize>,
}

/// Finds the common support by one linear program per uncovered configuration:
/// maximize `g(y)` over `g ∈ U`, `g ≥ 0`, `g|_p = 0`, `Σ g = 1`.
pub(crate) fn analyze(p: &[usize], u: &OperatorSubspace) -> Result<ExactCone> {
    let n = u.ambient_n();
    let complement = u.exact_complement().ok_or_else(|| Error::Unsupported("subspace has no exact data".into()))?;
    let free: Vec<usize> = (0..n).filter(|x| p.binary_search(x).is_err()).collect();
    let mut a: Vec<Vec<Q>> = complement.iter().map(|w| free.iter().map(|&x| w[x].clone()).collect()).collect();
    a.push(vec![Q::one(); free.len()]);
    let mut b = vec![Q::zero(); complement.len()];
    b.push(Q::one());

    let mut covered = vec![false; free.len()];
    let mut witness = vec![Q::zero(); n];
    let mut feasible = true;
    for k in 0..free.len() {
        if covered[k] {
            continue;
        }
        let mut c = vec![Q::zero(); free.len()];
        c[k] = Q::one();
        match maximize(&c, &a, &b) {
            LpOutcome::Optimal { value, x } => {
                if value.is_positive() {
                    for (j, xj) in x.iter().enumerate() {
                        if xj.is_positive() {
                            covered[j] = true;
                            witness[free[j]] += xj;
                        }
                    }
                }
            }
            LpOutcome::Infeasible => {
                feasible = false;
                break;
            }
            LpOutcome::Unbounded => unreachable!("the trace-one slice is bounded"),
        }
    }
    let support: Vec<usize> = if feasible {
        free.iter().zip(&covered).filter(|(_, &c)| c).map(|(&x, _)| x).collect()
    } else {
        Vec::new()
    };
    let q_max: Vec<usize> = (0..n).filter(|x| support.binary_search(x).is_err()).collect();
    let span = u
        .linear_section(&Projection::from_support(n, q_max.iter().copied())?)?
        .exact_basis
        .expect("exact engine");
    let witness = (!support.is_empty()).then_some(witness);
    Ok(ExactCone { support, witness, span, q_max })
}

/// All extreme rays, each scaled to unit sum, by double description on the
/// coordinates of the span.
pub(crate) fn rays(ec: &ExactCone) -> Vec<Vec<Q>> {
    let d = ec.span.len();
    if d == 0 {
        return Vec::new();
    }
    let rows: Vec<Vec<Q>> = ec.support.iter().map(|&x| ec.span.iter().map(|b| b[x].clone()).collect()).collect();
    let coords = dd::extreme_rays(&rows, d).expect("cone of nonnegative functions is pointed");
    let n = ec.span[0].len();
    let mut out: Vec<Vec<Q>> = coords
        .iter()
        .map(|c| {
            let mut g = vec![Q::zero(); n];
            for (ci, b) in c.iter().zip(&ec.span) {
                for (gx, bx) in g.iter_mut().zip(b) {
                    *gx += ci * bx;
                }
            }
            let total = g.iter().fold(Q::zero(), |acc, x| acc + x);
            g.iter().map(|x| x / &total).collect()
        })
        .collect();
    out.sort();
    out
}

/// Zero set of a function.
pub(crate) fn zero_set(g: &[Q]) -> Vec<usize> {
    (0..g.len()).filter(|&x| g[x].is_zero()).collect()
}
