//! Composite systems of `N` sites: `k`-local subspaces `U_(k)`, partial
//! traces, the marginal map, classical marginal polytopes and the lattice of
//! frustration-free ground sets.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::{rank as q_rank, Q};
use crate::lattice::{Completeness, GroundLattice};
use crate::linalg::HermitianMatrix;
use crate::subspace::{Engine, OperatorSubspace};

/// Subset `ν ⊆ [N]` as a bitmask; site 0 is bit 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SiteSet(pub u64);

impl SiteSet {
    pub fn from_sites(sites: &[usize]) -> Self {
        SiteSet(sites.iter().fold(0, |m, &s| m | 1 << s))
    }

    pub fn sites(self) -> Vec<usize> {
        (0..64).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    /// `ν′ = [N] ∖ ν`.
    pub fn complement(self, n_sites: usize) -> Self {
        SiteSet(!self.0 & ((1u64 << n_sites) - 1))
    }

    pub fn intersection(self, other: SiteSet) -> Self {
        SiteSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: SiteSet) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.sites().iter().join(","))
    }
}

/// `N` sites with local dimensions `n_i`; classical systems use the exact
/// engine (functions on `X = ⨉ X_i`), quantum ones the float engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteSystem {
    dims: Vec<usize>,
    engine: Engine,
}

impl SiteSystem {
    pub fn new(dims: Vec<usize>, engine: Engine) -> Result<Self> {
        if dims.is_empty() || dims.len() > 63 {
            return Err(Error::invalid("a system needs between 1 and 63 sites"));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::invalid("every site needs dimension at least 2"));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::invalid("total dimension overflows"))?;
        Ok(SiteSystem { dims, engine })
    }

    pub fn bits(n: usize) -> Result<Self> {
        Self::new(vec![2; n], Engine::ExactCommutative)
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n], Engine::FloatHermitian)
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn is_classical(&self) -> bool {
        self.engine == Engine::ExactCommutative
    }

    /// `Π n_i`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn all_sites(&self) -> SiteSet {
        SiteSet((1u64 << self.n_sites()) - 1)
    }

    /// The subsystem on the sites of `nu`, in increasing order.
    pub fn restrict(&self, nu: SiteSet) -> SiteSystem {
        SiteSystem { dims: nu.sites().iter().map(|&i| self.dims[i]).collect(), engine: self.engine }
    }

    /// Digits of configuration `x`, site 0 most significant.
    pub fn decode(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_sites()];
        for i in (0..self.n_sites()).rev() {
            out[i] = x % self.dims[i];
            x /= self.dims[i];
        }
        out
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&d, &n)| acc * n + d)
    }

    /// Index of the truncation `x_ν` in `X_ν`.
    pub fn truncate(&self, x: usize, nu: SiteSet) -> usize {
        let digits = self.decode(x);
        nu.sites().iter().fold(0, |acc, &i| acc * self.dims[i] + digits[i])
    }

    /// All `ν` with `|ν| = k`, in lexicographic order of their site lists.
    pub fn subsets(&self, k: usize) -> Vec<SiteSet> {
        (0..self.n_sites()).combinations(k).map(|c| SiteSet::from_sites(&c)).collect()
    }

    fn check_subset(&self, nu: SiteSet) -> Result<()> {
        if nu.is_subset(self.all_sites()) {
            Ok(())
        } else {
            Err(Error::invalid(format!("site set {nu} is not contained in the {} sites", self.n_sites())))
        }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.n_sites() {
            return Err(Error::invalid(format!("k = {k} must lie between 1 and N = {}", self.n_sites())));
        }
        Ok(())
    }
}

impl fmt::Display for SiteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let uniform = self.dims.iter().all(|&d| d == 2);
        match (self.engine, uniform) {
            (Engine::ExactCommutative, true) => write!(f, "bits:N={}", self.n_sites()),
            (Engine::FloatHermitian, true) => write!(f, "qubits:N={}", self.n_sites()),
            (Engine::ExactCommutative, false) => write!(f, "classical:dims=[{}]", self.dims.iter().join(",")),
            (Engine::FloatHermitian, false) => write!(f, "sites:dims=[{}]", self.dims.iter().join(",")),
        }
    }
}

/// Accepts `bits:N=3`, `qubits:N=3`, `sites:dims=[2,3,2]` (quantum) and
/// `classical:dims=[2,3]`.
impl FromStr for SiteSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse system '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (key, value) = rest.split_once('=').ok_or_else(bad)?;
        let count = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        let list = |v: &str| -> Result<Vec<usize>> {
            let inner = v.trim().strip_prefix('[').and_then(|v| v.strip_suffix(']')).ok_or_else(bad)?;
            inner.split(',').map(count).collect()
        };
        match (kind.trim(), key.trim()) {
            ("bits", "N") => SiteSystem::bits(count(value)?),
            ("qubits", "N") => SiteSystem::qubits(count(value)?),
            ("sites", "dims") => SiteSystem::new(list(value)?, Engine::FloatHermitian),
            ("classical", "dims") => SiteSystem::new(list(value)?, Engine::ExactCommutative),
            _ => Err(bad()),
        }
    }
}

/// Generalized Gell-Mann matrices: an orthogonal basis of the traceless
/// hermitian `d × d` matrices, each of Frobenius norm `√2`.
pub fn gell_mann(d: usize) -> Vec<HermitianMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    let unit = |entries: &[(usize, usize, Complex64)]| {
        let mut m = vec![Complex64::zero(); d * d];
        for &(i, j, v) in entries {
            m[i * d + j] = v;
        }
        HermitianMatrix::new(d, m).expect("hermitian by construction")
    };
    let (one, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    for j in 0..d {
        for k in j + 1..d {
            out.push(unit(&[(j, k, one), (k, j, one)]));
            out.push(unit(&[(j, k, -i), (k, j, i)]));
        }
    }
    for l in 1..d {
        let c = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![c; l];
        diag.push(-(l as f64) * c);
        diag.resize(d, 0.0);
        out.push(HermitianMatrix::diagonal(&diag));
    }
    out
}

/// `U_(k)`: sums of terms acting on at most `k` sites, with the identity.
pub fn build_klocal(sys: &SiteSystem, k: usize) -> Result<OperatorSubspace> {
    sys.check_k(k)?;
    let n_sites = sys.n_sites();
    let subsets: Vec<SiteSet> = (1..=k).flat_map(|l| sys.subsets(l)).collect();
    let u = if sys.is_classical() {
        let total = sys.total_dim();
        let configs: Vec<Vec<usize>> = (0..total).map(|x| sys.decode(x)).collect();
        let mut fs = vec![vec![Q::one(); total]];
        for nu in &subsets {
            let sites = nu.sites();
            // traceless site functions δ_j − δ_0, j ≥ 1, multiplied over ν
            for labels in sites.iter().map(|&i| 1..sys.dims[i]).multi_cartesian_product() {
                fs.push(
                    configs
                        .iter()
                        .map(|x| {
                            sites.iter().zip(&labels).fold(Q::one(), |acc, (&i, &j)| {
                                let v = if x[i] == j {
                                    Q::one()
                                } else if x[i] == 0 {
                                    -Q::one()
                                } else {
                                    Q::zero()
                                };
                                acc * v
                            })
                        })
                        .collect(),
                );
            }
        }
        OperatorSubspace::from_functions(total, &fs)?
    } else {
        let site_bases: Vec<Vec<HermitianMatrix>> = sys.dims.iter().map(|&d| gell_mann(d)).collect();
        let mut mats = vec![HermitianMatrix::identity(sys.total_dim())];
        for nu in &subsets {
            let sites = nu.sites();
            for picks in sites.iter().map(|&i| 0..site_bases[i].len()).multi_cartesian_product() {
                let mut factor = HermitianMatrix::identity(1);
                let mut pick = picks.iter();
                for i in 0..n_sites {
                    let f = if nu.contains(i) {
                        site_bases[i][*pick.next().expect("one pick per site")].clone()
                    } else {
                        HermitianMatrix::identity(sys.dims[i])
                    };
                    factor = factor.kron(&f);
                }
                mats.push(factor);
            }
        }
        OperatorSubspace::from_spanning_set(&mats, Engine::FloatHermitian, 1e-9)?
    };
    Ok(u.with_site_dims(sys.dims.clone()))
}

/// `1 + Σ_{1 ≤ |ν| ≤ k} Π_{i∈ν} (m_i − 1)` with `m_i = n_i` for classical and
/// `n_i²` for quantum sites.
pub fn klocal_dimension(sys: &SiteSystem, k: usize) -> usize {
    let m: Vec<usize> = sys.dims.iter().map(|&d| if sys.is_classical() { d } else { d * d }).collect();
    1 + (1..=k.min(sys.n_sites()))
        .flat_map(|l| sys.subsets(l))
        .map(|nu| nu.sites().iter().map(|&i| m[i] - 1).product::<usize>())
        .sum::<usize>()
}

/// Index tables `(kept, traced) → global` for splitting `[N]` into `ν′` and `ν`.
fn split_table(sys: &SiteSystem, traced: SiteSet) -> (usize, usize, Vec<usize>) {
    let kept = traced.complement(sys.n_sites());
    let (dk, dt) = (sys.restrict(kept).total_dim(), sys.restrict(traced).total_dim());
    let mut table = vec![0; dk * dt];
    for x in 0..sys.total_dim() {
        table[sys.truncate(x, kept) * dt + sys.truncate(x, traced)] = x;
    }
    (dk, dt, table)
}

/// `tr_ν(a)`, an operator on the sites `ν′`.
pub fn partial_trace(a: &HermitianMatrix, sys: &SiteSystem, nu: SiteSet) -> Result<HermitianMatrix> {
    sys.check_subset(nu)?;
    if a.n() != sys.total_dim() {
        return Err(Error::DimensionMismatch { expected: sys.total_dim(), found: a.n() });
    }
    let (dk, dt, table) = split_table(sys, nu);
    let mut out = vec![Complex64::zero(); dk * dk];
    for r in 0..dk {
        for c in 0..dk {
            out[r * dk + c] = (0..dt).map(|t| a.get(table[r * dt + t], table[c * dt + t])).sum();
        }
    }
    HermitianMatrix::new(dk, out)
}

/// `b ⊗ id_ν′` for `b` acting on the sites of `nu`.
pub fn embed(b: &HermitianMatrix, sys: &SiteSystem, nu: SiteSet) -> Result<HermitianMatrix> {
    sys.check_subset(nu)?;
    let rest = nu.complement(sys.n_sites());
    let (dk, dt, table) = split_table(sys, rest);
    if b.n() != dk {
        return Err(Error::DimensionMismatch { expected: dk, found: b.n() });
    }
    let n = sys.total_dim();
    let mut out = vec![Complex64::zero(); n * n];
    for r in 0..dk {
        for c in 0..dk {
            let v = b.get(r, c);
            if v != Complex64::zero() {
                for t in 0..dt {
                    out[table[r * dt + t] * n + table[c * dt + t]] = v;
                }
            }
        }
    }
    HermitianMatrix::new(n, out)
}

/// The `k`-body marginals `(tr_ν′(a))_{|ν| = k}`.
#[derive(Clone, Debug)]
pub struct MarginalTuple {
    pub system: SiteSystem,
    /// In lexicographic order of `ν`.
    pub entries: Vec<(SiteSet, HermitianMatrix)>,
}

impl MarginalTuple {
    pub fn get(&self, nu: SiteSet) -> Option<&HermitianMatrix> {
        self.entries.iter().find(|(m, _)| *m == nu).map(|(_, a)| a)
    }

    /// Largest Frobenius distance between corresponding entries.
    pub fn distance(&self, other: &MarginalTuple) -> f64 {
        self.entries.iter().zip(&other.entries).map(|((_, a), (_, b))| (a - b).frobenius_norm()).fold(0.0, f64::max)
    }

    /// Largest disagreement of two entries after tracing both down to their common sites.
    pub fn max_inconsistency(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for [(nu, a), (mu, b)] in self.entries.iter().array_combinations() {
            let common = nu.intersection(*mu);
            let ra = reduce_to(a, &self.system, *nu, common)?;
            let rb = reduce_to(b, &self.system, *mu, common)?;
            worst = worst.max((&ra - &rb).frobenius_norm());
        }
        Ok(worst)
    }
}

/// Traces an operator on the sites `nu` down to the sites `target ⊆ nu`.
fn reduce_to(a: &HermitianMatrix, sys: &SiteSystem, nu: SiteSet, target: SiteSet) -> Result<HermitianMatrix> {
    let local = sys.restrict(nu);
    let drop: Vec<usize> = nu.sites().iter().enumerate().filter(|(_, s)| !target.contains(**s)).map(|(j, _)| j).collect();
    partial_trace(a, &local, SiteSet::from_sites(&drop))
}

/// `tr_(k)(a)`.
pub fn marginal_map(a: &HermitianMatrix, sys: &SiteSystem, k: usize) -> Result<MarginalTuple> {
    sys.check_k(k)?;
    let entries = sys
        .subsets(k)
        .into_iter()
        .map(|nu| Ok((nu, partial_trace(a, sys, nu.complement(sys.n_sites()))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MarginalTuple { system: sys.clone(), entries })
}

/// Columns of the classical marginal map: for each configuration `x`, the
/// 0-1 vector indexed by pairs `(ν, y)`, `|ν| = k`, `y ∈ X_ν`, with a one
/// where `y = x_ν`.
pub fn marginal_polytope_vertices(sys: &SiteSystem, k: usize) -> Result<Vec<Vec<Q>>> {
    sys.check_k(k)?;
    if !sys.is_classical() {
        return Err(Error::Unsupported("marginal polytope vertices need a classical system".into()));
    }
    let subsets = sys.subsets(k);
    Ok((0..sys.total_dim())
        .map(|x| {
            subsets
                .iter()
                .flat_map(|&nu| {
                    let size = sys.restrict(nu).total_dim();
                    let hit = sys.truncate(x, nu);
                    (0..size).map(move |y| if y == hit { Q::one() } else { Q::zero() })
                })
                .collect()
        })
        .collect())
}

/// Dimension of the affine hull of a point set.
pub fn affine_dimension(points: &[Vec<Q>]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    if diffs.is_empty() {
        0
    } else {
        q_rank(&diffs, first.len())
    }
}

/// Ground sets of frustration-free `k`-local functions, with `0`: all
/// nonempty intersections of cylinder sets `{x : x_ν ∈ S_ν}`, `|ν| = k`.
/// Built from the maximal cylinders `S_ν = X_ν ∖ {y}`.
pub fn frustration_free_lattice(sys: &SiteSystem, k: usize, max_nodes: usize) -> Result<GroundLattice> {
    sys.check_k(k)?;
    if !sys.is_classical() {
        return Err(Error::Unsupported("the frustration-free lattice is built for classical systems only".into()));
    }
    let u = build_klocal(sys, k)?;
    let n = sys.total_dim();
    let mut coatoms = Vec::new();
    for nu in sys.subsets(k) {
        for y in 0..sys.restrict(nu).total_dim() {
            let support: Vec<usize> = (0..n).filter(|&x| sys.truncate(x, nu) != y).collect();
            coatoms.push(crate::linalg::Projection::from_support(n, support)?);
        }
    }
    if k == sys.n_sites() {
        coatoms.clear();
        for x in 0..n {
            coatoms.push(crate::linalg::Projection::from_support(n, (0..n).filter(|&z| z != x))?);
        }
    }
    GroundLattice::from_coatoms(u, coatoms, Completeness::Exact, max_nodes)
}

/// `𝒬(U_(2))` for three bits.
pub fn ff_lattice_3bit() -> GroundLattice {
    frustration_free_lattice(&SiteSystem::bits(3).expect("valid"), 2, 100_000).expect("small fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::lattice::build_lattice;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn klocal_dimensions() {
        assert_eq!(build_klocal(&SiteSystem::bits(3).unwrap(), 2).unwrap().dim(), 7);
        let q = build_klocal(&SiteSystem::qubits(3).unwrap(), 2).unwrap();
        assert_eq!(q.dim(), 37);
        assert!(q.contains_identity());
        let full = build_klocal(&SiteSystem::qubits(2).unwrap(), 2).unwrap();
        assert_eq!(full.dim(), 16);
        let mixed: SiteSystem = "sites:dims=[2,3]".parse().unwrap();
        assert_eq!(build_klocal(&mixed, 1).unwrap().dim(), klocal_dimension(&mixed, 1));
        assert_eq!(klocal_dimension(&mixed, 1), 1 + 3 + 8);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["bits:N=3", "qubits:N=2", "sites:dims=[2,3,2]", "classical:dims=[2,3]"] {
            let sys: SiteSystem = s.parse().unwrap();
            assert_eq!(sys.to_string(), s);
        }
        assert!("bits:N=0".parse::<SiteSystem>().is_err());
        assert!("sites:dims=[1,2]".parse::<SiteSystem>().is_err());
        assert!("spins:N=2".parse::<SiteSystem>().is_err());
    }

    #[test]
    fn partial_trace_of_sigma_x_tensor_identity() {
        let sys = SiteSystem::qubits(2).unwrap();
        let sx = &gell_mann(2)[0];
        let a = sx.kron(&HermitianMatrix::identity(2));
        let r = partial_trace(&a, &sys, SiteSet::from_sites(&[1])).unwrap();
        assert!((&r - &sx.scale(2.0)).frobenius_norm() < 1e-12);
        let same = partial_trace(&a, &sys, SiteSet::default()).unwrap();
        assert_eq!(same, a);
    }

    #[test]
    fn partial_trace_is_adjoint_to_embedding() {
        let sys: SiteSystem = "sites:dims=[2,3,2]".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let full = build_klocal(&sys, 3).unwrap();
        let a = full.random_element(&mut rng);
        for nu in [SiteSet::from_sites(&[0]), SiteSet::from_sites(&[1, 2]), SiteSet::from_sites(&[0, 2])] {
            let kept = nu.complement(3);
            let small = sys.restrict(kept);
            let lhs = partial_trace(&a, &sys, nu).unwrap();
            for b in gell_mann(small.total_dim()) {
                let rhs = a.inner(&embed(&b, &sys, kept).unwrap());
                assert!((lhs.inner(&b) - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn point_mass_marginals() {
        let sys = SiteSystem::bits(3).unwrap();
        let cols = marginal_polytope_vertices(&sys, 2).unwrap();
        assert_eq!(cols.len(), 8);
        assert!(cols.iter().all(|c| c.len() == 12));
        assert_eq!(affine_dimension(&cols), 6);
        assert_eq!(affine_dimension(&marginal_polytope_vertices(&SiteSystem::bits(2).unwrap(), 1).unwrap()), 2);
        let one = marginal_polytope_vertices(&SiteSystem::new(vec![3], Engine::ExactCommutative).unwrap(), 1).unwrap();
        assert_eq!(one.len(), 3);
        assert!(marginal_polytope_vertices(&SiteSystem::qubits(2).unwrap(), 1).is_err());
    }

    #[test]
    fn marginals_of_product_state() {
        let sys = SiteSystem::qubits(3).unwrap();
        let rho = |t: f64| HermitianMatrix::from_real_rows(&[&[t, 0.1], &[0.1, 1.0 - t]]).unwrap();
        let (r1, r2, r3) = (rho(0.2), rho(0.5), rho(0.9));
        let state = r1.kron(&r2).kron(&r3);
        let m = marginal_map(&state, &sys, 1).unwrap();
        for (i, r) in [r1, r2, r3].iter().enumerate() {
            assert!((m.get(SiteSet::from_sites(&[i])).unwrap() - r).frobenius_norm() < 1e-12);
        }
        let m2 = marginal_map(&state, &sys, 2).unwrap();
        assert!(m2.max_inconsistency().unwrap() < 1e-12);
    }

    #[test]
    fn marginals_only_see_the_klocal_part() {
        let sys = SiteSystem::qubits(3).unwrap();
        let u = build_klocal(&sys, 2).unwrap();
        let full = build_klocal(&sys, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = full.random_element(&mut rng);
        let m = marginal_map(&a, &sys, 2).unwrap();
        let mp = marginal_map(&u.project_onto(&a), &sys, 2).unwrap();
        assert!(m.distance(&mp) < 1e-9);
    }

    #[test]
    fn frustration_free_lattice_of_three_bits() {
        let q = ff_lattice_3bit();
        assert_eq!(q.coatoms.len(), 12);
        for i in 0..8usize {
            assert!(q.contains_support(&[i]));
            for j in i + 1..8 {
                assert!(q.contains_support(&[i, j]));
            }
        }
        let dual_fives = (0..8usize)
            .combinations(3)
            .filter(|s| q.contains_support(s))
            .count();
        assert_eq!(dual_fives, 48);
        for &c in &q.coatoms {
            let s = q.nodes[c].complement();
            let s = s.support().unwrap();
            assert_eq!((s[0] ^ s[1]).count_ones(), 1);
        }
        let p = build_lattice(&build_klocal(&SiteSystem::bits(3).unwrap(), 2).unwrap(), &RunConfig::default()).unwrap();
        assert!(q.nodes.iter().all(|n| p.contains(n)));
    }
}
