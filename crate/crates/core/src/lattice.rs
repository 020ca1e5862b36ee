//! The ground projection lattice `𝒫(U)`: membership through `q_max`, coatoms,
//! coatom decompositions and the closure of the coatoms under intersection.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{analyze_cone, analyze_cone_with_hint, effective_engine, exact_rays, extreme_rays, zero_set, ConeDescriptor};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::exact::linalg::{rank as q_rank, Q};
use crate::linalg::{eig_herm, image_intersection, kernel_projection, HermitianMatrix, Projection};
use crate::subspace::{support_of, Engine, OperatorSubspace};

/// Principal-angle tolerance for deciding that two float projections agree.
pub const EQ_TOL: f64 = 1e-7;
/// Principal-angle tolerance used when intersecting float projections.
pub const INTERSECT_TOL: f64 = 1e-7;
/// Above this many configurations the exact coatom search switches from
/// scanning all supports to the extreme rays of `K(0)`.
const SUPPORT_SCAN_LIMIT: usize = 12;
const SAMPLE_STREAM: u64 = 0x636f_6174;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Exact,
    Sampled,
}

impl Completeness {
    pub fn name(self) -> &'static str {
        match self {
            Completeness::Exact => "exact",
            Completeness::Sampled => "sampled",
        }
    }
}

/// Coatoms found by [`enumerate_coatoms`].
#[derive(Clone, Debug)]
pub struct CoatomSet {
    pub coatoms: Vec<Projection>,
    pub completeness: Completeness,
    /// Random elements drawn; zero for a complete enumeration.
    pub samples: usize,
}

/// A finite lattice of projections closed under intersection, with its cover
/// relation. Nodes are sorted by rank and then canonical form, so node 0 is
/// the zero projection and the last node is the identity.
#[derive(Clone, Debug)]
pub struct GroundLattice {
    pub subspace: OperatorSubspace,
    pub nodes: Vec<Projection>,
    /// Pairs `(child, parent)` with `parent` covering `child`.
    pub hasse_edges: Vec<(usize, usize)>,
    /// Indices into `nodes`.
    pub coatoms: Vec<usize>,
    pub completeness: Completeness,
}

fn engine_for(u: &OperatorSubspace, cfg: &RunConfig) -> Result<Engine> {
    effective_engine(u, cfg)
}

fn same(p: &Projection, q: &Projection) -> bool {
    match (p.support(), q.support()) {
        (Some(a), Some(b)) => a == b,
        _ => p.approx_eq(q, EQ_TOL),
    }
}

fn meet(p: &Projection, q: &Projection) -> Projection {
    image_intersection(p, q, INTERSECT_TOL)
}

/// Ordering by rank, then support (for diagonal projections) or canonical form.
pub fn node_cmp(p: &Projection, q: &Projection) -> Ordering {
    match (p.support(), q.support()) {
        (Some(a), Some(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        _ => p.canonical_cmp(q),
    }
}

/// Greatest projection with the same cone as `p`: `ker` of a maximal-rank
/// element of `K(p)`, or `id` when the cone is `{0}`.
pub fn q_max(p: &Projection, u: &OperatorSubspace, cfg: &RunConfig) -> Result<Projection> {
    u.require_identity()?;
    Ok(analyze_cone(p, u, cfg)?.q_max)
}

/// `p ∈ 𝒫(U)`, i.e. `q_max(p) = p`.
pub fn is_ground_projection(p: &Projection, u: &OperatorSubspace, cfg: &RunConfig) -> Result<bool> {
    u.require_identity()?;
    let d = analyze_cone(p, u, cfg)?;
    Ok(member(p, &d))
}

fn member(p: &Projection, d: &ConeDescriptor) -> bool {
    d.q_max.rank() == p.rank() && same(&d.q_max, &d.base_projection)
}

/// `p` is a coatom of `𝒫(U)`: a member whose cone is a ray.
pub fn is_coatom(p: &Projection, u: &OperatorSubspace, cfg: &RunConfig) -> Result<bool> {
    u.require_identity()?;
    let d = analyze_cone(p, u, cfg)?;
    Ok(d.dim_k == 1 && member(p, &d))
}

/// Coatoms `q_1, …, q_d` with `p = q_1 ∧ … ∧ q_d`, `d = dim K(p)`, taken as
/// kernels of linearly independent exposed extreme rays of `K(p)`.
pub fn coatom_decomposition(p: &Projection, u: &OperatorSubspace, cfg: &RunConfig) -> Result<Vec<Projection>> {
    u.require_identity()?;
    let d = analyze_cone(p, u, cfg)?;
    if d.dim_k == 0 {
        return Ok(Vec::new());
    }
    if !member(p, &d) {
        return Err(Error::invalid("coatom decomposition needs a ground projection"));
    }
    match exact_rays(&d) {
        Some(rays) => exact_decomposition(p, &rays, d.dim_k),
        None => {
            if d.dim_k == 1 {
                return Ok(vec![p.clone()]);
            }
            let rays = extreme_rays(&d, u, cfg)?;
            let found = rays.iter().map(|r| kernel_projection(r, 1e-6)).collect::<Result<Vec<_>>>()?;
            if found.len() < d.dim_k {
                return Err(Error::Incomplete { found, needed: d.dim_k });
            }
            Ok(found)
        }
    }
}

/// Greedy choice of `d` independent rays whose supports cover `X ∖ p`.
fn exact_decomposition(p: &Projection, rays: &[Vec<Q>], d: usize) -> Result<Vec<Projection>> {
    let n = p.n();
    let base = support_of(p).expect("exact engine");
    let mut uncovered: HashSet<usize> = (0..n).filter(|x| base.binary_search(x).is_err()).collect();
    let mut chosen: Vec<&Vec<Q>> = Vec::new();
    let independent = |chosen: &[&Vec<Q>], r: &Vec<Q>| {
        let mut m: Vec<Vec<Q>> = chosen.iter().map(|v| (*v).clone()).collect();
        m.push(r.clone());
        q_rank(&m, n) == m.len()
    };
    while chosen.len() < d {
        let best = rays
            .iter()
            .filter(|r| !chosen.contains(r) && independent(&chosen, r))
            .max_by(|a, b| {
                let gain = |r: &Vec<Q>| (0..n).filter(|x| uncovered.contains(x) && !r[*x].eq(&Q::from_integer(0.into()))).count();
                gain(a).cmp(&gain(b)).then_with(|| b.cmp(a))
            });
        let Some(r) = best else { break };
        for x in 0..n {
            if r[x] != Q::from_integer(0.into()) {
                uncovered.remove(&x);
            }
        }
        chosen.push(r);
    }
    chosen.iter().map(|r| Projection::from_support(n, zero_set(r))).collect()
}

/// Coatoms of `𝒫(U)`. Complete in the exact engine; in the float engine the
/// ground projections of `cfg.samples` random elements, plus coatoms read off
/// from the cones of non-coatom ground projections met along the way.
pub fn enumerate_coatoms(u: &OperatorSubspace, cfg: &RunConfig) -> Result<CoatomSet> {
    u.require_identity()?;
    cfg.validate()?;
    match engine_for(u, cfg)? {
        Engine::ExactCommutative => exact_coatoms(u, cfg),
        Engine::FloatHermitian => sampled_coatoms(u, cfg),
    }
}

fn exact_coatoms(u: &OperatorSubspace, cfg: &RunConfig) -> Result<CoatomSet> {
    let n = u.ambient_n();
    let mut coatoms = Vec::new();
    if n <= SUPPORT_SCAN_LIMIT {
        for mask in 0u64..(1 << n) {
            let p = Projection::from_support(n, (0..n).filter(|x| mask >> x & 1 == 1))?;
            let d = analyze_cone(&p, u, cfg)?;
            if d.dim_k == 1 && member(&p, &d) {
                coatoms.push(p);
            }
        }
    } else {
        let d = analyze_cone(&Projection::zero(n), u, cfg)?;
        for r in exact_rays(&d).expect("exact engine") {
            coatoms.push(Projection::from_support(n, zero_set(&r))?);
        }
    }
    coatoms.sort_by(node_cmp);
    Ok(CoatomSet { coatoms, completeness: Completeness::Exact, samples: 0 })
}

fn sampled_coatoms(u: &OperatorSubspace, cfg: &RunConfig) -> Result<CoatomSet> {
    let n = u.ambient_n();
    let uf = if u.is_exact() { u.to_float() } else { u.clone() };
    let mut rng = cfg.rng(SAMPLE_STREAM);
    let mut coatoms = ProjectionIndex::new(n);
    let mut seen = ProjectionIndex::new(n);
    if uf.dim() == 1 {
        coatoms.insert(Projection::zero(n));
    }
    for _ in 0..cfg.samples {
        let a = uf.random_element(&mut rng);
        let e = eig_herm(&a, cfg.tol_spec)?;
        let g = e.groups[0].clone();
        let p = Projection::from_vectors(n, &e.vectors(g), 1e-9)?;
        if coatoms.find(&p).is_some() || seen.find(&p).is_some() {
            continue;
        }
        let mut hint = a.clone();
        hint.add_scaled(-e.ground_energy(), &HermitianMatrix::identity(n));
        let d = analyze_cone_with_hint(&p, &uf, cfg, Some(&hint))?;
        if d.dim_k == 1 {
            coatoms.insert(p);
            continue;
        }
        seen.insert(p);
        if d.dim_k < 2 || d.dim_k > cfg.max_ray_dim {
            continue;
        }
        for r in extreme_rays(&d, &uf, cfg)? {
            let q = kernel_projection(&r, 1e-6)?;
            if coatoms.find(&q).is_some() {
                continue;
            }
            let dq = analyze_cone(&q, &uf, cfg)?;
            if dq.dim_k == 1 && member(&q, &dq) {
                coatoms.insert(q);
            }
        }
    }
    let mut list = coatoms.items;
    list.sort_by(node_cmp);
    Ok(CoatomSet { coatoms: list, completeness: Completeness::Sampled, samples: cfg.samples })
}

/// `𝒫(U)` built top-down: the coatoms closed under intersection, with `0` and `id`.
pub fn build_lattice(u: &OperatorSubspace, cfg: &RunConfig) -> Result<GroundLattice> {
    let set = enumerate_coatoms(u, cfg)?;
    GroundLattice::from_coatoms(u.clone(), set.coatoms, set.completeness, cfg.max_nodes)
}

/// Hash-free lookup of float projections: a linear functional of the matrix
/// narrows candidates before a principal-angle comparison.
struct ProjectionIndex {
    weight: HermitianMatrix,
    by_rank: BTreeMap<usize, Vec<(f64, usize)>>,
    supports: HashSet<Vec<usize>>,
    items: Vec<Projection>,
}

impl ProjectionIndex {
    fn new(n: usize) -> Self {
        let weight = HermitianMatrix::new(
            n,
            (0..n * n)
                .map(|k| {
                    let (i, j) = ((k / n) as f64, (k % n) as f64);
                    Complex64::new((1.3 * (i + j) + 0.7 * i * j + 0.1).cos(), (0.9 * (i - j)).sin())
                })
                .collect(),
        )
        .expect("square");
        ProjectionIndex { weight, by_rank: BTreeMap::new(), supports: HashSet::new(), items: Vec::new() }
    }

    fn key(&self, p: &Projection) -> f64 {
        let b = p.basis();
        b.congruence(self.weight.as_cmat()).trace().re
    }

    fn window(&self) -> f64 {
        10.0 * EQ_TOL * self.weight.frobenius_norm()
    }

    fn find(&self, p: &Projection) -> Option<usize> {
        if let Some(s) = p.support() {
            if !self.supports.contains(s) {
                return None;
            }
        }
        let list = self.by_rank.get(&p.rank())?;
        let k = self.key(p);
        let w = self.window();
        let start = list.partition_point(|(x, _)| *x < k - w);
        list[start..].iter().take_while(|(x, _)| *x <= k + w).map(|&(_, i)| i).find(|&i| same(&self.items[i], p))
    }

    /// Inserts unless present; returns the index and whether it was new.
    fn insert(&mut self, p: Projection) -> (usize, bool) {
        if let Some(i) = self.find(&p) {
            return (i, false);
        }
        let k = self.key(&p);
        let i = self.items.len();
        if let Some(s) = p.support() {
            self.supports.insert(s.to_vec());
        }
        let list = self.by_rank.entry(p.rank()).or_default();
        let at = list.partition_point(|(x, _)| *x < k);
        list.insert(at, (k, i));
        self.items.push(p);
        (i, true)
    }
}

impl GroundLattice {
    /// Closes `{id} ∪ coatoms` under intersection and adds `0`.
    pub fn from_coatoms(
        subspace: OperatorSubspace,
        coatoms: Vec<Projection>,
        completeness: Completeness,
        max_nodes: usize,
    ) -> Result<Self> {
        let n = subspace.ambient_n();
        let mut index = ProjectionIndex::new(n);
        index.insert(Projection::identity(n));
        let coatom_ids: Vec<usize> = coatoms.into_iter().map(|c| index.insert(c).0).collect();
        let mut queue: Vec<usize> = coatom_ids.clone();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            // a meet with a rank-one node is that node or zero
            if index.items[x].rank() <= 1 {
                continue;
            }
            for &c in &coatom_ids {
                let (px, pc) = (&index.items[x], &index.items[c]);
                if c == x || pc.rank() <= 1 || px.leq(pc, EQ_TOL) {
                    continue;
                }
                let m = meet(px, pc);
                if m.is_zero() {
                    continue;
                }
                let (i, new) = index.insert(m);
                if new {
                    queue.push(i);
                    if index.items.len() + 1 > max_nodes {
                        let partial = GroundLattice::assemble(subspace, index.items, &coatom_ids, completeness, false);
                        return Err(Error::BudgetExceeded { budget: max_nodes, partial: Box::new(partial) });
                    }
                }
            }
        }
        index.insert(Projection::zero(n));
        Ok(GroundLattice::assemble(subspace, index.items, &coatom_ids, completeness, true))
    }

    fn assemble(
        subspace: OperatorSubspace,
        items: Vec<Projection>,
        coatom_ids: &[usize],
        completeness: Completeness,
        with_edges: bool,
    ) -> Self {
        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by(|&a, &b| node_cmp(&items[a], &items[b]));
        let mut position = vec![0; items.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut coatoms: Vec<usize> = coatom_ids.iter().map(|&i| position[i]).collect();
        coatoms.sort_unstable();
        coatoms.dedup();
        let mut slots: Vec<Option<Projection>> = items.into_iter().map(Some).collect();
        let nodes: Vec<Projection> = order.iter().map(|&i| slots[i].take().expect("permutation")).collect();
        let mut lattice = GroundLattice { subspace, nodes, hasse_edges: Vec::new(), coatoms, completeness };
        if with_edges {
            lattice.hasse_edges = lattice.covers();
        }
        lattice
    }

    /// Cover pairs, from the sets of coatoms above each node: in a lattice
    /// generated by its coatoms, `x ≤ y` exactly when every coatom above `y`
    /// is above `x`.
    fn covers(&self) -> Vec<(usize, usize)> {
        let m = self.coatoms.len();
        let above: Vec<FixedBitSet> = self.nodes.iter().enumerate().map(|(i, _)| self.coatoms_above(i)).collect();
        let top = self.nodes.len() - 1;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (y, set) in above.iter().enumerate() {
            if !self.nodes[y].is_zero() {
                if let Some(first) = set.ones().next() {
                    groups[first].push(y);
                }
            }
        }
        let mut edges = Vec::new();
        for x in 0..self.nodes.len() {
            if x == top {
                continue;
            }
            let rx = self.nodes[x].rank();
            let mut cands: Vec<usize> = above[x].ones().flat_map(|j| groups[j].iter().copied()).collect();
            cands.push(top);
            cands.retain(|&y| y != x && above[y].is_subset(&above[x]) && above[y] != above[x]);
            cands.sort_unstable_by_key(|&y| (self.nodes[y].rank(), y));
            cands.dedup();
            let mut accepted: Vec<usize> = Vec::new();
            for y in cands {
                let direct = self.nodes[y].rank() == rx + 1;
                if direct || !accepted.iter().any(|&c| above[y].is_subset(&above[c])) {
                    accepted.push(y);
                }
            }
            edges.extend(accepted.into_iter().map(|y| (x, y)));
        }
        edges.sort_unstable();
        edges
    }

    /// Coatoms above node `i`, as a bitset over positions in `self.coatoms`.
    pub fn coatoms_above(&self, i: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.coatoms.len());
        let x = &self.nodes[i];
        for (j, &c) in self.coatoms.iter().enumerate() {
            let pc = &self.nodes[c];
            let hit = if x.is_zero() {
                true
            } else if pc.rank() == x.rank() {
                c == i
            } else {
                pc.rank() > x.rank() && x.leq(pc, EQ_TOL)
            };
            set.set(j, hit);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, p: &Projection) -> Option<usize> {
        self.nodes.iter().position(|q| q.rank() == p.rank() && same(p, q))
    }

    pub fn contains(&self, p: &Projection) -> bool {
        self.find(p).is_some()
    }

    pub fn contains_support(&self, support: &[usize]) -> bool {
        let mut s = support.to_vec();
        s.sort_unstable();
        self.nodes.iter().any(|q| q.rank() == s.len() && support_of(q).as_deref() == Some(&s[..]))
    }

    /// Number of nodes of each rank.
    pub fn rank_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for p in &self.nodes {
            *out.entry(p.rank()).or_insert(0) += 1;
        }
        out
    }

    /// Intersection of all coatoms above node `i` (`id` for none).
    pub fn coatom_meet(&self, i: usize) -> Projection {
        let n = self.subspace.ambient_n();
        self.coatoms_above(i).ones().fold(Projection::identity(n), |acc, j| meet(&acc, &self.nodes[self.coatoms[j]]))
    }

    /// Label for node `i`: configurations of a diagonal projection, else `r<rank>#<i>`.
    pub fn label(&self, i: usize) -> String {
        let p = &self.nodes[i];
        match p.support() {
            Some(s) => {
                let dims = self.subspace.site_dims().map(<[usize]>::to_vec);
                let names: Vec<String> = s.iter().map(|&x| config_name(x, dims.as_deref())).collect();
                format!("{{{}}}", names.join(","))
            }
            None => format!("r{}#{}", p.rank(), i),
        }
    }

    /// Hasse diagram in Graphviz DOT, larger projections on top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ground_lattice {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
        for i in 0..self.nodes.len() {
            let style = if self.coatoms.binary_search(&i).is_ok() { ", style=bold" } else { "" };
            let _ = writeln!(out, "  n{i} [label=\"{}\"{style}];", self.label(i));
        }
        for &(a, b) in &self.hasse_edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

/// Digits of configuration `x`, first site most significant.
pub fn config_name(x: usize, dims: Option<&[usize]>) -> String {
    match dims {
        Some(d) if d.iter().all(|&k| k <= 10) && !d.is_empty() => {
            let mut digits = Vec::with_capacity(d.len());
            let mut rest = x;
            for &k in d.iter().rev() {
                digits.push(char::from_digit((rest % k) as u32, 10).expect("digit"));
                rest /= k;
            }
            digits.iter().rev().collect()
        }
        _ => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::linalg::q;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn m3() -> OperatorSubspace {
        let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
        let a1 = HermitianMatrix::new(3, vec![z, o, z, o, z, z, z, z, o * 2.0]).unwrap();
        let a2 = HermitianMatrix::new(3, vec![z, -i, z, i, z, z, z, z, z]).unwrap();
        OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(3), a1, a2], Engine::FloatHermitian, 1e-9).unwrap()
    }

    fn p_pm(sign: f64) -> Projection {
        let zp = c(-0.5, sign * 3f64.sqrt() / 2.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Projection::from_vectors(3, &[vec![c(s, 0.0), -zp * s, c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]], 1e-12)
            .unwrap()
    }

    /// Pairwise functions on three bits: all products of single-site and
    /// two-site indicator functions, as the span of `x_i`, `x_i x_j` and 1.
    fn three_bit() -> OperatorSubspace {
        let mut fs = vec![vec![q(1); 8]];
        for i in 0..3 {
            fs.push((0..8).map(|x| q(((x >> (2 - i)) & 1) as i64)).collect());
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            fs.push((0..8).map(|x| q((((x >> (2 - i)) & 1) * ((x >> (2 - j)) & 1)) as i64)).collect());
        }
        OperatorSubspace::from_functions(8, &fs).unwrap().with_site_dims(vec![2, 2, 2])
    }

    #[test]
    fn three_bit_coatoms_are_the_sixteen_edges() {
        let u = three_bit();
        let set = enumerate_coatoms(&u, &RunConfig::default()).unwrap();
        assert_eq!(set.coatoms.len(), 16);
        for p in &set.coatoms {
            let s = p.complement();
            let s = s.support().unwrap();
            assert_eq!(s.len(), 2);
            assert_eq!((s[0].count_ones() + s[1].count_ones()) % 2, 1, "{s:?}");
        }
    }

    #[test]
    fn three_bit_lattice_sizes() {
        let u = three_bit();
        let l = build_lattice(&u, &RunConfig::default()).unwrap();
        assert_eq!(l.len(), 226);
        for mask in 0u32..256 {
            let s: Vec<usize> = (0..8).filter(|x| mask >> x & 1 == 1).collect();
            if s.len() <= 3 {
                assert!(l.contains_support(&s), "{s:?} {:?}", l.rank_counts());
            }
            if s.len() == 7 {
                assert!(!l.contains_support(&s));
            }
        }
        for i in 0..l.len() - 1 {
            assert!(same(&l.coatom_meet(i), &l.nodes[i]));
        }
    }

    #[test]
    fn exact_ray_route_matches_scan() {
        let u = three_bit();
        let cfg = RunConfig::default();
        let d = analyze_cone(&Projection::zero(8), &u, &cfg).unwrap();
        let mut via_rays: Vec<Projection> =
            exact_rays(&d).unwrap().iter().map(|r| Projection::from_support(8, zero_set(r)).unwrap()).collect();
        via_rays.sort_by(node_cmp);
        let scan = enumerate_coatoms(&u, &cfg).unwrap().coatoms;
        assert_eq!(via_rays.len(), scan.len());
        assert!(via_rays.iter().zip(&scan).all(|(a, b)| a.support() == b.support()));
    }

    #[test]
    fn three_bit_decomposition_of_two_edges() {
        let u = three_bit();
        let cfg = RunConfig::default();
        // complements {000, 001} and {011, 010}
        let p = Projection::from_support(8, [4, 5, 6, 7]).unwrap();
        assert!(is_ground_projection(&p, &u, &cfg).unwrap());
        let qs = coatom_decomposition(&p, &u, &cfg).unwrap();
        let meet_all = qs.iter().fold(Projection::identity(8), |a, q| meet(&a, q));
        assert_eq!(meet_all.support(), p.support());
        assert!(qs.iter().any(|q| q.support() == Some(&[2, 3, 4, 5, 6, 7][..])));
        assert!(qs.iter().any(|q| q.support() == Some(&[0, 1, 4, 5, 6, 7][..])));
        for q in &qs {
            assert!(is_coatom(q, &u, &cfg).unwrap());
        }
    }

    #[test]
    fn span_of_identity_is_a_chain() {
        let u = OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(3)], Engine::FloatHermitian, 1e-9).unwrap();
        let cfg = RunConfig::default().with_samples(20);
        let set = enumerate_coatoms(&u, &cfg).unwrap();
        assert_eq!(set.coatoms.len(), 1);
        assert!(set.coatoms[0].is_zero());
        let l = build_lattice(&u, &cfg).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.hasse_edges, vec![(0, 1)]);
    }

    #[test]
    fn m3_memberships() {
        let u = m3();
        let cfg = RunConfig::default();
        for sign in [1.0, -1.0] {
            assert!(approx_eq_tol(&q_max(&p_pm(sign), &u, &cfg).unwrap(), &p_pm(sign)));
            assert!(is_coatom(&p_pm(sign), &u, &cfg).unwrap());
        }
        let corner = Projection::from_support(3, [2]).unwrap();
        assert!(is_ground_projection(&corner, &u, &cfg).unwrap());
        assert!(!is_coatom(&corner, &u, &cfg).unwrap());
        assert!(q_max(&Projection::zero(3), &u, &cfg).unwrap().is_zero());
        assert!(is_ground_projection(&Projection::identity(3), &u, &cfg).unwrap());
        let qs = coatom_decomposition(&corner, &u, &cfg).unwrap();
        assert_eq!(qs.len(), 2);
        for sign in [1.0, -1.0] {
            assert!(qs.iter().any(|q| approx_eq_tol(q, &p_pm(sign))));
        }
        assert!(coatom_decomposition(&Projection::identity(3), &u, &cfg).unwrap().is_empty());
    }

    fn approx_eq_tol(a: &Projection, b: &Projection) -> bool {
        a.approx_eq(b, 1e-6)
    }

    #[test]
    fn m3_sampled_lattice_contains_the_corner() {
        let u = m3();
        let cfg = RunConfig::default().with_samples(300);
        let set = enumerate_coatoms(&u, &cfg).unwrap();
        assert_eq!(set.completeness, Completeness::Sampled);
        for sign in [1.0, -1.0] {
            assert!(set.coatoms.iter().any(|q| approx_eq_tol(q, &p_pm(sign))));
        }
        assert!(set.coatoms.iter().filter(|q| q.rank() == 1).count() > 10);
        let l = GroundLattice::from_coatoms(u, set.coatoms, set.completeness, 100_000).unwrap();
        let corner = Projection::from_support(3, [2]).unwrap();
        let i = l.find(&corner).expect("0 ⊕ 1 is the meet of p₊ and p₋");
        assert!(l.hasse_edges.iter().filter(|&&(a, _)| a == i).count() == 2);
        assert!(l.to_dot().starts_with("digraph"));
    }

    #[test]
    fn budget_is_enforced() {
        let u = three_bit();
        let cfg = RunConfig { max_nodes: 50, ..RunConfig::default() };
        match build_lattice(&u, &cfg) {
            Err(Error::BudgetExceeded { budget, partial }) => {
                assert_eq!(budget, 50);
                assert!(partial.nodes.len() <= 51);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_names_are_big_endian() {
        assert_eq!(config_name(6, Some(&[2, 2, 2])), "110");
        assert_eq!(config_name(5, Some(&[3, 2])), "21");
        assert_eq!(config_name(5, None), "5");
    }
}
