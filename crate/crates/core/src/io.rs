//! JSON documents for matrices, projections, subspaces, cones, lattices and
//! marginal tuples.
//!
//! Every document type parses and reserializes to the same text, so tools can
//! pipe the output of one command into another.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cone::{exact_rays, exact_witness, ConeDescriptor};
use crate::error::{Error, Result};
use crate::exact::linalg::Q;
use crate::lattice::{Completeness, GroundLattice};
use crate::linalg::{HermitianMatrix, Projection};
use crate::manybody::MarginalTuple;
use crate::subspace::{Engine, OperatorSubspace};

/// `{"n": int, "entries": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(a: &HermitianMatrix) -> Self {
        MatrixJson { n: a.n(), entries: a.entries().iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl MatrixJson {
    /// Rejects matrices that are not hermitian to within `1e-9` relative.
    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        let n = self.n;
        if self.entries.len() != n * n {
            return Err(Error::Parse(format!("entries: expected {} values for n = {n}, found {}", n * n, self.entries.len())));
        }
        let z: Vec<Complex64> = self.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let scale = z.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for i in 0..n {
            for j in 0..n {
                if (z[i * n + j] - z[j * n + i].conj()).norm() > 1e-9 * scale {
                    return Err(Error::Parse(format!("entries[{}]: matrix is not hermitian at ({i}, {j})", i * n + j)));
                }
            }
        }
        HermitianMatrix::new(n, z)
    }
}

/// Either `{"n": int, "support": [ints]}` or `{"n": int, "image_basis": [column, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_basis: Option<Vec<Vec<[f64; 2]>>>,
}

impl From<&Projection> for ProjectionJson {
    fn from(p: &Projection) -> Self {
        match crate::subspace::support_of(p) {
            Some(s) => ProjectionJson { n: Some(p.n()), support: Some(s), image_basis: None },
            None => ProjectionJson {
                n: Some(p.n()),
                support: None,
                image_basis: Some(p.basis().columns().iter().map(|c| c.iter().map(|z| [z.re, z.im]).collect()).collect()),
            },
        }
    }
}

impl ProjectionJson {
    /// `n` falls back to `ambient_n` when the document omits it.
    pub fn to_projection(&self, ambient_n: Option<usize>) -> Result<Projection> {
        let n = self.n.or(ambient_n).ok_or_else(|| Error::Parse("n: missing and not implied by a subspace".into()))?;
        if let (Some(m), Some(a)) = (self.n, ambient_n) {
            if m != a {
                return Err(Error::DimensionMismatch { expected: a, found: m });
            }
        }
        match (&self.support, &self.image_basis) {
            (Some(s), None) => {
                if let Some(&bad) = s.iter().find(|&&x| x >= n) {
                    return Err(Error::Parse(format!("support: index {bad} out of range for n = {n}")));
                }
                Projection::from_support(n, s.iter().copied())
            }
            (None, Some(cols)) => {
                if let Some(k) = cols.iter().position(|c| c.len() != n) {
                    return Err(Error::Parse(format!("image_basis[{k}]: expected {n} entries")));
                }
                let vs: Vec<Vec<Complex64>> =
                    cols.iter().map(|c| c.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()).collect();
                Projection::from_vectors(n, &vs, 1e-9)
            }
            _ => Err(Error::Parse("projection needs exactly one of support or image_basis".into())),
        }
    }
}

/// Float form `{"engine", "ambient_n", "basis": [matrix, ...]}` or exact form
/// `{"engine", "config_dims", "vectors": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<String>>>,
}

impl From<&OperatorSubspace> for SubspaceJson {
    fn from(u: &OperatorSubspace) -> Self {
        let config_dims = u.site_dims().map(<[usize]>::to_vec);
        match u.exact_basis() {
            Some(vs) => SubspaceJson {
                engine: Some(Engine::ExactCommutative),
                ambient_n: Some(u.ambient_n()),
                config_dims,
                basis: None,
                vectors: Some(vs.iter().map(|v| rationals_to_strings(v)).collect()),
            },
            None => SubspaceJson {
                engine: Some(Engine::FloatHermitian),
                ambient_n: Some(u.ambient_n()),
                config_dims,
                basis: Some(u.basis().iter().map(MatrixJson::from).collect()),
                vectors: None,
            },
        }
    }
}

impl SubspaceJson {
    pub fn to_subspace(&self) -> Result<OperatorSubspace> {
        let from_dims = self.config_dims.as_ref().map(|d| d.iter().product::<usize>());
        if let (Some(a), Some(b)) = (self.ambient_n, from_dims) {
            if a != b {
                return Err(Error::Parse(format!("config_dims: product {b} differs from ambient_n {a}")));
            }
        }
        let u = match (&self.vectors, &self.basis) {
            (Some(vs), None) => {
                if self.engine == Some(Engine::FloatHermitian) {
                    return Err(Error::Parse("engine: rational vectors need the exact-commutative engine".into()));
                }
                let n = self.ambient_n.or(from_dims).or(vs.first().map(Vec::len)).ok_or(Error::EmptySpanningSet)?;
                let parsed = vs
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.iter()
                            .enumerate()
                            .map(|(j, s)| parse_rational(s).map_err(|e| Error::Parse(format!("vectors[{i}][{j}]: {e}"))))
                            .collect::<Result<Vec<Q>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                OperatorSubspace::from_functions(n, &parsed)?
            }
            (None, Some(ms)) => {
                let mats = ms
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.to_matrix().map_err(|e| Error::Parse(format!("basis[{i}]: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let n = mats.first().map(HermitianMatrix::n).ok_or(Error::EmptySpanningSet)?;
                if let Some(k) = mats.iter().position(|m| m.n() != n) {
                    return Err(Error::Parse(format!("basis[{k}]: dimension differs from basis[0]")));
                }
                if let Some(a) = self.ambient_n.or(from_dims) {
                    if a != n {
                        return Err(Error::DimensionMismatch { expected: a, found: n });
                    }
                }
                OperatorSubspace::from_spanning_set(&mats, self.engine.unwrap_or(Engine::FloatHermitian), 1e-9)?
            }
            _ => return Err(Error::Parse("subspace needs exactly one of basis or vectors".into())),
        };
        Ok(match &self.config_dims {
            Some(d) => u.with_site_dims(d.clone()),
            None => u,
        })
    }
}

/// `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> std::result::Result<Q, String> {
    BigRational::from_str(s.trim()).map_err(|_| format!("cannot parse '{s}' as a rational number"))
}

pub fn rationals_to_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `{"dim_K", "is_ray", "witness", "extreme_rays", ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    #[serde(rename = "dim_K")]
    pub dim_k: usize,
    pub is_ray: bool,
    pub witness: Option<MatrixJson>,
    pub extreme_rays: Option<Vec<MatrixJson>>,
    pub q_max: ProjectionJson,
    pub engine: Engine,
    pub reduction_stages: usize,
    pub stalled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_rays: Option<Vec<Vec<String>>>,
}

impl From<&ConeDescriptor> for ConeJson {
    fn from(d: &ConeDescriptor) -> Self {
        let exact_rays = d.extreme_ray_generators.as_ref().and_then(|_| exact_rays(d));
        ConeJson {
            dim_k: d.dim_k,
            is_ray: d.is_ray,
            witness: d.interior_witness.as_ref().map(MatrixJson::from),
            extreme_rays: d.extreme_ray_generators.as_ref().map(|rs| rs.iter().map(MatrixJson::from).collect()),
            q_max: ProjectionJson::from(&d.q_max),
            engine: d.engine,
            reduction_stages: d.reduction_stages,
            stalled: d.stalled,
            exact_witness: exact_witness(d).map(|g| {
                let total = g.iter().fold(Q::from_integer(0.into()), |a, x| a + x);
                g.iter().map(|x| (x / &total).to_string()).collect()
            }),
            exact_rays: exact_rays.map(|rs| rs.iter().map(|r| rationals_to_strings(r)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeJson {
    pub id: usize,
    pub rank: usize,
    pub label: String,
    pub projection: ProjectionJson,
}

/// `{"completeness", "nodes": [{"id", "rank", "projection"}], "hasse": [[child, parent]], "coatoms": [ids]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub completeness: Completeness,
    pub ambient_n: usize,
    pub nodes: Vec<NodeJson>,
    pub hasse: Vec<[usize; 2]>,
    pub coatoms: Vec<usize>,
}

impl From<&GroundLattice> for LatticeJson {
    fn from(l: &GroundLattice) -> Self {
        LatticeJson {
            completeness: l.completeness,
            ambient_n: l.subspace.ambient_n(),
            nodes: l
                .nodes
                .iter()
                .enumerate()
                .map(|(i, p)| NodeJson { id: i, rank: p.rank(), label: l.label(i), projection: ProjectionJson::from(p) })
                .collect(),
            hasse: l.hasse_edges.iter().map(|&(a, b)| [a, b]).collect(),
            coatoms: l.coatoms.clone(),
        }
    }
}

/// One entry `{"nu": [sites], "matrix": ...}` of a marginal tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalEntryJson {
    pub nu: Vec<usize>,
    pub matrix: MatrixJson,
}

pub fn marginals_to_json(m: &MarginalTuple) -> Vec<MarginalEntryJson> {
    m.entries.iter().map(|(nu, a)| MarginalEntryJson { nu: nu.sites(), matrix: MatrixJson::from(a) }).collect()
}

/// Reads and parses a JSON document, naming the file in errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{m3_p_pm, m3_subspace, three_bit_subspace};

    fn round_trip<T: Serialize + DeserializeOwned>(value: &T) {
        let text = serde_json::to_string(value).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn subspace_documents_round_trip() {
        for u in [m3_subspace(), three_bit_subspace()] {
            let doc = SubspaceJson::from(&u);
            round_trip(&doc);
            let back = doc.to_subspace().unwrap();
            assert_eq!(back.dim(), u.dim());
            assert_eq!(back.engine(), u.engine());
            assert_eq!(back.contains_identity(), u.contains_identity());
        }
    }

    #[test]
    fn projection_documents() {
        let p = m3_p_pm(1.0);
        let doc = ProjectionJson::from(&p);
        round_trip(&doc);
        assert!(doc.to_projection(None).unwrap().approx_eq(&p, 1e-12));
        let s: ProjectionJson = serde_json::from_str(r#"{"support": [0, 2]}"#).unwrap();
        assert_eq!(s.to_projection(Some(3)).unwrap().support(), Some(&[0, 2][..]));
        assert!(s.to_projection(None).is_err());
        let bad: ProjectionJson = serde_json::from_str(r#"{"support": [5]}"#).unwrap();
        assert!(bad.to_projection(Some(3)).is_err());
        assert!(serde_json::from_str::<ProjectionJson>(r#"{"suport": [1]}"#).is_err());
    }

    #[test]
    fn non_hermitian_matrix_is_rejected() {
        let m: MatrixJson = serde_json::from_str(r#"{"n": 2, "entries": [[0,0],[1,0],[2,0],[0,0]]}"#).unwrap();
        let err = m.to_matrix().unwrap_err().to_string();
        assert!(err.contains("not hermitian"), "{err}");
    }

    #[test]
    fn rational_vectors_parse() {
        let doc: SubspaceJson =
            serde_json::from_str(r#"{"config_dims": [2], "vectors": [["1", "1"], ["1/2", "-1/2"]]}"#).unwrap();
        let u = doc.to_subspace().unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.contains_identity());
        let bad: SubspaceJson = serde_json::from_str(r#"{"vectors": [["1", "x"]]}"#).unwrap();
        assert!(bad.to_subspace().unwrap_err().to_string().contains("vectors[0][1]"));
    }
}
