//! Ground projections of real vector spaces `U` of hermitian matrices.
//!
//! For `id ∈ U` the ground projections `p₀(u)`, `u ∈ U`, together with `0`
//! form a lattice `𝒫(U)` whose infimum is image intersection. This crate
//! decides membership through the variation principle `p ∈ 𝒫(U) ⇔ q_max(p) = p`,
//! where `q_max(p)` is the kernel of a maximal-rank element of the cone
//! `K(p) = {u ∈ U : u ⪰ 0, p u = 0}`; finds coatoms (exactly those `p` with
//! `K(p)` a ray); writes members as intersections of coatoms; and builds the
//! lattice from the top down.
//!
//! Two engines are available. The exact engine handles commutative subspaces
//! (functions on a finite set with rational values) by linear programming and
//! double description. The float engine handles arbitrary hermitian subspaces
//! with a Jacobi eigensolver and a small interior-point method.
//!
//! ```
//! use groundspace::{fixtures, is_coatom, RunConfig};
//!
//! let u = fixtures::m3_subspace();
//! let cfg = RunConfig::default();
//! assert!(is_coatom(&fixtures::m3_p_pm(1.0), &u, &cfg).unwrap());
//! assert!(!is_coatom(&fixtures::m3_corner(), &u, &cfg).unwrap());
//! ```

pub mod cli;
pub mod cone;
pub mod config;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod manybody;
pub mod subspace;

pub use cone::{analyze_cone, extreme_rays, relative_interior_point, ConeDescriptor};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use lattice::{
    build_lattice, coatom_decomposition, enumerate_coatoms, is_coatom, is_ground_projection, q_max, CoatomSet,
    Completeness, GroundLattice,
};
pub use linalg::{eig_herm, ground_projection, image_intersection, loewner_leq, HermitianMatrix, Projection};
pub use manybody::{build_klocal, marginal_map, partial_trace, MarginalTuple, SiteSet, SiteSystem};
pub use subspace::{Engine, LinearSection, OperatorSubspace};
