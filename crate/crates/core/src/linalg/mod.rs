//! Dense hermitian linear algebra: Jacobi eigensolver, one-sided Jacobi SVD,
//! and orthogonal projections ordered by image inclusion.

mod eig;
mod matrix;
mod projection;
mod svd;

pub use eig::{eig_herm, min_eigenvalue, EigDecomposition};
pub use matrix::{CMat, HermitianMatrix};
pub use projection::{
    approx_eq, ground_projection, image_intersection, kernel_projection, loewner_leq, Projection,
};
pub use svd::{null_space, range_basis, rank, svd_jacobi, JacobiSvd};

pub(crate) use matrix::{cholesky, inverse_hpd, lower_solve, solve_spd};
pub(crate) use svd::real_null_space;
