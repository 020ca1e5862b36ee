//! Exact rational arithmetic for the commutative engine.

pub mod dd;
pub mod linalg;
pub mod simplex;

pub use linalg::{q, q_frac, Q};
