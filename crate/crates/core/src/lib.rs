//! Solver for the truncated matrix trigonometric moment problem: given
//! complex N×N matrices S_0..S_d, find the non-decreasing matrix-valued
//! functions M on [0, 2π] with ∫e^{int} dM = S_n for n ≤ d.
//!
//! The pipeline decides solvability (positive semidefiniteness of the
//! block Toeplitz Gram matrix), decides whether the solution is unique,
//! computes the unique solution when it is, and otherwise produces the
//! linear fractional parametrization of all solutions, evaluated for
//! user-supplied contractive matrix parameters and verified against the
//! input moments.

pub mod determinacy;
pub mod error;
pub mod gram_space;
pub mod io;
pub mod lft;
pub mod linalg;
pub mod measures;
pub mod moments;
pub mod pipeline;
pub mod poly;
pub mod rng;

pub use error::{Error, Result};
