//! Exact rational and integer arithmetic.
//!
//! Nothing in this crate uses floating point; every coordinate, coefficient
//! and threshold is a [`Rat`] in lowest terms.

pub mod int_serde;
mod linalg;
mod matrix;
mod rat;

pub use linalg::{determinant, inverse, minor_gcd, rank, rational_kernel, rref, solve_linear};
pub use matrix::{
    add_vec, dot, scale_vec, sub_vec, to_rat_vec, IntMatrix, IntVector, Matrix, RatMatrix,
    RatVector,
};
pub use rat::Rat;
