//! Exact log canonical thresholds and alpha-invariants on smooth complete
//! toric manifolds, computed from fan and polytope data.
//!
//! Every quantity is an exact rational. The layers, bottom up:
//!
//! - [`exact`]: rationals, integer/rational matrices, elimination.
//! - [`lp`]: a small exact simplex solver with dual certificates.
//! - [`polytope`]: H/V polytopes, vertex enumeration, volumes.
//! - [`fan`]: fans, their axioms, smoothness and completeness.
//! - [`divisor`]: invariant divisors, support functions, positivity.
//! - [`symmetry`]: fan automorphisms, fixed characters and fixed polytopes.
//! - [`invariant`]: thresholds of invariant metrics and alpha-invariants.

pub mod catalog;
pub mod divisor;
pub mod error;
pub mod exact;
pub mod fan;
pub mod invariant;
pub mod lp;
pub mod polytope;
pub mod symmetry;

pub use error::{Error, ErrorKind, Result};

/// Size caps for the combinatorial routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_dimension: usize,
    pub max_rays: usize,
    /// Inequalities accepted by vertex enumeration.
    pub max_inequalities: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dimension: 6,
            max_rays: 32,
            max_inequalities: 32,
        }
    }
}
