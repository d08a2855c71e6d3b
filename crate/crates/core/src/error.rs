use num_bigint::BigInt;
use thiserror::Error;

use crate::fan::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    /// The fan or group fails a structural requirement.
    Invalid,
    /// A point, body or divisor lies outside the domain of an operation.
    Domain,
    /// The divisor is not invariant under the requested group.
    Invariance,
    Capacity,
    /// An internal cross-check between two independent routes disagreed.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("rank deficient input ({0})")]
    RankDeficient(&'static str),

    #[error("capacity exceeded: {what} is {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("invalid fan: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidFan(Vec<Diagnostic>),

    #[error("fan is not smooth: cone {cone} has determinant {determinant}")]
    NotSmooth { cone: usize, determinant: BigInt },

    #[error("fan is not complete")]
    NotComplete,

    #[error("divisor is not nef: cone {cone}, ray {ray}")]
    NotNef { cone: usize, ray: usize },

    #[error("divisor is not big")]
    NotBig,

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polytope is lower-dimensional (intrinsic dimension {intrinsic})")]
    LowerDimensional { intrinsic: usize },

    #[error("point {point} lies outside the polytope")]
    PointOutside { point: String },

    #[error("the origin has no antipodal boundary point")]
    ZeroPoint,

    #[error("Newton body is empty")]
    EmptyBody,

    #[error("section level must be at least 1")]
    InvalidLevel,

    #[error("invalid group element {index}: {reason}")]
    InvalidAutomorphism { index: usize, reason: String },

    #[error("divisor is not invariant: ray {ray} maps to ray {image} with a different coefficient")]
    NotInvariant { ray: usize, image: usize },

    #[error("the polytope contains no invariant points")]
    NoInvariantPoints,

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::Capacity { .. } => ErrorKind::Capacity,
            Error::InvalidFan(_)
            | Error::NotSmooth { .. }
            | Error::NotComplete
            | Error::InvalidAutomorphism { .. }
            | Error::DimensionMismatch { .. }
            | Error::RankDeficient(_) => ErrorKind::Invalid,
            Error::NotNef { .. }
            | Error::NotBig
            | Error::Unbounded
            | Error::EmptyPolytope
            | Error::LowerDimensional { .. }
            | Error::PointOutside { .. }
            | Error::ZeroPoint
            | Error::EmptyBody
            | Error::InvalidLevel => ErrorKind::Domain,
            Error::NotInvariant { .. } | Error::NoInvariantPoints => ErrorKind::Invariance,
            Error::CrossCheck(_) => ErrorKind::Internal,
        }
    }
}
