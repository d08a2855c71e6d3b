//! Fans of smooth complete toric manifolds.
//!
//! Only simplicial fans whose maximal cones are full-dimensional are
//! representable. Faces are never materialized: a cone is a sorted set of
//! ray indices contained in some maximal cone.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{determinant, rank, solve_linear, to_rat_vec, IntMatrix, IntVector, Rat, RatMatrix, RatVector};
use crate::lp::LinearProgram;
use crate::Limits;

/// One violated fan axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Diagnostic {
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { ray: usize, duplicate_of: usize },
    ConeSize { cone: usize, size: usize, expected: usize },
    DependentCone { cone: usize },
    RepeatedCone { cone: usize, duplicate_of: usize },
    BadIntersection { cones: (usize, usize) },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Diagnostic::NonPrimitiveRay { ray } => write!(f, "ray {ray} not primitive"),
            Diagnostic::DuplicateRay { ray, duplicate_of } => {
                write!(f, "ray {ray} duplicates ray {duplicate_of}")
            }
            Diagnostic::ConeSize {
                cone,
                size,
                expected,
            } => write!(f, "cone {cone} has {size} rays, expected {expected}"),
            Diagnostic::DependentCone { cone } => {
                write!(f, "cone {cone} rays are linearly dependent")
            }
            Diagnostic::RepeatedCone { cone, duplicate_of } => {
                write!(f, "cone {cone} repeats cone {duplicate_of}")
            }
            Diagnostic::BadIntersection { cones: (a, b) } => {
                write!(f, "cones {a} and {b} do not meet in a common face")
            }
        }
    }
}

/// Outcome of the smoothness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Singular { cone: usize, determinant: BigInt },
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth)
    }
}

#[derive(Clone, Debug)]
struct Status {
    diagnostics: Vec<Diagnostic>,
    smoothness: Smoothness,
    complete: bool,
}

/// On-disk form: `{"dimension": 2, "rays": [[1,0],...], "max_cones": [[0,1],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanDocument {
    pub dimension: usize,
    #[serde(with = "crate::exact::int_serde::int_vectors")]
    pub rays: Vec<IntVector>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Debug)]
pub struct Fan {
    dimension: usize,
    rays: Vec<IntVector>,
    rat_rays: Vec<RatVector>,
    max_cones: Vec<Vec<usize>>,
    limits: Limits,
    status: OnceLock<Status>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            dimension: self.dimension,
            rays: self.rays.clone(),
            rat_rays: self.rat_rays.clone(),
            max_cones: self.max_cones.clone(),
            limits: self.limits,
            status: OnceLock::new(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.rays == other.rays
            && self.max_cones == other.max_cones
    }
}

impl Fan {
    pub fn new(dimension: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        Fan::with_limits(dimension, rays, max_cones, Limits::default())
    }

    /// Builds a fan after structural checks (lengths, index ranges, caps).
    /// The fan axioms themselves are checked by [`Fan::validate`].
    pub fn with_limits(
        dimension: usize,
        rays: Vec<IntVector>,
        max_cones: Vec<Vec<usize>>,
        limits: Limits,
    ) -> Result<Fan> {
        if dimension == 0 {
            return Err(Error::DimensionMismatch {
                context: "fan dimension must be positive",
                expected: 1,
                found: 0,
            });
        }
        if dimension > limits.max_dimension {
            return Err(Error::Capacity {
                what: "fan dimension",
                limit: limits.max_dimension,
                requested: dimension,
            });
        }
        if rays.len() > limits.max_rays {
            return Err(Error::Capacity {
                what: "ray count",
                limit: limits.max_rays,
                requested: rays.len(),
            });
        }
        for ray in &rays {
            if ray.len() != dimension {
                return Err(Error::DimensionMismatch {
                    context: "ray length",
                    expected: dimension,
                    found: ray.len(),
                });
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in max_cones {
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::Parse(format!(
                    "cone references ray {bad}, but the fan has {} rays",
                    rays.len()
                )));
            }
            let mut cone = cone;
            cone.sort_unstable();
            cones.push(cone);
        }
        let rat_rays = rays.iter().map(|r| to_rat_vec(r)).collect();
        Ok(Fan {
            dimension,
            rays,
            rat_rays,
            max_cones: cones,
            limits,
            status: OnceLock::new(),
        })
    }

    pub fn from_document(doc: &FanDocument, limits: Limits) -> Result<Fan> {
        Fan::with_limits(doc.dimension, doc.rays.clone(), doc.max_cones.clone(), limits)
    }

    pub fn to_document(&self) -> FanDocument {
        FanDocument {
            dimension: self.dimension,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
        }
    }

    pub fn from_json(json: &str) -> Result<Fan> {
        let doc: FanDocument = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Fan::from_document(&doc, Limits::default())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    /// Ray generators as rational vectors.
    pub fn rat_rays(&self) -> &[RatVector] {
        &self.rat_rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn ray_index(&self, v: &[BigInt]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    /// Integer matrix whose columns are the rays of maximal cone `cone`.
    pub fn cone_matrix(&self, cone: usize) -> IntMatrix {
        let cols: Vec<IntVector> = self.max_cones[cone].iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_columns(&cols, self.dimension)
    }

    fn status(&self) -> &Status {
        self.status.get_or_init(|| {
            let diagnostics = self.compute_diagnostics();
            let smoothness = self.compute_smoothness();
            let complete = diagnostics.is_empty() && self.compute_completeness();
            Status {
                diagnostics,
                smoothness,
                complete,
            }
        })
    }

    /// Checks the fan axioms; an empty list means the fan is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        self.status().diagnostics.clone()
    }

    pub fn is_valid(&self) -> bool {
        self.status().diagnostics.is_empty()
    }

    /// Every maximal cone has a unimodular ray matrix. Faces of unimodular
    /// cones are then unimodular as well.
    pub fn smoothness(&self) -> Smoothness {
        self.status().smoothness.clone()
    }

    pub fn is_smooth(&self) -> bool {
        self.smoothness().is_smooth()
    }

    /// Whether the support of the fan is all of `ℝⁿ`. Always false for an
    /// invalid fan.
    pub fn is_complete(&self) -> bool {
        self.status().complete
    }

    /// Validity, smoothness and completeness together, as an error naming the
    /// first failure.
    pub fn require_smooth_complete(&self) -> Result<()> {
        let status = self.status();
        if !status.diagnostics.is_empty() {
            return Err(Error::InvalidFan(status.diagnostics.clone()));
        }
        if let Smoothness::Singular { cone, determinant } = &status.smoothness {
            return Err(Error::NotSmooth {
                cone: *cone,
                determinant: determinant.clone(),
            });
        }
        if !status.complete {
            return Err(Error::NotComplete);
        }
        Ok(())
    }

    fn compute_diagnostics(&self) -> Vec<Diagnostic> {
        let n = self.dimension;
        let mut out = Vec::new();
        for (i, ray) in self.rays.iter().enumerate() {
            let g = ray.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.is_zero() {
                out.push(Diagnostic::ZeroRay { ray: i });
            } else if !g.is_one() {
                out.push(Diagnostic::NonPrimitiveRay { ray: i });
            }
            if let Some(j) = self.rays[..i].iter().position(|r| r == ray) {
                out.push(Diagnostic::DuplicateRay {
                    ray: i,
                    duplicate_of: j,
                });
            }
        }
        let mut independent = vec![false; self.max_cones.len()];
        for (c, cone) in self.max_cones.iter().enumerate() {
            if let Some(d) = self.max_cones[..c].iter().position(|o| o == cone) {
                out.push(Diagnostic::RepeatedCone {
                    cone: c,
                    duplicate_of: d,
                });
                continue;
            }
            let distinct: BTreeSet<_> = cone.iter().collect();
            if cone.len() != n || distinct.len() != n {
                out.push(Diagnostic::ConeSize {
                    cone: c,
                    size: distinct.len(),
                    expected: n,
                });
                continue;
            }
            let m = RatMatrix::from_rows(
                &cone.iter().map(|&i| self.rat_rays[i].clone()).collect::<Vec<_>>(),
                n,
            );
            if rank(&m) < n {
                out.push(Diagnostic::DependentCone { cone: c });
            } else {
                independent[c] = true;
            }
        }
        if out.is_empty() {
            for (a, b) in (0..self.max_cones.len()).tuple_combinations() {
                if independent[a] && independent[b] && !self.meet_in_common_face(a, b) {
                    out.push(Diagnostic::BadIntersection { cones: (a, b) });
                }
            }
        }
        out
    }

    /// For simplicial full-dimensional cones, `σ ∩ τ` is the cone over their
    /// shared rays iff no common point has a positive coefficient on a ray of
    /// `σ` outside `τ`. Decided exactly by one LP.
    fn meet_in_common_face(&self, a: usize, b: usize) -> bool {
        let n = self.dimension;
        let (sa, sb) = (&self.max_cones[a], &self.max_cones[b]);
        // variables: λ (coefficients in σ_a), μ (coefficients in σ_b)
        let mut lp = LinearProgram::new(2 * n);
        for row in 0..n {
            let mut coeffs = vec![Rat::zero(); 2 * n];
            for (k, &ray) in sa.iter().enumerate() {
                coeffs[k] = self.rat_rays[ray][row].clone();
            }
            for (k, &ray) in sb.iter().enumerate() {
                coeffs[n + k] = -&self.rat_rays[ray][row];
            }
            lp.eq(coeffs, Rat::zero());
        }
        let mut total = vec![Rat::zero(); 2 * n];
        for t in total.iter_mut().take(n) {
            *t = Rat::one();
        }
        lp.le(total, Rat::one());
        let mut objective = vec![Rat::zero(); 2 * n];
        for (k, ray) in sa.iter().enumerate() {
            if !sb.contains(ray) {
                objective[k] = -Rat::one();
            }
        }
        lp.minimize(objective);
        match lp.solve() {
            Ok(sol) => sol.optimum().is_some_and(|o| o.value.is_zero()),
            Err(_) => false,
        }
    }

    fn compute_smoothness(&self) -> Smoothness {
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.len() != self.dimension {
                return Smoothness::Singular {
                    cone: c,
                    determinant: BigInt::zero(),
                };
            }
            let det = determinant(&self.cone_matrix(c)).expect("square cone matrix");
            if !det.abs().is_one() {
                return Smoothness::Singular {
                    cone: c,
                    determinant: det.abs(),
                };
            }
        }
        Smoothness::Smooth
    }

    /// Wall criterion: every codimension-one face lies in exactly two maximal
    /// cones and the wall-adjacency graph is connected. Valid for pure
    /// simplicial fans that already satisfy the intersection axiom.
    fn compute_completeness(&self) -> bool {
        let n = self.dimension;
        let cones = &self.max_cones;
        if cones.is_empty() {
            return false;
        }
        if n == 1 {
            let one = [BigInt::one()];
            let minus = [-BigInt::one()];
            return self.ray_index(&one).is_some() && self.ray_index(&minus).is_some();
        }
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (c, cone) in cones.iter().enumerate() {
            for wall in cone.iter().copied().combinations(n - 1) {
                walls.entry(wall).or_default().push(c);
            }
        }
        if walls.values().any(|owners| owners.len() != 2) {
            return false;
        }
        let mut adjacency = vec![Vec::new(); cones.len()];
        for owners in walls.values() {
            adjacency[owners[0]].push(owners[1]);
            adjacency[owners[1]].push(owners[0]);
        }
        let mut seen = vec![false; cones.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &adjacency[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First maximal cone (by index) containing `x`, with the nonnegative
    /// coefficients of `x` in that cone's ray basis (sorted ray order).
    pub fn cone_containing(&self, x: &[Rat]) -> Result<(usize, RatVector)> {
        self.require_smooth_complete()?;
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                context: "point dimension",
                expected: self.dimension,
                found: x.len(),
            });
        }
        for (c, cone) in self.max_cones.iter().enumerate() {
            let cols: Vec<RatVector> = cone.iter().map(|&i| self.rat_rays[i].clone()).collect();
            let a = RatMatrix::from_columns(&cols, self.dimension);
            if let Some(coeffs) = solve_linear(&a, x)? {
                if coeffs.iter().all(|c| !c.is_negative()) {
                    return Ok((c, coeffs));
                }
            }
        }
        Err(Error::CrossCheck(
            "complete fan does not cover a point".into(),
        ))
    }
}
