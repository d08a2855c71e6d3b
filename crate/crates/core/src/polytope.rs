//! Exact rational polytopes in H- and V-representation.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    add_vec, dot, rank, scale_vec, solve_linear, sub_vec, to_rat_vec, IntMatrix, IntVector, Rat,
    RatMatrix, RatVector,
};
use crate::lp::LinearProgram;
use crate::Limits;

/// The half-space `⟨normal, m⟩ ≥ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "crate::exact::int_serde::int_vector")]
    pub normal: IntVector,
    pub offset: Rat,
}

impl Inequality {
    pub fn new(normal: IntVector, offset: Rat) -> Self {
        Inequality { normal, offset }
    }

    pub fn slack(&self, m: &[Rat]) -> Rat {
        let lhs: Rat = self.normal.iter().zip(m).map(|(a, x)| Rat::from(a) * x).sum();
        lhs - &self.offset
    }
}

/// Polytope given by inequalities; vertices are enumerated on first use and
/// cached.
#[derive(Debug)]
pub struct RationalPolytope {
    dimension: usize,
    inequalities: Vec<Inequality>,
    normals: Vec<RatVector>,
    limits: Limits,
    vertices: OnceLock<Vec<RatVector>>,
}

impl Clone for RationalPolytope {
    fn clone(&self) -> Self {
        let vertices = OnceLock::new();
        if let Some(v) = self.vertices.get() {
            let _ = vertices.set(v.clone());
        }
        RationalPolytope {
            dimension: self.dimension,
            inequalities: self.inequalities.clone(),
            normals: self.normals.clone(),
            limits: self.limits,
            vertices,
        }
    }
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.inequalities == other.inequalities
    }
}

#[derive(Serialize, Deserialize)]
struct HRepDocument {
    inequalities: Vec<Inequality>,
}

impl RationalPolytope {
    pub fn new(dimension: usize, inequalities: Vec<(IntVector, Rat)>) -> Result<Self> {
        let inequalities = inequalities
            .into_iter()
            .map(|(normal, offset)| Inequality { normal, offset })
            .collect();
        Self::from_inequalities(dimension, inequalities)
    }

    pub fn from_inequalities(dimension: usize, inequalities: Vec<Inequality>) -> Result<Self> {
        for ineq in &inequalities {
            if ineq.normal.len() != dimension {
                return Err(Error::DimensionMismatch {
                    context: "inequality normal",
                    expected: dimension,
                    found: ineq.normal.len(),
                });
            }
        }
        let normals = inequalities.iter().map(|i| to_rat_vec(&i.normal)).collect();
        Ok(RationalPolytope {
            dimension,
            inequalities,
            normals,
            limits: Limits::default(),
            vertices: OnceLock::new(),
        })
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    /// Parses `{"inequalities": [{"normal": [1,0], "offset": "0"}, ...]}`.
    pub fn from_json(dimension: usize, json: &str) -> Result<Self> {
        let doc: HRepDocument =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_inequalities(dimension, doc.inequalities)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "inequalities": self.inequalities })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn contains(&self, m: &[Rat], strict: bool) -> bool {
        debug_assert_eq!(m.len(), self.dimension);
        self.inequalities.iter().zip(&self.normals).all(|(ineq, u)| {
            let lhs = dot(u, m);
            if strict {
                lhs > ineq.offset
            } else {
                lhs >= ineq.offset
            }
        })
    }

    /// Indices of inequalities satisfied with equality at `m`.
    pub fn tight_at(&self, m: &[Rat]) -> Vec<usize> {
        self.inequalities
            .iter()
            .zip(&self.normals)
            .enumerate()
            .filter(|(_, (ineq, u))| dot(u, m) == ineq.offset)
            .map(|(i, _)| i)
            .collect()
    }

    /// Exact vertex set, deduplicated and sorted lexicographically.
    ///
    /// Every `n`-subset of inequalities with independent normals is solved and
    /// kept when feasible. Unbounded input is rejected; an empty feasible set
    /// yields an empty list.
    pub fn vertices(&self) -> Result<&[RatVector]> {
        if let Some(v) = self.vertices.get() {
            return Ok(v);
        }
        let computed = self.enumerate_vertices()?;
        Ok(self.vertices.get_or_init(|| computed))
    }

    fn enumerate_vertices(&self) -> Result<Vec<RatVector>> {
        let n = self.dimension;
        if n > self.limits.max_dimension {
            return Err(Error::Capacity {
                what: "polytope dimension",
                limit: self.limits.max_dimension,
                requested: n,
            });
        }
        if self.inequalities.len() > self.limits.max_inequalities {
            return Err(Error::Capacity {
                what: "inequality count",
                limit: self.limits.max_inequalities,
                requested: self.inequalities.len(),
            });
        }
        if n == 0 {
            let origin = Vec::new();
            return Ok(if self.contains(&origin, false) {
                vec![origin]
            } else {
                Vec::new()
            });
        }
        let mut found = BTreeSet::new();
        for subset in (0..self.inequalities.len()).combinations(n) {
            let rows: Vec<RatVector> = subset.iter().map(|&i| self.normals[i].clone()).collect();
            let a = RatMatrix::from_rows(&rows, n);
            let b: RatVector = subset
                .iter()
                .map(|&i| self.inequalities[i].offset.clone())
                .collect();
            if let Some(x) = solve_linear(&a, &b)? {
                if self.contains(&x, false) {
                    found.insert(x);
                }
            }
        }
        if self.has_nonzero_recession()? && (!found.is_empty() || self.is_feasible()?) {
            return Err(Error::Unbounded);
        }
        Ok(found.into_iter().collect())
    }

    /// Whether `{d : ⟨normal, d⟩ ≥ 0 for all}` contains a nonzero direction.
    fn has_nonzero_recession(&self) -> Result<bool> {
        let n = self.dimension;
        for j in 0..n {
            for sign in [1i64, -1] {
                let mut lp = LinearProgram::new(n);
                for k in 0..n {
                    lp.set_free(k);
                }
                let mut objective = vec![Rat::zero(); n];
                objective[j] = Rat::from(-sign);
                lp.minimize(objective);
                for u in &self.normals {
                    lp.ge(u.clone(), Rat::zero());
                }
                for k in 0..n {
                    let mut e = vec![Rat::zero(); n];
                    e[k] = Rat::one();
                    lp.le(e.clone(), Rat::one());
                    lp.ge(e, -Rat::one());
                }
                let sol = lp.solve()?;
                if sol.optimum().is_some_and(|o| o.value.is_negative()) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn is_feasible(&self) -> Result<bool> {
        let n = self.dimension;
        let mut lp = LinearProgram::new(n);
        for k in 0..n {
            lp.set_free(k);
        }
        for (u, ineq) in self.normals.iter().zip(&self.inequalities) {
            lp.ge(u.clone(), ineq.offset.clone());
        }
        Ok(lp.solve()?.is_feasible())
    }

    /// Restricts to the linear subspace spanned by `basis`, in coordinates
    /// `s` with `m = Σ sₖ·basisₖ`.
    pub fn intersect_with_subspace(&self, basis: &[RatVector]) -> Result<SubspaceSlice> {
        for b in basis {
            if b.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    context: "subspace basis vector",
                    expected: self.dimension,
                    found: b.len(),
                });
            }
        }
        if !basis.is_empty() && rank(&RatMatrix::from_rows(basis, self.dimension)) < basis.len() {
            return Err(Error::RankDeficient("subspace basis"));
        }
        let k = basis.len();
        let inequalities = self
            .inequalities
            .iter()
            .zip(&self.normals)
            .map(|(ineq, u)| {
                let coeffs: RatVector = basis.iter().map(|b| dot(b, u)).collect();
                let scale = coeffs
                    .iter()
                    .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                let scale_rat = Rat::from(&scale);
                let normal = coeffs
                    .iter()
                    .map(|c| (c * &scale_rat).to_integer().expect("denominators cleared"))
                    .collect();
                Inequality::new(normal, &ineq.offset * &scale_rat)
            })
            .collect();
        let polytope = RationalPolytope::from_inequalities(k, inequalities)?.with_limits(self.limits);
        Ok(SubspaceSlice {
            ambient_dimension: self.dimension,
            basis: basis.to_vec(),
            polytope,
        })
    }

    /// Euclidean volume and barycenter, triangulating from the
    /// lexicographically first vertex.
    pub fn volume_and_barycenter(&self) -> Result<(Rat, RatVector)> {
        self.volume_and_barycenter_from(0)
    }

    /// As [`Self::volume_and_barycenter`], coning from vertex `apex` at the
    /// top level. The result does not depend on the choice.
    pub fn volume_and_barycenter_from(&self, apex: usize) -> Result<(Rat, RatVector)> {
        let vertices = self.vertices()?;
        let simplices = self.triangulate_from(apex)?;
        let n = self.dimension;
        let factorial: BigInt = (1..=n).map(BigInt::from).product();
        let factorial = Rat::from(factorial);
        let mut volume = Rat::zero();
        let mut moment = vec![Rat::zero(); n];
        for simplex in &simplices {
            let base = &vertices[simplex[0]];
            let edges: Vec<RatVector> = simplex[1..]
                .iter()
                .map(|&i| sub_vec(&vertices[i], base))
                .collect();
            let det = rational_determinant(&RatMatrix::from_rows(&edges, n));
            let vol = det.abs() / &factorial;
            let mut centroid = vec![Rat::zero(); n];
            for &i in simplex {
                centroid = add_vec(&centroid, &vertices[i]);
            }
            let centroid = scale_vec(&Rat::new(1, n as i64 + 1), &centroid);
            moment = add_vec(&moment, &scale_vec(&vol, &centroid));
            volume += &vol;
        }
        let barycenter = scale_vec(&volume.recip(), &moment);
        Ok((volume, barycenter))
    }

    /// Triangulation into full-dimensional simplices, each given by vertex
    /// indices into [`Self::vertices`].
    pub fn triangulate_from(&self, apex: usize) -> Result<Vec<Vec<usize>>> {
        let vertices = self.vertices()?;
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let intrinsic = affine_dimension(vertices);
        if intrinsic < self.dimension {
            return Err(Error::LowerDimensional { intrinsic });
        }
        assert!(apex < vertices.len(), "apex index out of range");
        let tight: Vec<Vec<usize>> = self
            .inequalities
            .iter()
            .zip(&self.normals)
            .map(|(ineq, u)| {
                (0..vertices.len())
                    .filter(|&v| dot(u, &vertices[v]) == ineq.offset)
                    .collect()
            })
            .collect();
        let all: Vec<usize> = (0..vertices.len()).collect();
        Ok(cone_over_facets(vertices, &tight, &all, self.dimension, apex))
    }
}

/// Triangulates `face` (of affine dimension `dim`) by coning from `apex`
/// over the facets of `face` that miss it; facets recurse from their first
/// vertex.
fn cone_over_facets(
    vertices: &[RatVector],
    tight: &[Vec<usize>],
    face: &[usize],
    dim: usize,
    apex: usize,
) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let mut facets = BTreeSet::new();
    for t in tight {
        let sub: Vec<usize> = face.iter().copied().filter(|v| t.contains(v)).collect();
        if sub.is_empty() || sub.contains(&apex) {
            continue;
        }
        let pts: Vec<RatVector> = sub.iter().map(|&i| vertices[i].clone()).collect();
        if affine_dimension(&pts) == dim - 1 {
            facets.insert(sub);
        }
    }
    let mut simplices = Vec::new();
    for facet in facets {
        for mut simplex in cone_over_facets(vertices, tight, &facet, dim - 1, facet[0]) {
            simplex.insert(0, apex);
            simplices.push(simplex);
        }
    }
    simplices
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dimension(points: &[RatVector]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    if points.len() == 1 {
        return 0;
    }
    let diffs: Vec<RatVector> = points[1..].iter().map(|p| sub_vec(p, first)).collect();
    rank(&RatMatrix::from_rows(&diffs, first.len()))
}

fn rational_determinant(a: &RatMatrix) -> Rat {
    // Clear denominators row by row, then use the integer routine.
    let n = a.rows();
    let mut scale = Rat::one();
    let int = IntMatrix::from_fn(n, n, |_, _| BigInt::one());
    let mut int = int;
    for i in 0..n {
        let l = a.row(i).iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let lr = Rat::from(&l);
        for j in 0..n {
            int[(i, j)] = (&a[(i, j)] * &lr).to_integer().expect("denominators cleared");
        }
        scale = scale * lr;
    }
    let det = crate::exact::determinant(&int).expect("square matrix");
    Rat::from(det) / scale
}

/// A polytope restricted to a linear subspace, with the basis used for the
/// substitution.
#[derive(Clone, Debug)]
pub struct SubspaceSlice {
    ambient_dimension: usize,
    basis: Vec<RatVector>,
    polytope: RationalPolytope,
}

impl SubspaceSlice {
    pub fn polytope(&self) -> &RationalPolytope {
        &self.polytope
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    pub fn lift(&self, s: &[Rat]) -> RatVector {
        let mut m = vec![Rat::zero(); self.ambient_dimension];
        for (b, c) in self.basis.iter().zip(s) {
            m = add_vec(&m, &scale_vec(c, b));
        }
        m
    }

    /// Subspace coordinates of `m`, or `None` when `m` is not in the span.
    pub fn coordinates_of(&self, m: &[Rat]) -> Option<RatVector> {
        let k = self.basis.len();
        if k == 0 {
            return m.iter().all(Rat::is_zero).then(Vec::new);
        }
        let b = RatMatrix::from_columns(&self.basis, self.ambient_dimension);
        let bt = b.transpose();
        let gram = bt.mul(&b);
        let s = solve_linear(&gram, &bt.mul_vec(m)).ok()??;
        (b.mul_vec(&s) == m).then_some(s)
    }

    /// Vertices of the slice in ambient coordinates, sorted.
    pub fn ambient_vertices(&self) -> Result<Vec<RatVector>> {
        let mut out: Vec<RatVector> = self
            .polytope
            .vertices()?
            .iter()
            .map(|s| self.lift(s))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Convex hull of a nonempty finite point set, kept as a point list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    points: Vec<RatVector>,
}

impl VPolytope {
    /// Deduplicates and sorts the points.
    pub fn new(mut points: Vec<RatVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyBody);
        };
        let n = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "V-polytope point",
                expected: n,
                found: bad.len(),
            });
        }
        points.sort();
        points.dedup();
        Ok(VPolytope { points })
    }

    pub fn points(&self) -> &[RatVector] {
        &self.points
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    /// Membership in the convex hull, by LP feasibility of the convex
    /// combination.
    pub fn contains(&self, m: &[Rat]) -> Result<bool> {
        let k = self.points.len();
        let mut lp = LinearProgram::new(k);
        lp.eq(vec![Rat::one(); k], Rat::one());
        for (j, target) in m.iter().enumerate() {
            let row = self.points.iter().map(|p| p[j].clone()).collect();
            lp.eq(row, target.clone());
        }
        Ok(lp.solve()?.is_feasible())
    }
}
