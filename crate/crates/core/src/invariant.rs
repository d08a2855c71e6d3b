//! Log canonical thresholds of torus-invariant metrics and alpha-invariants.
//!
//! For a nef and big divisor `D` with polytope `P` and anticanonical
//! polytope `Q = {m : ⟨m, uᵨ⟩ ≥ -1}`, a metric whose Newton body is `B ⊂ P`
//! has threshold
//!
//! ```text
//! lct = sup { c > 0 : c·P ⊂ Int(c·B + Q) }.
//! ```
//!
//! When `B = {p}` the containment reads `c·⟨p - v, uᵨ⟩ < 1` over the
//! vertices `v` of `P`, giving `1 / max_{v,ρ} ⟨p - v, uᵨ⟩`; since the facets
//! of a nef polytope are tight this also equals `1 / max_ρ (⟨p, uᵨ⟩ + aᵨ)`.
//! Both routes are evaluated on every call and must agree.
//!
//! The alpha-invariant is the infimum of the point threshold over the
//! rational group-fixed points of `P`. The reciprocal `p ↦ max_ρ(⟨p,uᵨ⟩+aᵨ)`
//! is a maximum of affine functions, hence convex, so its maximum over the
//! fixed polytope sits at a vertex; the vertices are rational and the
//! threshold is continuous, so the infimum over rational points is the
//! minimum over those vertices.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::divisor::ToricDivisor;
use crate::error::{Error, Result};
use crate::exact::{dot, scale_vec, sub_vec, to_rat_vec, IntVector, Rat, RatVector};
use crate::fan::Fan;
use crate::lp::LinearProgram;
use crate::polytope::{RationalPolytope, VPolytope};
use crate::symmetry::SymmetryGroup;

/// A vertex of `P` and a ray at which the threshold is attained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub vertex: RatVector,
    pub ray: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LctValue {
    Finite { value: Rat, witness: Witness },
    /// No containment constraint binds; the metric is locally bounded.
    Infinite,
}

impl LctValue {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LctValue::Finite { value, .. } => Some(value),
            LctValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LctValue::Infinite)
    }

    /// Orders by value, with `+∞` above every finite value.
    pub fn cmp_value(&self, other: &LctValue) -> Ordering {
        match (self.value(), other.value()) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl std::fmt::Display for LctValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LctValue::Finite { value, .. } => write!(f, "{value}"),
            LctValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for LctValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LctValue::Finite { value, witness } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("lct", value)?;
                map.serialize_entry("witness", witness)?;
                map.end()
            }
            LctValue::Infinite => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("lct", "inf")?;
                map.end()
            }
        }
    }
}

/// Newton body of an invariant metric, kept as a point list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct NewtonBody(VPolytope);

impl NewtonBody {
    pub fn new(points: Vec<RatVector>) -> Result<Self> {
        VPolytope::new(points).map(NewtonBody)
    }

    pub fn singleton(p: RatVector) -> Self {
        NewtonBody(VPolytope::new(vec![p]).expect("one point"))
    }

    pub fn points(&self) -> &[RatVector] {
        self.0.points()
    }

    pub fn as_vpolytope(&self) -> &VPolytope {
        &self.0
    }
}

/// Body `conv{pⱼ / level}` of the metric defined by the sections with
/// exponents `pⱼ` in `level·P`.
pub fn newton_body_of_sections(
    points: &[IntVector],
    level: u32,
    divisor: Option<&ToricDivisor>,
) -> Result<NewtonBody> {
    if level == 0 {
        return Err(Error::InvalidLevel);
    }
    if points.is_empty() {
        return Err(Error::EmptyBody);
    }
    let scale = Rat::new(1, level);
    let scaled: Vec<RatVector> = points
        .iter()
        .map(|p| scale_vec(&scale, &to_rat_vec(p)))
        .collect();
    if let Some(d) = divisor {
        let poly = d.polytope();
        for (p, q) in points.iter().zip(&scaled) {
            if q.len() != poly.dimension() || !poly.contains(q, false) {
                return Err(Error::PointOutside {
                    point: format!("{p:?} at level {level}"),
                });
            }
        }
    }
    NewtonBody::new(scaled)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaEntry {
    pub vertex: RatVector,
    pub lct: LctValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    pub alpha: Rat,
    pub minimizing_point: RatVector,
    /// One row per vertex of the fixed polytope, in vertex order.
    pub table: Vec<AlphaEntry>,
}

/// Grid check of an alpha value: the threshold at every grid point of the
/// fixed polytope is at least alpha.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub max_denominator: u32,
    pub points: usize,
    pub grid_min: Rat,
    pub alpha: Rat,
    /// `grid_min - alpha`; never negative.
    pub gap: Rat,
    pub minimizer_on_grid: bool,
}

/// A nef and big divisor with its polytope and vertices prepared.
#[derive(Clone, Debug)]
pub struct NefBigDivisor<'a> {
    divisor: ToricDivisor<'a>,
    polytope: RationalPolytope,
    anticanonical: RationalPolytope,
}

impl<'a> NefBigDivisor<'a> {
    pub fn new(divisor: ToricDivisor<'a>) -> Result<Self> {
        divisor.fan().require_smooth_complete()?;
        divisor.require_nef()?;
        if !divisor.is_big()? {
            return Err(Error::NotBig);
        }
        let polytope = divisor.polytope();
        polytope.vertices()?;
        let anticanonical = ToricDivisor::anticanonical(divisor.fan()).polytope();
        Ok(NefBigDivisor {
            divisor,
            polytope,
            anticanonical,
        })
    }

    pub fn divisor(&self) -> &ToricDivisor<'a> {
        &self.divisor
    }

    pub fn fan(&self) -> &'a Fan {
        self.divisor.fan()
    }

    pub fn polytope(&self) -> &RationalPolytope {
        &self.polytope
    }

    pub fn vertices(&self) -> &[RatVector] {
        self.polytope.vertices().expect("vertices computed at construction")
    }

    fn check_point(&self, p: &[Rat]) -> Result<()> {
        if p.len() != self.fan().dimension() {
            return Err(Error::DimensionMismatch {
                context: "point dimension",
                expected: self.fan().dimension(),
                found: p.len(),
            });
        }
        if !self.polytope.contains(p, false) {
            return Err(Error::PointOutside {
                point: format_point(p),
            });
        }
        Ok(())
    }

    /// `max_ρ (⟨p, uᵨ⟩ + aᵨ)` and the first ray attaining it.
    pub fn inverse_lct_per_ray(&self, p: &[Rat]) -> (Rat, usize) {
        let mut best: Option<(Rat, usize)> = None;
        for (r, u) in self.fan().rat_rays().iter().enumerate() {
            let x = dot(p, u) + self.divisor.coefficient(r);
            if best.as_ref().is_none_or(|(b, _)| x > *b) {
                best = Some((x, r));
            }
        }
        best.expect("a complete fan has rays")
    }

    /// `max_{v,ρ} ⟨p - v, uᵨ⟩` and the first `(vertex, ray)` attaining it.
    pub fn inverse_lct_per_vertex(&self, p: &[Rat]) -> (Rat, usize, usize) {
        let mut best: Option<(Rat, usize, usize)> = None;
        for (vi, v) in self.vertices().iter().enumerate() {
            let d = sub_vec(p, v);
            for (r, u) in self.fan().rat_rays().iter().enumerate() {
                let x = dot(&d, u);
                if best.as_ref().is_none_or(|(b, _, _)| x > *b) {
                    best = Some((x, vi, r));
                }
            }
        }
        best.expect("a nonempty polytope has vertices")
    }

    /// Threshold of the metric whose Newton body is the single point `p`.
    pub fn lct_point(&self, p: &[Rat]) -> Result<LctValue> {
        self.check_point(p)?;
        let (by_vertex, vi, ray) = self.inverse_lct_per_vertex(p);
        let (by_ray, _) = self.inverse_lct_per_ray(p);
        if by_vertex != by_ray {
            return Err(Error::CrossCheck(format!(
                "per-vertex bound {by_vertex} differs from per-ray bound {by_ray} at {}",
                format_point(p)
            )));
        }
        if !by_vertex.is_positive() {
            return Ok(LctValue::Infinite);
        }
        Ok(LctValue::Finite {
            value: by_vertex.recip(),
            witness: Witness {
                vertex: self.vertices()[vi].clone(),
                ray,
            },
        })
    }

    /// Threshold of a metric with an arbitrary polytope Newton body: one LP
    /// per vertex `v` of `P`,
    /// `min t  s.t.  t ≥ ⟨Σⱼ λⱼ qⱼ - v, uᵨ⟩ ∀ρ,  Σ λⱼ = 1,  λ ≥ 0`,
    /// and the threshold is the reciprocal of the largest optimum.
    pub fn lct_newton_body(&self, body: &NewtonBody) -> Result<LctValue> {
        for q in body.points() {
            self.check_point(q)?;
        }
        let rays = self.fan().rat_rays();
        let k = body.points().len();
        let mut best: Option<(Rat, usize, usize)> = None;
        for (vi, v) in self.vertices().iter().enumerate() {
            // variables: λ₁..λₖ, t
            let mut lp = LinearProgram::new(k + 1);
            lp.set_free(k);
            let mut objective = vec![Rat::zero(); k + 1];
            objective[k] = Rat::one();
            lp.minimize(objective);
            for u in rays {
                let mut row: RatVector = body.points().iter().map(|q| -dot(q, u)).collect();
                row.push(Rat::one());
                lp.ge(row, -dot(v, u));
            }
            let mut simplex = vec![Rat::one(); k];
            simplex.push(Rat::zero());
            lp.eq(simplex, Rat::one());
            let sol = lp.solve()?;
            let opt = sol
                .optimum()
                .ok_or_else(|| Error::CrossCheck("minimax LP has no optimum".into()))?;
            let t = opt.value.clone();
            let y: RatVector = (0..v.len())
                .map(|j| {
                    body.points()
                        .iter()
                        .zip(&opt.point)
                        .map(|(q, l)| &q[j] * l)
                        .sum()
                })
                .collect();
            let d = sub_vec(&y, v);
            let ray = rays
                .iter()
                .position(|u| dot(&d, u) == t)
                .ok_or_else(|| Error::CrossCheck("minimax LP has no binding ray".into()))?;
            if best.as_ref().is_none_or(|(b, _, _)| t > *b) {
                best = Some((t, vi, ray));
            }
        }
        let (m, vi, ray) = best.expect("a nonempty polytope has vertices");
        if !m.is_positive() {
            return Ok(LctValue::Infinite);
        }
        Ok(LctValue::Finite {
            value: m.recip(),
            witness: Witness {
                vertex: self.vertices()[vi].clone(),
                ray,
            },
        })
    }

    /// `c·P ⊂ Int(c·p + Q)`, checked vertex by vertex with strict polytope
    /// containment.
    pub fn point_containment(&self, c: &Rat, p: &[Rat]) -> bool {
        self.vertices().iter().all(|v| {
            let shifted = scale_vec(c, &sub_vec(v, p));
            self.anticanonical.contains(&shifted, true)
        })
    }

    /// `c·P ⊂ Int(c·B + Q)` for a Newton body `B`. For each vertex `v` the LP
    /// maximizes the slack `ε` in `⟨c·v - c·y, uᵨ⟩ ≥ -1 + ε` over `y ∈ B`;
    /// the containment is strict iff every optimum is positive.
    pub fn body_containment(&self, c: &Rat, body: &NewtonBody) -> Result<bool> {
        let k = body.points().len();
        for v in self.vertices() {
            // variables: λ₁..λₖ, ε
            let mut lp = LinearProgram::new(k + 1);
            lp.set_free(k);
            let mut objective = vec![Rat::zero(); k + 1];
            objective[k] = -Rat::one();
            lp.minimize(objective);
            for u in self.fan().rat_rays() {
                let mut row: RatVector = body.points().iter().map(|q| -(c * &dot(q, u))).collect();
                row.push(-Rat::one());
                lp.ge(row, -Rat::one() - c * &dot(v, u));
            }
            let mut simplex = vec![Rat::one(); k];
            simplex.push(Rat::zero());
            lp.eq(simplex, Rat::one());
            let mut cap = vec![Rat::zero(); k + 1];
            cap[k] = Rat::one();
            lp.le(cap, Rat::one());
            let sol = lp.solve()?;
            match sol.optimum() {
                Some(opt) if (-&opt.value).is_positive() => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Alpha-invariant with respect to `group`.
    pub fn alpha(&self, group: &SymmetryGroup) -> Result<AlphaResult> {
        if let Some((ray, image)) = group.invariance_violation(&self.divisor) {
            return Err(Error::NotInvariant { ray, image });
        }
        let fixed = group
            .fixed_polytope(&self.polytope)?
            .ok_or(Error::NoInvariantPoints)?;
        let mut table = Vec::with_capacity(fixed.points().len());
        for p in fixed.points() {
            table.push(AlphaEntry {
                vertex: p.clone(),
                lct: self.lct_point(p)?,
            });
        }
        let mut best: Option<&AlphaEntry> = None;
        for entry in &table {
            if entry.lct.is_infinite() {
                continue;
            }
            // Ties go to the lexicographically last vertex.
            if best.is_none_or(|b| entry.lct.cmp_value(&b.lct) != Ordering::Greater) {
                best = Some(entry);
            }
        }
        let best = best.ok_or_else(|| {
            Error::CrossCheck("big divisor with an unbounded threshold at every vertex".into())
        })?;
        Ok(AlphaResult {
            alpha: best.lct.value().expect("finite").clone(),
            minimizing_point: best.vertex.clone(),
            table,
        })
    }

    /// Evaluates the point threshold on every point of the fixed polytope
    /// whose subspace coordinates have denominators at most `max_denominator`.
    pub fn grid_oracle(&self, group: &SymmetryGroup, max_denominator: u32) -> Result<GridReport> {
        let alpha = self.alpha(group)?;
        let basis = group.fixed_character_subspace();
        let slice = self.polytope.intersect_with_subspace(&basis)?;
        let s_vertices = slice.polytope().vertices()?;
        let k = basis.len();
        let mut axes: Vec<Vec<Rat>> = Vec::with_capacity(k);
        for j in 0..k {
            let lo = s_vertices.iter().map(|s| &s[j]).min().expect("nonempty").clone();
            let hi = s_vertices.iter().map(|s| &s[j]).max().expect("nonempty").clone();
            axes.push(rationals_between(&lo, &hi, max_denominator));
        }
        let mut count = 0;
        let mut grid_min: Option<Rat> = None;
        let mut on_grid = false;
        let mut index = vec![0usize; k];
        loop {
            let s: RatVector = index.iter().zip(&axes).map(|(&i, a)| a[i].clone()).collect();
            if slice.polytope().contains(&s, false) {
                let m = slice.lift(&s);
                let (inv, _) = self.inverse_lct_per_ray(&m);
                let value = inv.recip();
                count += 1;
                on_grid |= m == alpha.minimizing_point;
                if grid_min.as_ref().is_none_or(|g| value < *g) {
                    grid_min = Some(value);
                }
            }
            // odometer over the axes
            let mut j = 0;
            while j < k {
                index[j] += 1;
                if index[j] < axes[j].len() {
                    break;
                }
                index[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        let grid_min = grid_min.ok_or(Error::NoInvariantPoints)?;
        Ok(GridReport {
            max_denominator,
            points: count,
            gap: &grid_min - &alpha.alpha,
            grid_min,
            alpha: alpha.alpha,
            minimizer_on_grid: on_grid,
        })
    }
}

/// All rationals in `[lo, hi]` with denominator at most `max_denominator`,
/// sorted.
pub fn rationals_between(lo: &Rat, hi: &Rat, max_denominator: u32) -> Vec<Rat> {
    let mut out = BTreeSet::new();
    for d in 1..=max_denominator.max(1) {
        let dr = Rat::from(i64::from(d));
        let start = ceil(&(lo * &dr));
        let end = floor(&(hi * &dr));
        let mut n = start;
        while n <= end {
            out.insert(Rat::new(n.clone(), i64::from(d)));
            n += 1;
        }
    }
    out.into_iter().collect()
}

fn floor(x: &Rat) -> num_bigint::BigInt {
    x.as_big_rational().floor().to_integer()
}

fn ceil(x: &Rat) -> num_bigint::BigInt {
    x.as_big_rational().ceil().to_integer()
}

fn format_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `s*` with `w_p = -s*·p` the boundary point of `Q` opposite `p`.
pub fn antipodal_scale(fan: &Fan, p: &[Rat]) -> Result<Rat> {
    if p.iter().all(Rat::is_zero) {
        return Err(Error::ZeroPoint);
    }
    let q = ToricDivisor::anticanonical(fan).polytope();
    if p.len() != fan.dimension() || !q.contains(p, false) {
        return Err(Error::PointOutside {
            point: format_point(p),
        });
    }
    let max = fan
        .rat_rays()
        .iter()
        .map(|u| dot(p, u))
        .filter(Rat::is_positive)
        .max()
        .ok_or_else(|| Error::CrossCheck("rays of a complete fan span positively".into()))?;
    Ok(max.recip())
}

/// `w_p = ∂Q ∩ {-t·p : t ≥ 0}`.
pub fn w_point(fan: &Fan, p: &[Rat]) -> Result<RatVector> {
    let s = antipodal_scale(fan, p)?;
    Ok(scale_vec(&-s, p))
}

/// Threshold of the point metric `{p}` on `-K` by the ratio
/// `|w_p| / (|w_p| + |p|) = s*/(s*+1)`, with `1` at the origin. Checked
/// against the general containment formula before returning.
pub fn lct_anticanonical_point(fan: &Fan, p: &[Rat]) -> Result<LctValue> {
    let ratio = if p.iter().all(Rat::is_zero) {
        Rat::one()
    } else {
        let s = antipodal_scale(fan, p)?;
        &s / &(&s + &Rat::one())
    };
    let general = NefBigDivisor::new(ToricDivisor::anticanonical(fan))?.lct_point(p)?;
    if general.value() != Some(&ratio) {
        return Err(Error::CrossCheck(format!(
            "antipodal ratio {ratio} differs from containment threshold {general}"
        )));
    }
    Ok(general)
}

/// Alpha-invariant of `-K` from the boundary fixed points:
/// `1` if only the origin is fixed, else `1 / (1 + T)` with
/// `T = max_p max_ρ ⟨p, uᵨ⟩` over the nonzero fixed vertices. Checked
/// against [`NefBigDivisor::alpha`].
pub fn alpha_fano(fan: &Fan, group: &SymmetryGroup) -> Result<Rat> {
    let q = ToricDivisor::anticanonical(fan).polytope();
    let fixed = group.fixed_polytope(&q)?.ok_or(Error::NoInvariantPoints)?;
    let nonzero: Vec<&RatVector> = fixed
        .points()
        .iter()
        .filter(|p| !p.iter().all(Rat::is_zero))
        .collect();
    let value = if nonzero.is_empty() {
        Rat::one()
    } else {
        let t = nonzero
            .iter()
            .flat_map(|p| fan.rat_rays().iter().map(move |u| dot(p, u)))
            .max()
            .expect("rays exist");
        (Rat::one() + t).recip()
    };
    let general = NefBigDivisor::new(ToricDivisor::anticanonical(fan))?.alpha(group)?;
    if general.alpha != value {
        return Err(Error::CrossCheck(format!(
            "boundary formula {value} differs from vertex minimum {}",
            general.alpha
        )));
    }
    Ok(value)
}

/// Threshold of the point metric at the barycenter of `Q`; this is the
/// greatest lower bound on the Ricci curvature.
pub fn glb_ricci(fan: &Fan) -> Result<Rat> {
    let k = NefBigDivisor::new(ToricDivisor::anticanonical(fan))?;
    let (_, barycenter) = k.polytope().volume_and_barycenter()?;
    match k.lct_point(&barycenter)? {
        LctValue::Finite { value, .. } => Ok(value),
        LctValue::Infinite => Err(Error::CrossCheck("unbounded threshold at the barycenter".into())),
    }
}
