//! Torus-invariant divisors `D = Σ aᵨ Dᵨ` and their positivity.
//!
//! Sign convention, fixed here once: the support function takes the value
//! `g(uᵨ) = -aᵨ` on each ray, and the polytope of `D` is
//! `P = { m : ⟨m, uᵨ⟩ ≥ -aᵨ for every ray }`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{dot, solve_linear, Rat, RatMatrix, RatVector};
use crate::fan::Fan;
use crate::polytope::{affine_dimension, RationalPolytope, VPolytope};

#[derive(Clone, Debug, PartialEq)]
pub struct ToricDivisor<'a> {
    fan: &'a Fan,
    coefficients: Vec<BigInt>,
}

/// Piecewise-linear function with slope `slopes[σ]` on maximal cone `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    slopes: Vec<RatVector>,
}

impl SupportFunction {
    pub fn slopes(&self) -> &[RatVector] {
        &self.slopes
    }

    pub fn slope(&self, cone: usize) -> &[Rat] {
        &self.slopes[cone]
    }

    /// `g(x) = ⟨v_σ, x⟩` for the first maximal cone `σ` containing `x`.
    pub fn evaluate(&self, fan: &Fan, x: &[Rat]) -> Result<Rat> {
        let (cone, _) = fan.cone_containing(x)?;
        Ok(dot(&self.slopes[cone], x))
    }
}

impl<'a> ToricDivisor<'a> {
    pub fn new(fan: &'a Fan, coefficients: Vec<BigInt>) -> Result<Self> {
        if coefficients.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch {
                context: "divisor coefficient count",
                expected: fan.rays().len(),
                found: coefficients.len(),
            });
        }
        Ok(ToricDivisor { fan, coefficients })
    }

    pub fn from_i64(fan: &'a Fan, coefficients: &[i64]) -> Result<Self> {
        Self::new(fan, coefficients.iter().map(|&a| BigInt::from(a)).collect())
    }

    /// `-K = Σ Dᵨ`.
    pub fn anticanonical(fan: &'a Fan) -> Self {
        ToricDivisor {
            fan,
            coefficients: vec![BigInt::one(); fan.rays().len()],
        }
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, ray: usize) -> Rat {
        Rat::from(&self.coefficients[ray])
    }

    pub fn is_anticanonical(&self) -> bool {
        self.coefficients.iter().all(One::is_one)
    }

    /// `k·D`.
    pub fn scaled(&self, k: i64) -> Self {
        ToricDivisor {
            fan: self.fan,
            coefficients: self.coefficients.iter().map(|a| a * k).collect(),
        }
    }

    /// The linearly equivalent divisor `aᵨ + ⟨m, uᵨ⟩`; its polytope is
    /// `P - m`.
    pub fn shifted(&self, m: &[BigInt]) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .zip(self.fan.rays())
            .map(|(a, u)| a + u.iter().zip(m).map(|(x, y)| x * y).sum::<BigInt>())
            .collect();
        ToricDivisor {
            fan: self.fan,
            coefficients,
        }
    }

    /// Slopes `v_σ` solving `⟨v_σ, uᵨ⟩ = -aᵨ` for the rays of each maximal
    /// cone.
    pub fn support_function(&self) -> Result<SupportFunction> {
        self.fan.require_smooth_complete()?;
        let n = self.fan.dimension();
        let slopes = self
            .fan
            .max_cones()
            .iter()
            .map(|cone| {
                let rows: Vec<RatVector> =
                    cone.iter().map(|&i| self.fan.rat_rays()[i].clone()).collect();
                let rhs: RatVector = cone.iter().map(|&i| -self.coefficient(i)).collect();
                solve_linear(&RatMatrix::from_rows(&rows, n), &rhs)?
                    .ok_or_else(|| Error::CrossCheck("smooth cone with singular ray matrix".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SupportFunction { slopes })
    }

    /// `{ m : ⟨uᵨ, m⟩ ≥ -aᵨ }`, one inequality per ray in ray order.
    pub fn polytope(&self) -> RationalPolytope {
        let rows = self
            .fan
            .rays()
            .iter()
            .zip(&self.coefficients)
            .map(|(u, a)| (u.clone(), -Rat::from(a)))
            .collect();
        RationalPolytope::new(self.fan.dimension(), rows)
            .expect("ray lengths match the fan dimension")
            .with_limits(self.fan.limits())
    }

    /// All `(cone, ray)` pairs with `⟨v_σ, uᵨ⟩ < -aᵨ`; empty iff `D` is nef.
    pub fn nef_violations(&self) -> Result<Vec<(usize, usize)>> {
        let g = self.support_function()?;
        let mut out = Vec::new();
        for (c, v) in g.slopes.iter().enumerate() {
            for (r, u) in self.fan.rat_rays().iter().enumerate() {
                if dot(v, u) < -self.coefficient(r) {
                    out.push((c, r));
                }
            }
        }
        Ok(out)
    }

    pub fn is_nef(&self) -> Result<bool> {
        Ok(self.nef_violations()?.is_empty())
    }

    pub fn require_nef(&self) -> Result<()> {
        match self.nef_violations()?.first() {
            None => Ok(()),
            Some(&(cone, ray)) => Err(Error::NotNef { cone, ray }),
        }
    }

    /// The polytope has nonempty interior.
    pub fn is_big(&self) -> Result<bool> {
        let poly = self.polytope();
        let vertices = poly.vertices()?;
        Ok(!vertices.is_empty() && affine_dimension(vertices) == self.fan.dimension())
    }

    /// Nef with pairwise distinct slopes.
    pub fn is_ample(&self) -> Result<bool> {
        if !self.is_nef()? {
            return Ok(false);
        }
        let g = self.support_function()?;
        let mut slopes = g.slopes.clone();
        slopes.sort();
        slopes.dedup();
        Ok(slopes.len() == g.slopes.len())
    }

    /// Newton body of `max_σ ⟨v_σ, ·⟩`, i.e. the hull of the slopes.
    pub fn batyrev_tschinkel_newton_body(&self) -> Result<VPolytope> {
        self.require_nef()?;
        VPolytope::new(self.support_function()?.slopes)
    }
}
