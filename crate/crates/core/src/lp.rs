//! Small dense exact simplex solver.
//!
//! Two-phase tableau method with Bland's rule for both the entering and the
//! leaving variable, so every run terminates and the pivot sequence depends
//! only on the input. Every optimum is returned together with a dual vector
//! that has been checked against exact strong duality.

use crate::error::{Error, Result};
use crate::exact::{dot, solve_linear, Rat, RatMatrix, RatVector};

pub const MAX_VARIABLES: usize = 64;
pub const MAX_CONSTRAINTS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `coefficients · x ≥ rhs`
    Ge,
    /// `coefficients · x = rhs`
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coefficients: RatVector,
    pub relation: Relation,
    pub rhs: Rat,
}

/// `minimize objective · x` subject to the constraints, with per-variable
/// nonnegativity flags.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: RatVector,
    constraints: Vec<Constraint>,
    nonnegative: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rat,
    pub point: RatVector,
    /// One multiplier per constraint, in insertion order.
    pub dual: RatVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpSolution {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpSolution::Infeasible)
    }
}

impl LinearProgram {
    /// Program in `variables` nonnegative unknowns with a zero objective.
    pub fn new(variables: usize) -> Self {
        LinearProgram {
            objective: vec![Rat::zero(); variables],
            constraints: Vec::new(),
            nonnegative: vec![true; variables],
        }
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Rat] {
        &self.objective
    }

    pub fn minimize(&mut self, objective: RatVector) -> &mut Self {
        assert_eq!(objective.len(), self.variables(), "objective length");
        self.objective = objective;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.nonnegative[var] = false;
        self
    }

    pub fn is_nonnegative(&self, var: usize) -> bool {
        self.nonnegative[var]
    }

    pub fn add(&mut self, coefficients: RatVector, relation: Relation, rhs: Rat) -> &mut Self {
        assert_eq!(coefficients.len(), self.variables(), "constraint length");
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn ge(&mut self, coefficients: RatVector, rhs: Rat) -> &mut Self {
        self.add(coefficients, Relation::Ge, rhs)
    }

    pub fn le(&mut self, coefficients: RatVector, rhs: Rat) -> &mut Self {
        let negated = coefficients.iter().map(|c| -c).collect();
        self.add(negated, Relation::Ge, -rhs)
    }

    pub fn eq(&mut self, coefficients: RatVector, rhs: Rat) -> &mut Self {
        self.add(coefficients, Relation::Eq, rhs)
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.variables()
            && self
                .nonnegative
                .iter()
                .zip(x)
                .all(|(&nn, v)| !nn || !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coefficients, x);
                match c.relation {
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Checks that `dual` is feasible for the dual program and that its
    /// objective equals `value`.
    pub fn certifies(&self, value: &Rat, dual: &[Rat]) -> bool {
        if dual.len() != self.constraints.len() {
            return false;
        }
        let sign_ok = self
            .constraints
            .iter()
            .zip(dual)
            .all(|(c, y)| c.relation == Relation::Eq || !y.is_negative());
        let columns_ok = (0..self.variables()).all(|j| {
            let reduced: Rat = self
                .constraints
                .iter()
                .zip(dual)
                .map(|(c, y)| &c.coefficients[j] * y)
                .sum();
            if self.nonnegative[j] {
                reduced <= self.objective[j]
            } else {
                reduced == self.objective[j]
            }
        });
        let bound: Rat = self.constraints.iter().zip(dual).map(|(c, y)| &c.rhs * y).sum();
        sign_ok && columns_ok && &bound == value
    }

    pub fn solve(&self) -> Result<LpSolution> {
        if self.variables() > MAX_VARIABLES {
            return Err(Error::Capacity {
                what: "LP variables",
                limit: MAX_VARIABLES,
                requested: self.variables(),
            });
        }
        if self.constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::Capacity {
                what: "LP constraints",
                limit: MAX_CONSTRAINTS,
                requested: self.constraints.len(),
            });
        }
        let mut tableau = Tableau::standard_form(self);
        if !tableau.phase_one() {
            return Ok(LpSolution::Infeasible);
        }
        if !tableau.phase_two() {
            return Ok(LpSolution::Unbounded);
        }
        let point = tableau.primal_point();
        let value = dot(&self.objective, &point);
        let dual = tableau.dual_vector()?;
        if !self.is_satisfied_by(&point) {
            return Err(Error::CrossCheck("simplex point violates a constraint".into()));
        }
        if !self.certifies(&value, &dual) {
            return Err(Error::CrossCheck("simplex dual certificate rejected".into()));
        }
        Ok(LpSolution::Optimal(Optimum { value, point, dual }))
    }
}

/// Equality-form tableau `A x = b, x ≥ 0, b ≥ 0` with one artificial column
/// per row.
struct Tableau {
    rows: usize,
    /// Structural plus slack columns; artificials follow.
    real_cols: usize,
    /// Current tableau, `rows × (real_cols + rows + 1)`; last column is rhs.
    t: RatMatrix,
    /// Reduced-cost row; last entry is minus the objective value.
    z: RatVector,
    basis: Vec<usize>,
    /// Original standard-form matrix, for the dual solve.
    a0: RatMatrix,
    cost: RatVector,
    flipped: Vec<bool>,
    /// For each original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn standard_form(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        let mut var_cols = Vec::with_capacity(lp.variables());
        let mut next = 0;
        for &nn in &lp.nonnegative {
            if nn {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let mut slack_col = vec![None; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            if c.relation == Relation::Ge {
                slack_col[i] = Some(next);
                next += 1;
            }
        }
        let real_cols = next;
        let width = real_cols + m + 1;

        let mut a0 = RatMatrix::zeros(m, real_cols + m);
        let mut t = RatMatrix::zeros(m, width);
        let mut flipped = vec![false; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            let flip = c.rhs.is_negative();
            flipped[i] = flip;
            let sign = |x: Rat| if flip { -x } else { x };
            for (j, coef) in c.coefficients.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                a0[(i, pos)] = sign(coef.clone());
                if let Some(neg) = neg {
                    a0[(i, neg)] = sign(-coef);
                }
            }
            if let Some(s) = slack_col[i] {
                a0[(i, s)] = sign(-Rat::one());
            }
            a0[(i, real_cols + i)] = Rat::one();
            for j in 0..real_cols + m {
                t[(i, j)] = a0[(i, j)].clone();
            }
            t[(i, width - 1)] = sign(c.rhs.clone());
        }

        let mut cost = vec![Rat::zero(); real_cols + m];
        for (j, c) in lp.objective.iter().enumerate() {
            let (pos, neg) = var_cols[j];
            cost[pos] = c.clone();
            if let Some(neg) = neg {
                cost[neg] = -c;
            }
        }

        Tableau {
            rows: m,
            real_cols,
            t,
            z: vec![Rat::zero(); width],
            basis: (real_cols..real_cols + m).collect(),
            a0,
            cost,
            flipped,
            var_cols,
        }
    }

    fn width(&self) -> usize {
        self.real_cols + self.rows + 1
    }

    fn rhs(&self, row: usize) -> &Rat {
        &self.t[(row, self.width() - 1)]
    }

    /// Recomputes the reduced-cost row for the given column costs.
    fn price(&mut self, cost: &[Rat]) {
        let w = self.width();
        let mut z = vec![Rat::zero(); w];
        for (j, zj) in z.iter_mut().enumerate().take(w - 1) {
            *zj = cost[j].clone();
        }
        for i in 0..self.rows {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, zj) in z.iter_mut().enumerate() {
                let delta = cb * &self.t[(i, j)];
                *zj -= &delta;
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let inv = self.t[(row, col)].recip();
        for j in 0..w {
            self.t[(row, j)] *= &inv;
        }
        for i in 0..self.rows {
            if i == row || self.t[(i, col)].is_zero() {
                continue;
            }
            let factor = self.t[(i, col)].clone();
            for j in 0..w {
                let delta = &factor * &self.t[(row, j)];
                self.t[(i, j)] -= &delta;
            }
        }
        if !self.z[col].is_zero() {
            let factor = self.z[col].clone();
            for j in 0..w {
                let delta = &factor * &self.t[(row, j)];
                self.z[j] -= &delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland-rule simplex over columns `< allowed`. Returns false when
    /// the objective is unbounded below.
    fn iterate(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows {
                let a = &self.t[(i, enter)];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return false,
            }
        }
    }

    fn phase_one(&mut self) -> bool {
        let mut cost = vec![Rat::zero(); self.real_cols + self.rows];
        for c in cost.iter_mut().skip(self.real_cols) {
            *c = Rat::one();
        }
        self.price(&cost);
        let bounded = self.iterate(self.real_cols + self.rows);
        debug_assert!(bounded, "phase one objective is bounded below by zero");
        if !self.z[self.width() - 1].is_zero() {
            return false;
        }
        // Drive zero-valued artificials out of the basis where possible; rows
        // with no real entry are redundant and keep their artificial at zero.
        for row in 0..self.rows {
            if self.basis[row] < self.real_cols {
                continue;
            }
            if let Some(col) = (0..self.real_cols).find(|&j| !self.t[(row, j)].is_zero()) {
                self.pivot(row, col);
            }
        }
        true
    }

    fn phase_two(&mut self) -> bool {
        let mut cost = self.cost.clone();
        for c in cost.iter_mut().skip(self.real_cols) {
            *c = Rat::zero();
        }
        self.price(&cost);
        self.iterate(self.real_cols)
    }

    fn primal_point(&self) -> RatVector {
        let mut std = vec![Rat::zero(); self.real_cols + self.rows];
        for (i, &b) in self.basis.iter().enumerate() {
            std[b] = self.rhs(i).clone();
        }
        self.var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &std[pos] - &std[neg],
                None => std[pos].clone(),
            })
            .collect()
    }

    /// Solves `Bᵀ y = c_B` on the original columns and undoes row flips.
    fn dual_vector(&self) -> Result<RatVector> {
        let b = self.a0.select_columns(&self.basis);
        let cb: RatVector = self
            .basis
            .iter()
            .map(|&j| {
                if j < self.real_cols {
                    self.cost[j].clone()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        let y = solve_linear(&b.transpose(), &cb)?
            .ok_or_else(|| Error::CrossCheck("singular simplex basis".into()))?;
        Ok(y
            .into_iter()
            .zip(&self.flipped)
            .map(|(v, &f)| if f { -v } else { v })
            .collect())
    }
}
