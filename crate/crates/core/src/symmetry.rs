//! Lattice automorphisms of a fan and the subgroups they form.
//!
//! A group element `g` acts on `N` by its matrix and on characters `M` by
//! `(g⁻¹)ᵀ`, so that `⟨g·m, g·x⟩ = ⟨m, x⟩`. A character is fixed by the
//! whole group iff `gᵀ m = m` for every element.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;

use crate::divisor::ToricDivisor;
use crate::error::{Error, Result};
use crate::exact::{
    determinant, inverse, rational_kernel, IntMatrix, Rat, RatMatrix, RatVector,
};
use crate::fan::Fan;
use crate::polytope::{RationalPolytope, VPolytope};

/// A unimodular map of `N` permuting the rays and the maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeAutomorphism {
    // Field order drives the derived ordering: groups sort by permutation.
    ray_permutation: Vec<usize>,
    matrix: IntMatrix,
    character_action: IntMatrix,
}

impl LatticeAutomorphism {
    /// Checks that `matrix` is unimodular, maps rays to rays and maximal
    /// cones to maximal cones.
    pub fn from_matrix(fan: &Fan, matrix: IntMatrix) -> std::result::Result<Self, String> {
        let n = fan.dimension();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(format!("expected a {n}x{n} matrix"));
        }
        let det = determinant(&matrix).map_err(|e| e.to_string())?;
        if !det.abs().eq(&BigInt::from(1)) {
            return Err(format!("determinant {det} is not ±1"));
        }
        let mut ray_permutation = Vec::with_capacity(fan.rays().len());
        for (i, u) in fan.rays().iter().enumerate() {
            let image = matrix.mul_vec(u);
            match fan.ray_index(&image) {
                Some(j) => ray_permutation.push(j),
                None => {
                    return Err(format!(
                        "ray {i} maps to {image:?}, which is not a ray of the fan"
                    ))
                }
            }
        }
        let cones: BTreeSet<&Vec<usize>> = fan.max_cones().iter().collect();
        for (c, cone) in fan.max_cones().iter().enumerate() {
            let mut image: Vec<usize> = cone.iter().map(|&r| ray_permutation[r]).collect();
            image.sort_unstable();
            if !cones.contains(&image) {
                return Err(format!("maximal cone {c} does not map to a maximal cone"));
            }
        }
        let inv = inverse(&matrix.to_rat())
            .map_err(|e| e.to_string())?
            .and_then(|m| m.to_int())
            .ok_or_else(|| "matrix has no integral inverse".to_string())?;
        Ok(LatticeAutomorphism {
            ray_permutation,
            matrix,
            character_action: inv.transpose(),
        })
    }

    pub fn identity(fan: &Fan) -> Self {
        LatticeAutomorphism::from_matrix(fan, IntMatrix::identity(fan.dimension()))
            .expect("identity preserves every fan")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ray_permutation(&self) -> &[usize] {
        &self.ray_permutation
    }

    pub fn is_identity(&self) -> bool {
        self.ray_permutation.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeAutomorphism) -> LatticeAutomorphism {
        LatticeAutomorphism {
            ray_permutation: other
                .ray_permutation
                .iter()
                .map(|&r| self.ray_permutation[r])
                .collect(),
            matrix: self.matrix.mul(&other.matrix),
            character_action: self.character_action.mul(&other.character_action),
        }
    }

    /// `(g⁻¹)ᵀ m`.
    pub fn act_on_character(&self, m: &[Rat]) -> RatVector {
        self.character_action.to_rat().mul_vec(m)
    }
}

/// A finite group of fan automorphisms, identity included, sorted by ray
/// permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    elements: Vec<LatticeAutomorphism>,
}

impl SymmetryGroup {
    pub fn trivial(fan: &Fan) -> Self {
        SymmetryGroup {
            elements: vec![LatticeAutomorphism::identity(fan)],
        }
    }

    /// The full automorphism group of a smooth complete fan.
    ///
    /// Anchored at maximal cone 0 with ray matrix `U₀`: every automorphism
    /// sends it to some maximal cone with some ordering of its rays `U`, so
    /// the candidates are `U·U₀⁻¹`.
    pub fn automorphism_group(fan: &Fan) -> Result<Self> {
        fan.require_smooth_complete()?;
        let n = fan.dimension();
        let reference = fan.cone_matrix(0).to_rat();
        let reference_inv = inverse(&reference)?
            .ok_or_else(|| Error::CrossCheck("smooth cone with singular ray matrix".into()))?;
        let mut found = BTreeSet::new();
        for cone in fan.max_cones() {
            for order in cone.iter().copied().permutations(n) {
                let cols: Vec<RatVector> =
                    order.iter().map(|&r| fan.rat_rays()[r].clone()).collect();
                let target = RatMatrix::from_columns(&cols, n);
                let Some(candidate) = target.mul(&reference_inv).to_int() else {
                    continue;
                };
                if let Ok(g) = LatticeAutomorphism::from_matrix(fan, candidate) {
                    found.insert(g);
                }
            }
        }
        Ok(SymmetryGroup {
            elements: found.into_iter().collect(),
        })
    }

    /// Closes the given matrices under composition after validating each.
    pub fn from_generators(fan: &Fan, generators: &[IntMatrix]) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for (index, m) in generators.iter().enumerate() {
            let g = LatticeAutomorphism::from_matrix(fan, m.clone())
                .map_err(|reason| Error::InvalidAutomorphism { index, reason })?;
            gens.push(g);
        }
        let bound = SymmetryGroup::automorphism_group(fan)?.order();
        let mut elements: BTreeSet<LatticeAutomorphism> = BTreeSet::new();
        elements.insert(LatticeAutomorphism::identity(fan));
        let mut frontier: Vec<LatticeAutomorphism> = elements.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = g.compose(&x);
                if elements.insert(y.clone()) {
                    if elements.len() > bound {
                        return Err(Error::InvalidAutomorphism {
                            index: 0,
                            reason: format!("generated group exceeds the {bound} fan automorphisms"),
                        });
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(SymmetryGroup {
            elements: elements.into_iter().collect(),
        })
    }

    pub fn elements(&self) -> &[LatticeAutomorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &LatticeAutomorphism) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Exhaustive check of identity, closure and inverses.
    pub fn verify_group_axioms(&self) -> bool {
        let has_identity = self.elements.iter().any(LatticeAutomorphism::is_identity);
        let closed = self
            .elements
            .iter()
            .cartesian_product(&self.elements)
            .all(|(a, b)| self.contains(&a.compose(b)));
        let inverses = self.elements.iter().all(|a| {
            self.elements
                .iter()
                .any(|b| a.compose(b).is_identity() && b.compose(a).is_identity())
        });
        has_identity && closed && inverses
    }

    /// Every subgroup, each listed once, ordered by size then elements.
    pub fn subgroups(&self) -> Vec<SymmetryGroup> {
        let identity: Vec<LatticeAutomorphism> =
            self.elements.iter().filter(|g| g.is_identity()).cloned().collect();
        let mut seen: BTreeMap<Vec<LatticeAutomorphism>, ()> = BTreeMap::new();
        seen.insert(identity.clone(), ());
        let mut queue = vec![identity];
        while let Some(h) = queue.pop() {
            for g in &self.elements {
                if h.contains(g) {
                    continue;
                }
                let mut set: BTreeSet<LatticeAutomorphism> = h.iter().cloned().collect();
                set.insert(g.clone());
                let closed = close(set);
                if !seen.contains_key(&closed) {
                    seen.insert(closed.clone(), ());
                    queue.push(closed);
                }
            }
        }
        let mut out: Vec<SymmetryGroup> = seen
            .into_keys()
            .map(|elements| SymmetryGroup { elements })
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
        out
    }

    /// First `(ray, image)` with `a_{g·ρ} ≠ a_ρ`, if any.
    pub fn invariance_violation(&self, divisor: &ToricDivisor) -> Option<(usize, usize)> {
        let a = divisor.coefficients();
        self.elements.iter().find_map(|g| {
            g.ray_permutation
                .iter()
                .enumerate()
                .find(|&(r, &img)| a[r] != a[img])
                .map(|(r, &img)| (r, img))
        })
    }

    pub fn is_divisor_invariant(&self, divisor: &ToricDivisor) -> bool {
        self.invariance_violation(divisor).is_none()
    }

    /// Basis (reduced echelon) of the characters fixed by every element.
    pub fn fixed_character_subspace(&self) -> Vec<RatVector> {
        let Some(first) = self.elements.first() else {
            return Vec::new();
        };
        let n = first.matrix.rows();
        let mut rows = Vec::new();
        for g in &self.elements {
            let gt = g.matrix.transpose();
            for i in 0..n {
                rows.push(
                    (0..n)
                        .map(|j| {
                            let mut x = Rat::from(&gt[(i, j)]);
                            if i == j {
                                x = x - Rat::one();
                            }
                            x
                        })
                        .collect::<RatVector>(),
                );
            }
        }
        rational_kernel(&RatMatrix::from_rows(&rows, n))
    }

    /// Vertices of `P ∩ Fix(G)` in ambient coordinates, or `None` when the
    /// intersection is empty.
    pub fn fixed_polytope(&self, polytope: &RationalPolytope) -> Result<Option<VPolytope>> {
        let basis = self.fixed_character_subspace();
        let slice = polytope.intersect_with_subspace(&basis)?;
        let vertices = slice.ambient_vertices()?;
        if vertices.is_empty() {
            Ok(None)
        } else {
            VPolytope::new(vertices).map(Some)
        }
    }
}

fn close(mut set: BTreeSet<LatticeAutomorphism>) -> Vec<LatticeAutomorphism> {
    loop {
        let products: Vec<LatticeAutomorphism> = set
            .iter()
            .cartesian_product(set.iter())
            .map(|(a, b)| a.compose(b))
            .filter(|p| !set.contains(p))
            .collect();
        if products.is_empty() {
            return set.into_iter().collect();
        }
        set.extend(products);
    }
}
