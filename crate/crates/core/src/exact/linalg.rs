use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, Rat, RatMatrix, RatVector};
use crate::error::{Error, Result};

/// Unique solution of `a · x = b`, or `None` when `a` is singular.
pub fn solve_linear(a: &RatMatrix, b: &[Rat]) -> Result<Option<RatVector>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "solve_linear: matrix not square",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_linear: right-hand side",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let n = a.rows();
    let mut m = RatMatrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
            return Ok(None);
        };
        swap_rows(&mut m, col, pivot);
        let inv = m[(col, col)].recip();
        for j in col..=n {
            m[(col, j)] *= &inv;
        }
        for r in 0..n {
            if r != col && !m[(r, col)].is_zero() {
                let factor = m[(r, col)].clone();
                for j in col..=n {
                    let delta = &factor * &m[(col, j)];
                    m[(r, j)] -= &delta;
                }
            }
        }
    }
    Ok(Some((0..n).map(|i| m[(i, n)].clone()).collect()))
}

/// Exact inverse, or `None` when singular.
pub fn inverse(a: &RatMatrix) -> Result<Option<RatMatrix>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "inverse: matrix not square",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e: RatVector = (0..n)
            .map(|i| if i == j { Rat::one() } else { Rat::zero() })
            .collect();
        match solve_linear(a, &e)? {
            Some(col) => columns.push(col),
            None => return Ok(None),
        }
    }
    Ok(Some(RatMatrix::from_columns(&columns, n)))
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: "determinant: matrix not square",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                return Ok(BigInt::zero());
            };
            swap_rows(&mut m, k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // Sylvester's identity makes this division exact.
                m[(i, j)] = num / &prev;
            }
        }
        prev = m[(k, k)].clone();
    }
    let det = m[(n - 1, n - 1)].clone();
    Ok(if negate { -det } else { det })
}

/// Gcd of all maximal minors of a `k × n` integer matrix with `k ≤ n`.
///
/// The rows extend to a basis of `ℤⁿ` exactly when this is 1.
pub fn minor_gcd(a: &IntMatrix) -> Result<BigInt> {
    let (k, n) = (a.rows(), a.cols());
    if k > n {
        return Err(Error::DimensionMismatch {
            context: "minor_gcd: more rows than columns",
            expected: n,
            found: k,
        });
    }
    let mut g = BigInt::zero();
    for cols in (0..n).combinations(k) {
        let minor = determinant(&a.select_columns(&cols))?;
        g = g.gcd(&minor);
    }
    if g.is_zero() {
        return Err(Error::RankDeficient("minor_gcd: rows are linearly dependent"));
    }
    Ok(g.abs())
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        swap_rows(&mut m, r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            m[(r, j)] *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let factor = m[(i, c)].clone();
                for j in c..cols {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &RatMatrix) -> usize {
    rref(a).1.len()
}

/// Basis of `{x : a · x = 0}` in reduced echelon form; empty when the
/// kernel is trivial.
pub fn rational_kernel(a: &RatMatrix) -> Vec<RatVector> {
    let n = a.cols();
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Vec::new();
    }
    let basis: Vec<RatVector> = free
        .iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); n];
            x[f] = Rat::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -&r[(row, f)];
            }
            x
        })
        .collect();
    let (echelon, _) = rref(&RatMatrix::from_rows(&basis, n));
    echelon.to_rows()
}

fn swap_rows<T: Clone>(m: &mut super::Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}
