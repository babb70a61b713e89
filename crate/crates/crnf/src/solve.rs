//! Exact dense linear solving over the crate's coefficient fields.
//!
//! [`Prepared`] stores a reduced row echelon form together with the row
//! transform that produced it, so one elimination serves many right-hand
//! sides. Invariants:
//!
//! - elimination is exact field arithmetic; no pivot thresholds exist
//! - `transform * original = rref` holds as an identity of matrices

use crate::scalar::ExactScalar;
use num::BigRational;
use num::Zero;

/// Minimal field interface the eliminator needs.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Outcome of solving `A x = b` against a prepared elimination.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F> {
    /// Exactly one solution.
    Unique(Vec<F>),
    /// No solution; carries the index of a violated row.
    Inconsistent(usize),
    /// Solutions form a positive-dimensional affine space.
    Underdetermined,
}

/// Row-reduced matrix with its accumulated row transform.
#[derive(Clone, Debug)]
pub struct Prepared<F> {
    rref: Vec<Vec<F>>,
    transform: Vec<Vec<F>>,
    pivot_cols: Vec<usize>,
    rows: usize,
    cols: usize,
}

impl<F: Field> Prepared<F> {
    /// Eliminates `a` (rows x cols, row-major) once, recording the transform.
    pub fn new(a: Vec<Vec<F>>) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        debug_assert!(a.iter().all(|r| r.len() == cols));
        let mut rref = a;
        let mut transform: Vec<Vec<F>> = (0..rows)
            .map(|i| {
                (0..rows)
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let Some(pivot) = (row..rows).find(|&r| !rref[r][col].is_zero()) else {
                continue;
            };
            rref.swap(row, pivot);
            transform.swap(row, pivot);
            let inv = F::one().div(&rref[row][col]);
            for c in 0..cols {
                rref[row][c] = rref[row][c].mul(&inv);
            }
            for c in 0..rows {
                transform[row][c] = transform[row][c].mul(&inv);
            }
            for r in 0..rows {
                if r == row || rref[r][col].is_zero() {
                    continue;
                }
                let factor = rref[r][col].clone();
                for c in 0..cols {
                    let delta = factor.mul(&rref[row][c]);
                    rref[r][c] = rref[r][c].sub(&delta);
                }
                for c in 0..rows {
                    let delta = factor.mul(&transform[row][c]);
                    transform[r][c] = transform[r][c].sub(&delta);
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        Prepared {
            rref,
            transform,
            pivot_cols,
            rows,
            cols,
        }
    }

    /// Matrix rank.
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// The reduced row echelon form computed at preparation time.
    pub fn rref(&self) -> &[Vec<F>] {
        &self.rref
    }

    /// Solves for one right-hand side using the stored transform.
    pub fn solve(&self, b: &[F]) -> SolveOutcome<F> {
        let tb = self.transformed_rhs(b);
        for r in self.rank()..self.rows {
            if !tb[r].is_zero() {
                return SolveOutcome::Inconsistent(r);
            }
        }
        if self.rank() < self.cols {
            return SolveOutcome::Underdetermined;
        }
        SolveOutcome::Unique(self.back_substitute(tb))
    }

    /// Solves a possibly rank-deficient system, returning the particular
    /// solution with every free variable set to zero, or None when the
    /// system is inconsistent.
    pub fn solve_particular(&self, b: &[F]) -> Option<Vec<F>> {
        let tb = self.transformed_rhs(b);
        for r in self.rank()..self.rows {
            if !tb[r].is_zero() {
                return None;
            }
        }
        Some(self.back_substitute(tb))
    }

    fn transformed_rhs(&self, b: &[F]) -> Vec<F> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for c in 0..self.rows {
                    if !self.transform[r][c].is_zero() && !b[c].is_zero() {
                        acc = acc.add(&self.transform[r][c].mul(&b[c]));
                    }
                }
                acc
            })
            .collect()
    }

    fn back_substitute(&self, tb: Vec<F>) -> Vec<F> {
        let mut x = vec![F::zero(); self.cols];
        for (r, &col) in self.pivot_cols.iter().enumerate() {
            x[col] = tb[r].clone();
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn solves_invertible_system() {
        // [10 4; 4 10] x = [6; 0]  =>  x = (5/7, -2/7)
        let a = vec![vec![q(10), q(4)], vec![q(4), q(10)]];
        let p = Prepared::new(a);
        match p.solve(&[q(6), q(0)]) {
            SolveOutcome::Unique(x) => {
                assert_eq!(x[0], BigRational::new(BigInt::from(5), BigInt::from(7)));
                assert_eq!(x[1], BigRational::new(BigInt::from(-2), BigInt::from(7)));
            }
            other => panic!("expected unique solution, got {:?}", other),
        }
    }

    #[test]
    fn transform_serves_many_rhs() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let p = Prepared::new(a);
        for (b0, b1) in [(1, 0), (0, 1), (7, -4)] {
            let SolveOutcome::Unique(x) = p.solve(&[q(b0), q(b1)]) else {
                panic!("singular");
            };
            // Check A x = b directly.
            assert_eq!(&x[0] * q(2) + &x[1] * q(1), q(b0));
            assert_eq!(&x[0] * q(1) + &x[1] * q(3), q(b1));
        }
    }

    #[test]
    fn detects_inconsistency_and_freedom() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        let p = Prepared::new(a);
        assert!(matches!(p.solve(&[q(1), q(3)]), SolveOutcome::Inconsistent(_)));
        assert!(matches!(p.solve(&[q(1), q(2)]), SolveOutcome::Underdetermined));
    }

    #[test]
    fn particular_solution_zeroes_free_variables() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        let p = Prepared::new(a);
        // Rank one, consistent: pivot variable carries the solution.
        assert_eq!(p.solve_particular(&[q(3), q(6)]), Some(vec![q(3), q(0)]));
        assert_eq!(p.solve_particular(&[q(1), q(3)]), None);
        // Full rank agrees with solve.
        let full = Prepared::new(vec![vec![q(2), q(1)], vec![q(1), q(3)]]);
        assert_eq!(full.solve_particular(&[q(7), q(-4)]), match full.solve(&[q(7), q(-4)]) {
            SolveOutcome::Unique(x) => Some(x),
            _ => None,
        });
    }

    #[test]
    fn complex_entries_eliminate_exactly() {
        let i = ExactScalar::i();
        let one = ExactScalar::one();
        // [1 i; i 1] has determinant 1 - i^2 = 2.
        let a = vec![vec![one.clone(), i.clone()], vec![i.clone(), one.clone()]];
        let p = Prepared::new(a);
        let SolveOutcome::Unique(x) = p.solve(&[ExactScalar::from_int(2), ExactScalar::zero()])
        else {
            panic!("singular");
        };
        assert_eq!(x[0], ExactScalar::one());
        assert_eq!(x[1], -ExactScalar::i());
    }
}
