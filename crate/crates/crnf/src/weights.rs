//! Pseudo-weight grading on monomials z^gamma zbar^beta.
//!
//! A diagnostic grading parameterized by the singularity degree k0 and the
//! leading invariant s. No normalization decision consults it; it exists to
//! classify error terms by how deep into the tail they are pushed.
//! Invariants:
//!
//! - wt(z) = 1 and wt(zbar) = (s - 1)/(k0 - 1); pure monomials grade
//!   additively
//! - every mixed monomial of degree k0 weighs exactly s, and every mixed
//!   monomial of degree k0 - 1 weighs s - 1
//! - the stored weight is the minimum over all applicable clauses, so the
//!   table is a true lower bound for every clause individually
//!
//! The clause system is deliberately *not* additive on mixed monomials:
//! an additive clause would grade some mixed degree-k0 monomials strictly
//! below s, contradicting the anchor above. One casualty is monotonicity
//! in the z-exponent: wt(1, 1) = s - 1 may exceed wt(0, 1) + 1. The two
//! requirements are mutually exclusive and the anchors win.

use crate::error::{Error, Result};
use crate::poly::BiPoly;
use crate::surface::ModelPolynomial;
use num::BigRational;
use std::cell::RefCell;
use std::collections::BTreeMap;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Memoized pseudo-weight calculator for one (k0, s) pair.
#[derive(Debug)]
pub struct PseudoWeightTable {
    k0: u32,
    s: u32,
    memo: RefCell<BTreeMap<(u32, u32), BigRational>>,
}

impl PseudoWeightTable {
    /// Builds a table; requires k0 >= 3 and s > k0.
    pub fn new(k0: u32, s: u32) -> Result<Self> {
        if k0 < 3 {
            return Err(Error::DegreeViolation { k0 });
        }
        if s <= k0 {
            return Err(Error::InvalidInput(format!(
                "the leading invariant must exceed the model degree: s = {}, k0 = {}",
                s, k0
            )));
        }
        Ok(PseudoWeightTable {
            k0,
            s,
            memo: RefCell::new(BTreeMap::new()),
        })
    }

    /// Singularity degree.
    pub fn k0(&self) -> u32 {
        self.k0
    }

    /// Leading invariant.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// The weight of zbar: (s - 1)/(k0 - 1).
    pub fn zbar_weight(&self) -> BigRational {
        rat((self.s - 1) as i64) / rat((self.k0 - 1) as i64)
    }

    /// The pseudo-weight of z^gamma zbar^beta.
    ///
    /// Pure powers grade additively. A mixed monomial takes the minimum
    /// over: the fixed values for degrees below k0 - 1, at k0 - 1, and at
    /// k0; the value gamma + s - k0 when the degree exceeds k0 and
    /// 1 <= beta <= k0 - 2; and every reduction by a mixed block of degree
    /// k0 - 1 (costing s - 1) or k0 (costing s) plus the remainder's weight.
    pub fn weight(&self, gamma: u32, beta: u32) -> Result<BigRational> {
        if gamma + beta == 0 {
            return Err(Error::DegreeOutOfRange(
                "pseudo-weights are defined for monomials of degree at least 1".into(),
            ));
        }
        if let Some(w) = self.memo.borrow().get(&(gamma, beta)) {
            return Ok(w.clone());
        }
        let k0 = self.k0;
        let s = self.s;
        let mut candidates: Vec<BigRational> = Vec::new();
        if beta == 0 {
            candidates.push(rat(gamma as i64));
        }
        if gamma == 0 {
            candidates.push(rat(beta as i64) * self.zbar_weight());
        }
        if gamma >= 1 && beta >= 1 {
            let degree = gamma + beta;
            if degree < k0 - 1 {
                candidates.push(rat((k0 - 1) as i64));
            }
            if degree == k0 - 1 {
                candidates.push(rat((s - 1) as i64));
            }
            if degree == k0 {
                candidates.push(rat(s as i64));
            }
            if degree > k0 && beta <= k0 - 2 {
                candidates.push(rat((gamma + s - k0) as i64));
            }
            for (block, cost) in [(k0 - 1, s - 1), (k0, s)] {
                if degree <= block {
                    continue;
                }
                for g1 in 1..block {
                    let b1 = block - g1;
                    if g1 <= gamma && b1 <= beta {
                        candidates.push(rat(cost as i64) + self.weight(gamma - g1, beta - b1)?);
                    }
                }
            }
        }
        let weight = candidates
            .into_iter()
            .min()
            .expect("every monomial of positive degree matches a clause");
        self.memo
            .borrow_mut()
            .insert((gamma, beta), weight.clone());
        Ok(weight)
    }

    /// The minimum pseudo-weight over the support of a nonzero polynomial.
    pub fn min_weight(&self, poly: &BiPoly) -> Result<BigRational> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut best: Option<BigRational> = None;
        for (&(m, n), _) in poly.terms() {
            let w = self.weight(m, n)?;
            best = Some(match best {
                Some(b) if b <= w => b,
                _ => w,
            });
        }
        Ok(best.expect("nonzero polynomial has support"))
    }

    /// Compares the computed weight of the model's z-derivative with the
    /// value k0 - 1 the grading is nominally designed to give it. Reported,
    /// never asserted: the clause system and that design goal disagree for
    /// some (k0, s).
    pub fn derivative_weight_check(&self, model: &ModelPolynomial) -> Result<WeightCheck> {
        let computed = self.min_weight(&model.poly().derivative_z())?;
        let target = rat((self.k0 - 1) as i64);
        Ok(WeightCheck {
            agrees: computed == target,
            computed,
            target,
        })
    }
}

/// A logged comparison between a computed weight and a design target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCheck {
    /// The minimum weight the table actually assigns.
    pub computed: BigRational,
    /// The value the grading was designed to hit.
    pub target: BigRational,
    /// Whether the two agree; a false here is diagnostic, not an error.
    pub agrees: bool,
}
