//! Sparse series in z and w, graded by normal weight.
//!
//! [`WJet`] represents sums of c z^k w^l. The natural grading here is the
//! normal weight k + k0 * l (z counts 1, w counts k0), with k0 supplied by
//! the context of use. Invariants:
//!
//! - zero coefficients are never stored
//! - `weight_bound` is `u32::MAX` for unbounded series; bounded values are
//!   produced by [`WJet::truncated_to_weight`], which needs a concrete k0

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Jet};
use crate::scalar::ExactScalar;
use std::collections::BTreeMap;
use std::fmt;

/// Finitely supported series over monomials z^k w^l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WJet {
    terms: BTreeMap<(u32, u32), ExactScalar>,
    weight_bound: u32,
}

impl WJet {
    /// Empty series with no weight restriction.
    pub fn zero() -> Self {
        WJet {
            terms: BTreeMap::new(),
            weight_bound: u32::MAX,
        }
    }

    /// Single term c z^k w^l.
    pub fn monomial(k: u32, l: u32, c: ExactScalar) -> Self {
        let mut h = WJet::zero();
        h.add_to_coeff(k, l, &c);
        h
    }

    /// Sums an iterator of terms.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ExactScalar)>>(iter: I) -> Self {
        let mut h = WJet::zero();
        for ((k, l), c) in iter {
            h.add_to_coeff(k, l, &c);
        }
        h
    }

    /// Coefficient at (k, l); exact zero when absent.
    pub fn coeff(&self, k: u32, l: u32) -> ExactScalar {
        self.terms
            .get(&(k, l))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Adds into one coefficient.
    pub fn add_to_coeff(&mut self, k: u32, l: u32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.coeff(k, l);
        let next = &cur + c;
        if next.is_zero() {
            self.terms.remove(&(k, l));
        } else {
            self.terms.insert((k, l), next);
        }
    }

    /// Iterates the support in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True for the empty series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Declared weight bound (`u32::MAX` when unbounded).
    pub fn weight_bound(&self) -> u32 {
        self.weight_bound
    }

    /// Pointwise sum; the bound is the smaller of the two.
    pub fn add(&self, rhs: &WJet) -> WJet {
        let mut out = self.clone();
        out.weight_bound = self.weight_bound.min(rhs.weight_bound);
        for (&(k, l), c) in &rhs.terms {
            out.add_to_coeff(k, l, c);
        }
        out
    }

    /// Scales every coefficient.
    pub fn scaled(&self, c: &ExactScalar) -> WJet {
        if c.is_zero() {
            let mut out = WJet::zero();
            out.weight_bound = self.weight_bound;
            return out;
        }
        WJet {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            weight_bound: self.weight_bound,
        }
    }

    /// Exact product of two finite series (no truncation).
    pub fn mul(&self, rhs: &WJet) -> WJet {
        let mut out = WJet::zero();
        for (&(ak, al), ac) in &self.terms {
            for (&(bk, bl), bc) in &rhs.terms {
                out.add_to_coeff(ak + bk, al + bl, &(ac * bc));
            }
        }
        out
    }

    /// Drops terms with k + k0 * l above `bound` and records the bound.
    pub fn truncated_to_weight(&self, k0: u32, bound: u32) -> WJet {
        WJet {
            terms: self
                .terms
                .iter()
                .filter(|(&(k, l), _)| normal_weight(k0, k, l) <= bound)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            weight_bound: bound,
        }
    }

    /// Smallest normal weight over the support; `None` when empty.
    pub fn min_weight(&self, k0: u32) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(k, l)| normal_weight(k0, k, l))
            .min()
    }
}

/// Normal weight of z^k w^l: z counts 1 and w counts k0.
pub fn normal_weight(k0: u32, k: u32, l: u32) -> u32 {
    k.saturating_add(l.saturating_mul(k0))
}

/// Substitutes a graph for w: returns sum_{k,l} h_{k,l} z^k q^l as a jet
/// truncated to `q.order()`.
///
/// Requires every term of `q` to have total degree at least k0, so the
/// substituted monomial z^k w^l contributes total degree at least k + k0*l.
pub fn compose_graph(h: &WJet, q: &Jet, k0: u32) -> Result<Jet> {
    if let Some(d) = q.poly().min_degree() {
        if d < k0 {
            return Err(Error::DegreeViolation { k0 });
        }
    }
    let order = q.order();
    let mut q_pows: Vec<Jet> = vec![Jet::new(
        BiPoly::monomial(0, 0, ExactScalar::one()),
        order,
    )];
    let mut out = Jet::zero(order);
    for (&(k, l), c) in &h.terms {
        if normal_weight(k0, k, l) > order {
            continue;
        }
        while q_pows.len() <= l as usize {
            let next = q_pows.last().unwrap() * q;
            q_pows.push(next);
        }
        let lifted = q_pows[l as usize].poly().shifted(k, 0).scaled(c);
        out = &out + &Jet::new(lifted, order);
    }
    Ok(out)
}

/// Splits a series into its normal-weight components, ascending.
pub fn normal_weight_components(h: &WJet, k0: u32) -> Vec<(u32, WJet)> {
    let mut buckets: BTreeMap<u32, WJet> = BTreeMap::new();
    for (&(k, l), c) in &h.terms {
        buckets
            .entry(normal_weight(k0, k, l))
            .or_insert_with(WJet::zero)
            .add_to_coeff(k, l, c);
    }
    buckets.into_iter().collect()
}

impl fmt::Display for WJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (&(k, l), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let monomial = match (k, l) {
                (0, 0) => String::new(),
                (_, 0) if k == 1 => "z".into(),
                (_, 0) => format!("z^{}", k),
                (0, _) if l == 1 => "w".into(),
                (0, _) => format!("w^{}", l),
                _ => {
                    let zs = if k == 1 { "z".into() } else { format!("z^{}", k) };
                    let ws = if l == 1 { "w".into() } else { format!("w^{}", l) };
                    format!("{}*{}", zs, ws)
                }
            };
            let coeff = c.to_string();
            if monomial.is_empty() {
                write!(f, "({})", coeff)?;
            } else if coeff == "1" {
                write!(f, "{}", monomial)?;
            } else if coeff.contains('+') || coeff.contains(" - ") || coeff.contains('-') {
                write!(f, "({})*{}", coeff, monomial)?;
            } else {
                write!(f, "{}*{}", coeff, monomial)?;
            }
        }
        Ok(())
    }
}
