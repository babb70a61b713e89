//! Sparse bivariate polynomials in (z, zbar) and their truncations.
//!
//! [`BiPoly`] maps exponent pairs (m, n) to nonzero [`ExactScalar`]
//! coefficients; [`Jet`] pairs a polynomial with a truncation order.
//! Invariants:
//!
//! - zero coefficients are never stored; looking up an absent key is zero
//! - a `Jet`'s polynomial has no term of total degree above its order
//! - every binary `Jet` operation truncates to the smaller operand order
//!
//! The module also hosts the Taylor-shift composition engine used for
//! coordinate changes: substituting z -> z + v, zbar -> zbar + vbar into a
//! polynomial, where v and vbar have no constant or linear part.

use crate::scalar::ExactScalar;
use num::{BigInt, BigRational, One};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact factorial.
pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Exact binomial coefficient; zero when k > n.
pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Falling factorial n (n-1) ... (n-k+1).
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    acc
}

/// Finitely supported polynomial in z and zbar.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

impl BiPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        BiPoly::default()
    }

    /// Single monomial c z^m zbar^n.
    pub fn monomial(m: u32, n: u32, c: ExactScalar) -> Self {
        let mut p = BiPoly::zero();
        p.set_coeff(m, n, c);
        p
    }

    /// Sums an iterator of terms, dropping zeros and merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ExactScalar)>>(iter: I) -> Self {
        let mut p = BiPoly::zero();
        for ((m, n), c) in iter {
            p.add_to_coeff(m, n, &c);
        }
        p
    }

    /// Coefficient at (m, n); exact zero when absent.
    pub fn coeff(&self, m: u32, n: u32) -> ExactScalar {
        self.terms
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Overwrites one coefficient, removing the key when it becomes zero.
    pub fn set_coeff(&mut self, m: u32, n: u32, c: ExactScalar) {
        if c.is_zero() {
            self.terms.remove(&(m, n));
        } else {
            self.terms.insert((m, n), c);
        }
    }

    /// Adds into one coefficient.
    pub fn add_to_coeff(&mut self, m: u32, n: u32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.coeff(m, n);
        self.set_coeff(m, n, &cur + c);
    }

    /// Iterates the support in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactScalar)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max total degree over the support; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(m, n)| m + n).max()
    }

    /// Min total degree over the support; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(m, n)| m + n).min()
    }

    /// Total degree if all terms share it; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        if self.min_degree() == Some(d) {
            Some(d)
        } else {
            None
        }
    }

    /// Sub-polynomial of one total degree.
    pub fn homogeneous_part(&self, d: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(m, n), _)| m + n == d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Drops all terms of total degree above `order`.
    pub fn truncated(&self, order: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(m, n), _)| m + n <= order)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Formal conjugate: coefficient at (m, n) is the conjugate of (n, m).
    pub fn conjugate(&self) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(m, n), c)| ((n, m), c.conj()))
                .collect(),
        }
    }

    /// True iff the polynomial equals its formal conjugate.
    pub fn is_real_valued(&self) -> bool {
        self == &self.conjugate()
    }

    /// Scales every coefficient.
    pub fn scaled(&self, c: &ExactScalar) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    /// Multiplies by the monomial z^dm zbar^dn.
    pub fn shifted(&self, dm: u32, dn: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(m, n), c)| ((m + dm, n + dn), c.clone()))
                .collect(),
        }
    }

    /// Formal z-derivative.
    pub fn derivative_z(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(m, n), c) in &self.terms {
            if m > 0 {
                out.add_to_coeff(m - 1, n, &c.scale_rat(&BigRational::from_integer(m.into())));
            }
        }
        out
    }

    /// Schoolbook product truncated to `order` (pass `u32::MAX` for exact).
    pub fn mul_truncated(&self, rhs: &BiPoly, order: u32) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(am, an), ac) in &self.terms {
            if am + an > order {
                continue;
            }
            for (&(bm, bn), bc) in &rhs.terms {
                let (m, n) = (am + bm, an + bn);
                if m + n > order {
                    continue;
                }
                out.add_to_coeff(m, n, &(ac * bc));
            }
        }
        out
    }

    /// Renders the (j, k) Taylor coefficient extractor: the polynomial
    /// sum_{a,b} C(a,j) C(b,k) c_{a,b} z^{a-j} zbar^{b-k}, so that
    /// W(z + v, zbar + vb) = sum_{j,k} taylor_component(W, j, k) v^j vb^k.
    pub fn taylor_component(&self, j: u32, k: u32) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a, b), c) in &self.terms {
            if a < j || b < k {
                continue;
            }
            let w = binomial(a, j) * binomial(b, k);
            out.add_to_coeff(a - j, b - k, &c.scale_rat(&BigRational::from_integer(w)));
        }
        out
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_to_coeff(m, n, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(m, n), c) in &rhs.terms {
            out.add_to_coeff(m, n, &-c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.mul_truncated(rhs, u32::MAX)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Sort by (total degree, z-exponent) so output is stable and readable.
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(m, n)| (m + n, std::cmp::Reverse(m)));
        for (idx, (m, n)) in keys.iter().copied().enumerate() {
            let mut coeff = self.terms[&(m, n)].to_string();
            let needs_parens = coeff.contains('+') || coeff.contains(" - ");
            if idx > 0 {
                if !needs_parens && coeff.starts_with('-') {
                    write!(f, " - ")?;
                    coeff.remove(0);
                } else {
                    write!(f, " + ")?;
                }
            }
            let monomial = match (m, n) {
                (0, 0) => String::new(),
                (_, 0) if m == 1 => "z".into(),
                (_, 0) => format!("z^{}", m),
                (0, _) if n == 1 => "zb".into(),
                (0, _) => format!("zb^{}", n),
                _ => {
                    let zs = if m == 1 { "z".into() } else { format!("z^{}", m) };
                    let bs = if n == 1 { "zb".into() } else { format!("zb^{}", n) };
                    format!("{}*{}", zs, bs)
                }
            };
            if monomial.is_empty() {
                if needs_parens {
                    write!(f, "({})", coeff)?;
                } else {
                    write!(f, "{}", coeff)?;
                }
            } else if coeff == "1" {
                write!(f, "{}", monomial)?;
            } else if coeff == "-1" {
                write!(f, "-{}", monomial)?;
            } else if needs_parens {
                write!(f, "({})*{}", coeff, monomial)?;
            } else {
                write!(f, "{}*{}", coeff, monomial)?;
            }
        }
        Ok(())
    }
}

/// Polynomial truncated at a fixed total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    poly: BiPoly,
    order: u32,
}

impl Jet {
    /// Wraps a polynomial, truncating it to `order`.
    pub fn new(poly: BiPoly, order: u32) -> Self {
        Jet {
            poly: poly.truncated(order),
            order,
        }
    }

    /// The zero jet.
    pub fn zero(order: u32) -> Self {
        Jet {
            poly: BiPoly::zero(),
            order,
        }
    }

    /// The identity coordinate z as a jet.
    pub fn identity_z(order: u32) -> Self {
        Jet::new(BiPoly::monomial(1, 0, ExactScalar::one()), order)
    }

    /// Underlying polynomial.
    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    /// Truncation order.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Re-truncates to a smaller order.
    pub fn truncated(&self, order: u32) -> Jet {
        Jet::new(self.poly.truncated(order), order)
    }

    /// True for the zero jet.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::new(&self.poly + &rhs.poly, order)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::new(&self.poly - &rhs.poly, order)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet {
            poly: self.poly.mul_truncated(&rhs.poly, order),
            order,
        }
    }
}

/// Substitutes z -> z + v, zbar -> zbar + vb into `w`, truncating to `order`.
///
/// Requires min_degree(v), min_degree(vb) >= 2 (or v, vb zero); under that
/// assumption the double Taylor sum below is finite and exact.
pub fn compose_shift(w: &BiPoly, v: &BiPoly, vb: &BiPoly, order: u32) -> BiPoly {
    let w = w.truncated(order);
    if v.is_zero() && vb.is_zero() {
        return w;
    }
    let dv = v.min_degree().unwrap_or(u32::MAX);
    let dvb = vb.min_degree().unwrap_or(u32::MAX);
    debug_assert!(dv >= 2 && dvb >= 2, "shift parts must start at degree 2");
    let wmin = match w.min_degree() {
        Some(d) => d,
        None => return BiPoly::zero(),
    };
    let max_z = w.terms().map(|(&(a, _), _)| a).max().unwrap_or(0);
    let max_zb = w.terms().map(|(&(_, b), _)| b).max().unwrap_or(0);

    // Degree of a (j, k) summand is at least wmin + j(dv - 1) + k(dvb - 1),
    // so both loops terminate quickly once the shift parts start at degree 2.
    let grow_v = dv.saturating_sub(1).max(1);
    let grow_vb = dvb.saturating_sub(1).max(1);

    let mut v_pows: Vec<BiPoly> = vec![BiPoly::monomial(0, 0, ExactScalar::one())];
    let mut vb_pows: Vec<BiPoly> = vec![BiPoly::monomial(0, 0, ExactScalar::one())];

    let mut out = BiPoly::zero();
    let mut j = 0;
    while j <= max_z && wmin.saturating_add(j * grow_v) <= order {
        while v_pows.len() <= j as usize {
            let next = v_pows.last().unwrap().mul_truncated(v, order);
            v_pows.push(next);
        }
        let mut k = 0;
        while k <= max_zb && wmin.saturating_add(j * grow_v + k * grow_vb) <= order {
            while vb_pows.len() <= k as usize {
                let next = vb_pows.last().unwrap().mul_truncated(vb, order);
                vb_pows.push(next);
            }
            let comp = w.taylor_component(j, k);
            if !comp.is_zero() {
                let factor = v_pows[j as usize].mul_truncated(&vb_pows[k as usize], order);
                out = &out + &comp.mul_truncated(&factor, order);
            }
            k += 1;
        }
        j += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    pub(crate) fn model_cubic() -> BiPoly {
        // z^2 zb + z zb^2
        BiPoly::from_terms([((2, 1), sc(1)), ((1, 2), sc(1))])
    }

    #[test]
    fn difference_of_squares() {
        let a = Jet::new(BiPoly::from_terms([((1, 0), sc(1)), ((0, 1), sc(1))]), 4);
        let b = Jet::new(BiPoly::from_terms([((1, 0), sc(1)), ((0, 1), sc(-1))]), 4);
        let expect = BiPoly::from_terms([((2, 0), sc(1)), ((0, 2), sc(-1))]);
        assert_eq!((&a * &b).poly(), &expect);
    }

    #[test]
    fn truncation_kills_high_degrees() {
        let a = Jet::new(BiPoly::monomial(2, 0, sc(1)), 3);
        assert!((&a * &a).is_zero());
    }

    #[test]
    fn model_square_expands() {
        let p = Jet::new(model_cubic(), 6);
        let expect = BiPoly::from_terms([((4, 2), sc(1)), ((3, 3), sc(2)), ((2, 4), sc(1))]);
        assert_eq!((&p * &p).poly(), &expect);
    }

    #[test]
    fn conjugate_swaps_exponents() {
        let p = BiPoly::monomial(2, 1, ExactScalar::i());
        assert_eq!(p.conjugate(), BiPoly::monomial(1, 2, -ExactScalar::i()));
        assert!(model_cubic().is_real_valued());
    }

    #[test]
    fn taylor_components_rebuild_binomials() {
        // (z + v)^3 expansion: component (j, 0) of z^3 is C(3, j) z^{3-j}.
        let w = BiPoly::monomial(3, 0, sc(1));
        assert_eq!(w.taylor_component(2, 0), BiPoly::monomial(1, 0, sc(3)));
        assert_eq!(w.taylor_component(3, 0), BiPoly::monomial(0, 0, sc(1)));
        assert!(w.taylor_component(1, 1).is_zero());
    }

    #[test]
    fn compose_shift_matches_direct_expansion() {
        // w = z^2, v = z^2: (z + z^2)^2 = z^2 + 2z^3 + z^4
        let w = BiPoly::monomial(2, 0, sc(1));
        let v = BiPoly::monomial(2, 0, sc(1));
        let got = compose_shift(&w, &v, &BiPoly::zero(), 4);
        let expect =
            BiPoly::from_terms([((2, 0), sc(1)), ((3, 0), sc(2)), ((4, 0), sc(1))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn display_orders_terms_by_degree() {
        let p = BiPoly::from_terms([((0, 4), sc(1)), ((2, 1), sc(1)), ((1, 2), sc(-2))]);
        assert_eq!(p.to_string(), "z^2*zb - 2*z*zb^2 + zb^4");
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i64..=5), 0..6).prop_map(|terms| {
            BiPoly::from_terms(
                terms
                    .into_iter()
                    .map(|((m, n), c)| ((m, n), ExactScalar::from_int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws_hold(a in small_poly(), b in small_poly(), c in small_poly()) {
            let order = 8u32;
            let ja = Jet::new(a.clone(), order);
            let jb = Jet::new(b.clone(), order);
            let jc = Jet::new(c.clone(), order);
            prop_assert_eq!(&ja * &jb, &jb * &ja);
            prop_assert_eq!(&(&ja * &jb) * &jc, &ja * &(&jb * &jc));
            prop_assert_eq!(&ja * &(&jb + &jc), &(&ja * &jb) + &(&ja * &jc));
        }

        #[test]
        fn conjugation_is_a_ring_map(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        }
    }
}
