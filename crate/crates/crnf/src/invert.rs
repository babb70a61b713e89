//! Inversion of planar jets tangent to the identity.
//!
//! A planar jet here is a map (z, zbar) -> (phi, conj(phi)) determined by a
//! single series phi = z + u with u starting at total degree 2; the second
//! component is always the formal conjugate of the first. Invariants:
//!
//! - the returned psi satisfies phi(psi, conj(psi)) = z exactly through the
//!   requested order
//! - inversion is a staged fixed point: stage d makes the identity hold
//!   through degree d, so `order - 1` stages suffice

use crate::error::{Error, Result};
use crate::poly::{compose_shift, BiPoly, Jet};
use crate::scalar::ExactScalar;
use std::collections::BTreeSet;

/// Checks that `phi` is z plus terms of total degree at least 2.
fn tangent_defect(phi: &BiPoly) -> Option<String> {
    if phi.coeff(1, 0) != ExactScalar::one() {
        return Some("coefficient of z is not 1".into());
    }
    if !phi.coeff(0, 1).is_zero() {
        return Some("coefficient of zbar is nonzero".into());
    }
    if !phi.coeff(0, 0).is_zero() {
        return Some("constant term is nonzero".into());
    }
    None
}

/// Inverts phi = z + O(2) as a planar jet, exactly through `order`.
pub fn invert_planar_jet(phi: &Jet, order: u32) -> Result<Jet> {
    if let Some(defect) = tangent_defect(phi.poly()) {
        return Err(Error::NotTangentToIdentity(defect));
    }
    let u = &phi.poly().truncated(order) - &BiPoly::monomial(1, 0, ExactScalar::one());
    if u.is_zero() {
        return Ok(Jet::identity_z(order));
    }
    // psi = z + t with t = -u(z + t, zbar + conj(t)); iterate with the
    // truncation degree raised one stage at a time so early stages stay
    // small. Only degrees in the closure of supp(u) under
    // (a, b) -> a + b - 1 can ever appear in t (substituting a degree-a
    // term into one slot of a degree-b monomial trades a z for it), so the
    // other stages are skipped; consecutive equal stages are NOT a stopping
    // signal, gaps re-fill, e.g. supp(u) = {5} needs stages 5, 9, 13, ...
    let support: BTreeSet<u32> = u.terms().map(|(&(m, n), _)| m + n).collect();
    let mut stages: BTreeSet<u32> = support.iter().copied().filter(|&d| d <= order).collect();
    let mut frontier: Vec<u32> = stages.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        for &b in &support {
            let c = a + b - 1;
            if c <= order && stages.insert(c) {
                frontier.push(c);
            }
        }
    }
    let mut t = BiPoly::zero();
    for &stage in &stages {
        t = -&compose_shift(&u, &t, &t.conjugate(), stage);
    }
    Ok(Jet::new(
        &BiPoly::monomial(1, 0, ExactScalar::one()) + &t,
        order,
    ))
}

/// Substitutes psi (and its conjugate) back into phi; zero iff psi inverts phi.
pub fn round_trip_defect(phi: &Jet, psi: &Jet, order: u32) -> BiPoly {
    let t = &psi.poly().truncated(order) - &BiPoly::monomial(1, 0, ExactScalar::one());
    let composed = compose_shift(phi.poly(), &t, &t.conjugate(), order);
    &composed - &BiPoly::monomial(1, 0, ExactScalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn identity_inverts_to_itself() {
        let phi = Jet::identity_z(6);
        assert_eq!(invert_planar_jet(&phi, 6).unwrap(), phi);
    }

    #[test]
    fn holomorphic_quadratic_gives_catalan_signs() {
        // phi = z + z^2 -> psi = z - z^2 + 2z^3 (through order 3)
        let phi = Jet::new(
            BiPoly::from_terms([((1, 0), sc(1)), ((2, 0), sc(1))]),
            3,
        );
        let psi = invert_planar_jet(&phi, 3).unwrap();
        let expect = BiPoly::from_terms([((1, 0), sc(1)), ((2, 0), sc(-1)), ((3, 0), sc(2))]);
        assert_eq!(psi.poly(), &expect);
    }

    #[test]
    fn antiholomorphic_quadratic_round_trips() {
        let phi = Jet::new(
            BiPoly::from_terms([((1, 0), sc(1)), ((0, 2), sc(1))]),
            3,
        );
        let psi = invert_planar_jet(&phi, 3).unwrap();
        assert!(round_trip_defect(&phi, &psi, 3).is_zero());
        // Leading correction flips the sign of the zbar^2 term.
        assert_eq!(psi.poly().coeff(0, 2), sc(-1));
    }

    #[test]
    fn gapped_support_refills_higher_stages() {
        // u = z^3 zb^2 lives at degree 5 alone, yet the inverse needs a
        // correction at degree 9 = 5 + 5 - 1: substituting the degree-5
        // shift back into u gives 3 z^2 t zb^2 + 2 z^3 zb conj(t), so the
        // coefficient of z^5 zb^4 in psi must be 3 + 2 = 5.
        let phi = Jet::new(
            BiPoly::from_terms([((1, 0), sc(1)), ((3, 2), sc(1))]),
            11,
        );
        let psi = invert_planar_jet(&phi, 11).unwrap();
        assert!(round_trip_defect(&phi, &psi, 11).is_zero());
        assert_eq!(psi.poly().coeff(3, 2), sc(-1));
        assert_eq!(psi.poly().coeff(5, 4), sc(5));
    }

    #[test]
    fn rejects_bad_linear_parts() {
        let scaled = Jet::new(BiPoly::monomial(1, 0, sc(2)), 4);
        assert!(matches!(
            invert_planar_jet(&scaled, 4),
            Err(Error::NotTangentToIdentity(_))
        ));
        let skew = Jet::new(
            BiPoly::from_terms([((1, 0), sc(1)), ((0, 1), sc(1))]),
            4,
        );
        assert!(matches!(
            invert_planar_jet(&skew, 4),
            Err(Error::NotTangentToIdentity(_))
        ));
    }

    fn tangent_jet(order: u32) -> impl Strategy<Value = Jet> {
        proptest::collection::vec(((0u32..5, 0u32..5), -3i64..=3, proptest::bool::ANY), 0..5)
            .prop_map(move |terms| {
                let mut p = BiPoly::monomial(1, 0, ExactScalar::one());
                for ((m, n), c, imag) in terms {
                    if m + n < 2 || m + n > order {
                        continue;
                    }
                    let coeff = if imag {
                        ExactScalar::i().scale_rat(&num::BigRational::from_integer(c.into()))
                    } else {
                        ExactScalar::from_int(c)
                    };
                    p.add_to_coeff(m, n, &coeff);
                }
                Jet::new(p, order)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn inversion_round_trips(phi in tangent_jet(8)) {
            let psi = invert_planar_jet(&phi, 8).unwrap();
            prop_assert!(round_trip_defect(&phi, &psi, 8).is_zero());
        }
    }
}
