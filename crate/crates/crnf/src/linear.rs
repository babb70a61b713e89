//! Linear automorphisms of a model polynomial.
//!
//! A diagonal linear map (z, w) -> (lambda z, c w) preserves a model P
//! exactly when c * P(z, zbar) = P(lambda z, conj(lambda) zbar). Writing
//! lambda = rho * zeta with rho > 0 and |zeta| = 1, the constraint forces:
//!
//! - zeta^g = 1, where g is the gcd of all differences of (m - n) over the
//!   support of P (the phase group is finite because P has at least two
//!   distinct values of m - n)
//! - c = rho^k0 * mu, where mu = zeta^(m - n) is the common value over the
//!   support; mu is automatically +-1 because real-valued P has conjugate-
//!   symmetric support
//!
//! Only phases that are Gaussian rationals are enumerated explicitly: the
//! gcd(g, 4)-th roots of unity. When g admits other phases, callers must
//! treat a failed search as inconclusive rather than negative.

use crate::poly::BiPoly;
use crate::scalar::ExactScalar;
use crate::surface::ModelPolynomial;

/// Support-derived description of the admissible diagonal scalings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraints {
    /// gcd of support differences of m - n; every admissible phase is a
    /// g-th root of unity.
    pub phase_order: u32,
    /// The admissible phases that are exactly representable (the
    /// gcd(g, 4)-th roots of unity).
    pub exact_phases: Vec<ExactScalar>,
    /// True iff `exact_phases` exhausts the whole phase group (g divides 4).
    pub phases_complete: bool,
    /// Common value of m - n over the support (well defined modulo g);
    /// the w-scaling is c = rho^k0 * zeta^mu_exponent.
    pub mu_exponent: i64,
    /// The model degree: |c| = rho^k0.
    pub k0: u32,
}

/// Computes the scaling constraints for a validated model.
pub fn linear_automorphism_constraints(model: &ModelPolynomial) -> LinearConstraints {
    let diffs: Vec<i64> = model
        .poly()
        .terms()
        .map(|(&(m, n), _)| m as i64 - n as i64)
        .collect();
    let base = diffs[0];
    let mut g: u64 = 0;
    for d in &diffs[1..] {
        g = gcd(g, (d - base).unsigned_abs());
    }
    // A valid model contains z zbar^(k0-1) and its mirror, so differences
    // never all coincide.
    debug_assert!(g > 0);
    let phase_order = u32::try_from(g).expect("exponent differences fit in u32");
    let exact_order = gcd(g, 4) as u32;
    let exact_phases = match exact_order {
        1 => vec![ExactScalar::one()],
        2 => vec![ExactScalar::one(), -ExactScalar::one()],
        4 => vec![
            ExactScalar::one(),
            ExactScalar::i(),
            -ExactScalar::one(),
            -ExactScalar::i(),
        ],
        _ => unreachable!("gcd with 4 is 1, 2, or 4"),
    };
    LinearConstraints {
        phase_order,
        exact_phases,
        phases_complete: phase_order == exact_order,
        mu_exponent: base,
        k0: model.k0(),
    }
}

impl LinearConstraints {
    /// The w-scaling paired with lambda = rho * zeta: c = rho^k0 * mu(zeta).
    pub fn w_scaling(&self, rho: &ExactScalar, zeta: &ExactScalar) -> ExactScalar {
        &rho.pow(self.k0) * &self.mu(zeta)
    }

    /// mu(zeta) = zeta^(m - n) for any support exponent pair.
    pub fn mu(&self, zeta: &ExactScalar) -> ExactScalar {
        if self.mu_exponent >= 0 {
            zeta.pow(self.mu_exponent as u32)
        } else {
            zeta.pow(self.mu_exponent.unsigned_abs() as u32).recip()
        }
    }

    /// Checks directly that (lambda, c) is an automorphism of `model`:
    /// c P(z, zbar) = P(lambda z, conj(lambda) zbar).
    pub fn verifies(model: &ModelPolynomial, lambda: &ExactScalar, c: &ExactScalar) -> bool {
        let transformed = BiPoly::from_terms(model.poly().terms().map(|(&(m, n), coeff)| {
            ((m, n), coeff * &lambda.pow(m) * &lambda.conj().pow(n))
        }));
        transformed == model.poly().scaled(c)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_model_admits_exactly_real_scalings() {
        let m = ModelPolynomial::standard(3).unwrap();
        let c = linear_automorphism_constraints(&m);
        assert_eq!(c.phase_order, 2);
        assert!(c.phases_complete);
        assert_eq!(
            c.exact_phases,
            vec![ExactScalar::one(), -ExactScalar::one()]
        );
        // lambda = rho * (+-1) with c = lambda^3: check both phases at rho = 2.
        let rho = ExactScalar::from_int(2);
        for zeta in &c.exact_phases {
            let lambda = &rho * zeta;
            let cw = c.w_scaling(&rho, zeta);
            assert_eq!(cw, lambda.pow(3));
            assert!(LinearConstraints::verifies(&m, &lambda, &cw));
        }
    }

    #[test]
    fn quartic_model_admits_quarter_turns() {
        let m = ModelPolynomial::standard(4).unwrap();
        let c = linear_automorphism_constraints(&m);
        assert_eq!(c.phase_order, 4);
        assert!(c.phases_complete);
        assert_eq!(c.exact_phases.len(), 4);
        // Real lambda = rho scales w by rho^4.
        let rho = ExactScalar::from_int(3);
        let cw = c.w_scaling(&rho, &ExactScalar::one());
        assert_eq!(cw, ExactScalar::from_int(81));
        assert!(LinearConstraints::verifies(&m, &rho, &cw));
        // The quarter turn also works: mu(i) = i^(3-1) = -1.
        let lambda = &rho * &ExactScalar::i();
        let cw = c.w_scaling(&rho, &ExactScalar::i());
        assert_eq!(cw, ExactScalar::from_int(-81));
        assert!(LinearConstraints::verifies(&m, &lambda, &cw));
    }

    #[test]
    fn identity_is_always_admissible() {
        for k0 in [3u32, 4, 5, 6] {
            let m = ModelPolynomial::standard(k0).unwrap();
            let c = linear_automorphism_constraints(&m);
            let one = ExactScalar::one();
            assert_eq!(c.w_scaling(&one, &one), one);
            assert!(LinearConstraints::verifies(&m, &one, &one));
        }
    }
}
