//! Surface jets and their basic invariants.
//!
//! A surface is a truncated graph w = P(z, zbar) + tail, where P is the
//! validated model part and the tail collects the higher-order complex
//! coefficients. Invariants:
//!
//! - the model is homogeneous of degree k0 >= 3, real-valued, has no pure
//!   terms, and its z zbar^(k0-1) coefficient is 1
//! - the tail has support only in total degrees k0+1 ..= order
//!
//! The two numeric invariants computed here are s, the least zbar-pure tail
//! exponent with a nonzero coefficient, and alpha, the scalar from dividing
//! z P_z by P.

use crate::error::{Error, ModelDefect, NondegeneracyFailure, Result};
use crate::fischer::fischer_decompose;
use crate::poly::{BiPoly, Jet};
use crate::scalar::ExactScalar;

/// Validated model polynomial of degree k0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPolynomial {
    k0: u32,
    poly: BiPoly,
}

impl ModelPolynomial {
    /// Validates a candidate model, reporting every violated rule at once.
    pub fn new(poly: BiPoly, k0: u32) -> Result<Self> {
        if k0 < 3 {
            return Err(Error::DegreeViolation { k0 });
        }
        let mut defects = Vec::new();
        if poly.homogeneous_degree() != Some(k0) {
            defects.push(ModelDefect::NotHomogeneous);
        }
        if !poly.is_real_valued() {
            defects.push(ModelDefect::NotRealValued);
        }
        if !poly.coeff(k0, 0).is_zero() || !poly.coeff(0, k0).is_zero() {
            defects.push(ModelDefect::PureTermPresent);
        }
        if poly.coeff(1, k0 - 1) != ExactScalar::one() {
            defects.push(ModelDefect::LeadingMixedCoefficientNotOne);
        }
        if defects.is_empty() {
            Ok(ModelPolynomial { k0, poly })
        } else {
            Err(Error::ModelInvalid(defects))
        }
    }

    /// Singularity degree k0.
    pub fn k0(&self) -> u32 {
        self.k0
    }

    /// The model as a polynomial.
    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    /// The standard model z^(k0-1) zbar + z zbar^(k0-1) (plus nothing else
    /// for k0 = 3; callers wanting extra mixed terms build their own).
    pub fn standard(k0: u32) -> Result<Self> {
        let poly = BiPoly::from_terms([
            ((k0 - 1, 1), ExactScalar::one()),
            ((1, k0 - 1), ExactScalar::one()),
        ]);
        ModelPolynomial::new(poly, k0)
    }
}

/// Truncated graph of a surface: model plus tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceJet {
    model: ModelPolynomial,
    order: u32,
    tail: BiPoly,
}

impl SurfaceJet {
    /// Builds a surface, checking the tail's degree window.
    pub fn new(model: ModelPolynomial, order: u32, tail: BiPoly) -> Result<Self> {
        let k0 = model.k0();
        if order < k0 + 1 {
            return Err(Error::DegreeOutOfRange(format!(
                "order must be at least {}, got {}",
                k0 + 1,
                order
            )));
        }
        if let Some(d) = tail.min_degree() {
            if d <= k0 {
                return Err(Error::DegreeOutOfRange(format!(
                    "tail term of degree {} overlaps the model (k0 = {})",
                    d, k0
                )));
            }
        }
        if let Some(d) = tail.degree() {
            if d > order {
                return Err(Error::DegreeOutOfRange(format!(
                    "tail term of degree {} exceeds order {}",
                    d, order
                )));
            }
        }
        Ok(SurfaceJet { model, order, tail })
    }

    /// The validated model part.
    pub fn model(&self) -> &ModelPolynomial {
        &self.model
    }

    /// Singularity degree of the model.
    pub fn k0(&self) -> u32 {
        self.model.k0()
    }

    /// Truncation order.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Tail coefficients (degrees k0+1 ..= order).
    pub fn tail(&self) -> &BiPoly {
        &self.tail
    }

    /// One tail coefficient.
    pub fn tail_coeff(&self, m: u32, n: u32) -> ExactScalar {
        self.tail.coeff(m, n)
    }

    /// Full graph polynomial model + tail as a jet.
    pub fn graph(&self) -> Jet {
        Jet::new(&self.model.poly().clone() + &self.tail, self.order)
    }

    /// Rebuilds a surface from a transformed graph, insisting that nothing
    /// appeared below degree k0 and that the degree-k0 part is the model.
    pub fn from_graph(model: &ModelPolynomial, graph: &BiPoly, order: u32) -> Result<Self> {
        let k0 = model.k0();
        if let Some(d) = graph.min_degree() {
            if d < k0 {
                return Err(Error::ModelNotPreserved(format!(
                    "transformed graph has a term of degree {} below k0 = {}",
                    d, k0
                )));
            }
        }
        let head = graph.homogeneous_part(k0);
        if &head != model.poly() {
            return Err(Error::ModelNotPreserved(format!(
                "transformed degree-{} part is {}, expected {}",
                k0,
                head,
                model.poly()
            )));
        }
        let tail = graph - &head;
        SurfaceJet::new(model.clone(), order, tail)
    }

    /// Copy truncated to a smaller order.
    pub fn truncated(&self, order: u32) -> Result<SurfaceJet> {
        SurfaceJet::new(self.model.clone(), order, self.tail.truncated(order))
    }

    /// Degree-d part of the tail.
    pub fn tail_part(&self, d: u32) -> BiPoly {
        self.tail.homogeneous_part(d)
    }

    /// Replaces the tail (used by the normalizer when committing a degree).
    pub fn with_tail(&self, tail: BiPoly) -> Result<SurfaceJet> {
        SurfaceJet::new(self.model.clone(), self.order, tail)
    }
}

/// The invariants s and alpha together with the nondegeneracy verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    /// Least l with a nonzero zbar^l tail coefficient; `None` if there is
    /// none within the truncation.
    pub s: Option<u32>,
    /// Scalar from the division z P_z = alpha P + R.
    pub alpha: ExactScalar,
    /// The division remainder R, annihilated by the adjoint of P.
    pub alpha_remainder: BiPoly,
    /// True iff every nondegeneracy clause holds.
    pub nondegenerate: bool,
    /// The clauses that failed, in a fixed order.
    pub failures: Vec<NondegeneracyFailure>,
}

/// Computes s, alpha, and the nondegeneracy verdict of a surface.
pub fn surface_invariants(surface: &SurfaceJet) -> SurfaceInvariants {
    let k0 = surface.k0();
    let s = (k0 + 1..=surface.order()).find(|&l| !surface.tail_coeff(0, l).is_zero());

    let p = surface.model().poly();
    let z_pz = BiPoly::monomial(1, 0, ExactScalar::one()).mul_truncated(&p.derivative_z(), u32::MAX);
    let split = fischer_decompose(p, &z_pz).expect("model is homogeneous and nonzero");
    let alpha = split.quotient.coeff(0, 0);
    let alpha_remainder = split.remainder;

    let mut failures = Vec::new();
    if s.is_none() {
        failures.push(NondegeneracyFailure::NoSWithinTruncation);
    }
    if alpha.is_zero() {
        failures.push(NondegeneracyFailure::AlphaZero);
    }
    if let Some(s) = s {
        let s_scalar = ExactScalar::from_int(s as i64);
        if alpha == s_scalar {
            failures.push(NondegeneracyFailure::AlphaEqualsS);
        }
        if &alpha * &alpha == s_scalar {
            failures.push(NondegeneracyFailure::AlphaSquaredEqualsS);
        }
    }
    SurfaceInvariants {
        s,
        alpha,
        alpha_remainder,
        nondegenerate: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ModelDefect;

    fn sc(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn cubic_model() -> ModelPolynomial {
        ModelPolynomial::standard(3).unwrap()
    }

    #[test]
    fn standard_cubic_model_validates() {
        let m = cubic_model();
        assert_eq!(m.k0(), 3);
        assert_eq!(
            m.poly(),
            &BiPoly::from_terms([((2, 1), sc(1)), ((1, 2), sc(1))])
        );
    }

    #[test]
    fn pure_terms_are_rejected() {
        let poly = BiPoly::from_terms([
            ((3, 0), sc(1)),
            ((2, 1), sc(1)),
            ((1, 2), sc(1)),
            ((0, 3), sc(1)),
        ]);
        match ModelPolynomial::new(poly, 3) {
            Err(Error::ModelInvalid(defects)) => {
                assert!(defects.contains(&ModelDefect::PureTermPresent));
            }
            other => panic!("expected ModelInvalid, got {:?}", other),
        }
    }

    #[test]
    fn leading_coefficient_must_be_one() {
        let poly = BiPoly::from_terms([((2, 1), sc(2)), ((1, 2), sc(2))]);
        match ModelPolynomial::new(poly, 3) {
            Err(Error::ModelInvalid(defects)) => {
                assert_eq!(defects, vec![ModelDefect::LeadingMixedCoefficientNotOne]);
            }
            other => panic!("expected ModelInvalid, got {:?}", other),
        }
    }

    #[test]
    fn small_k0_is_rejected() {
        let poly = BiPoly::from_terms([((1, 1), sc(1))]);
        assert!(matches!(
            ModelPolynomial::new(poly, 2),
            Err(Error::DegreeViolation { k0: 2 })
        ));
    }

    #[test]
    fn tail_window_is_enforced() {
        let m = cubic_model();
        let bad_low = BiPoly::monomial(1, 1, sc(1));
        assert!(SurfaceJet::new(m.clone(), 8, bad_low).is_err());
        let bad_high = BiPoly::monomial(9, 0, sc(1));
        assert!(SurfaceJet::new(m.clone(), 8, bad_high).is_err());
        let good = BiPoly::monomial(0, 4, sc(1));
        assert!(SurfaceJet::new(m, 8, good).is_ok());
    }

    #[test]
    fn cubic_invariants_match_hand_computation() {
        let m = cubic_model();
        let surface = SurfaceJet::new(m, 12, BiPoly::monomial(0, 4, sc(1))).unwrap();
        let inv = surface_invariants(&surface);
        assert_eq!(inv.s, Some(4));
        assert_eq!(inv.alpha, ExactScalar::from_ratio(3, 2));
        let expect_r = BiPoly::from_terms([
            ((2, 1), ExactScalar::from_ratio(1, 2)),
            ((1, 2), ExactScalar::from_ratio(-1, 2)),
        ]);
        assert_eq!(inv.alpha_remainder, expect_r);
        assert!(inv.nondegenerate);
        assert!(inv.failures.is_empty());
    }

    #[test]
    fn quartic_invariants_match_hand_computation() {
        let m = ModelPolynomial::standard(4).unwrap();
        let surface = SurfaceJet::new(m, 12, BiPoly::monomial(0, 5, sc(1))).unwrap();
        let inv = surface_invariants(&surface);
        assert_eq!(inv.s, Some(5));
        assert_eq!(inv.alpha, sc(2));
        assert!(inv.nondegenerate);
    }

    #[test]
    fn missing_s_marks_degenerate() {
        let m = cubic_model();
        let surface = SurfaceJet::new(m, 12, BiPoly::monomial(5, 1, sc(1))).unwrap();
        let inv = surface_invariants(&surface);
        assert_eq!(inv.s, None);
        assert!(!inv.nondegenerate);
        assert_eq!(
            inv.failures,
            vec![NondegeneracyFailure::NoSWithinTruncation]
        );
    }

    #[test]
    fn graph_round_trips_through_from_graph() {
        let m = cubic_model();
        let tail = BiPoly::from_terms([((0, 4), sc(1)), ((3, 2), sc(-2))]);
        let surface = SurfaceJet::new(m.clone(), 9, tail).unwrap();
        let rebuilt =
            SurfaceJet::from_graph(&m, surface.graph().poly(), surface.order()).unwrap();
        assert_eq!(rebuilt, surface);
    }

    #[test]
    fn from_graph_rejects_model_drift() {
        let m = cubic_model();
        let mut graph = m.poly().clone();
        graph.add_to_coeff(2, 1, &sc(1));
        graph.add_to_coeff(0, 4, &sc(1));
        assert!(matches!(
            SurfaceJet::from_graph(&m, &graph, 8),
            Err(Error::ModelNotPreserved(_))
        ));
    }
}
