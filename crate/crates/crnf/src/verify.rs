//! Independent verification of normal forms and formal-equivalence checking.
//!
//! The verifier re-derives every membership residual from the plain
//! division-chain primitives, deliberately bypassing the normalizer's
//! cached eliminations, so that a bug in the cache layer cannot certify
//! its own output. Equivalence checking rides on uniqueness: two surfaces
//! are equivalent under tangent-to-identity maps exactly when their normal
//! forms agree coefficient-for-coefficient, and linear mode additionally
//! quotients by the diagonal scalings preserving the shared model; scaled
//! candidates are re-normalized before comparison because the truncation-
//! boundary pin is not scaling-equivariant. Invariants:
//!
//! - a verdict of equivalent or inequivalent is exact and final; every
//!   approximation barrier (irrational modulus, non-representable phase)
//!   surfaces as undecided with the blocking condition spelled out
//! - verification never mutates its input and holds no caches

use crate::error::{Error, Result};
use crate::fischer::{sn_residual, SnResidual};
use crate::linear::linear_automorphism_constraints;
use crate::normalize::{boundary_families, normalize, resonance_schedule};
use crate::poly::BiPoly;
use crate::scalar::ExactScalar;
use crate::surface::{surface_invariants, SurfaceJet};
use num::{BigInt, BigRational};

/// One degree's membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    /// The degree checked.
    pub degree: u32,
    /// The recomputed residual entries.
    pub residual: SnResidual,
    /// True iff every entry is zero.
    pub pass: bool,
}

/// One resonance target's check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceTargetCheck {
    /// Scheduled degree k.
    pub degree: u32,
    /// The coefficient a_{0,k} found on the surface.
    pub coefficient: ExactScalar,
    /// True iff the coefficient is exactly zero.
    pub pass: bool,
}

/// Full audit of whether a surface satisfies the normal-form conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// Membership checks for every degree in the tail window.
    pub per_degree: Vec<DegreeCheck>,
    /// Resonance-target checks; None when no zbar-pure coefficient exists
    /// within the truncation, which leaves the schedule undefined.
    pub resonance_targets: Option<Vec<ResonanceTargetCheck>>,
    /// Conjunction of every pass flag.
    pub overall: bool,
}

/// Recomputes every normal-form condition on `surface` from scratch.
pub fn verify_normal_form(surface: &SurfaceJet) -> Result<VerificationReport> {
    let k0 = surface.k0();
    let order = surface.order();
    let p = surface.model().poly();
    let mut overall = true;
    let mut per_degree = Vec::with_capacity((order - k0) as usize);
    for t in k0 + 1..=order {
        let part = surface.tail_part(t);
        let residual = if part.is_zero() {
            SnResidual::trivial(t, k0)
        } else {
            sn_residual(p, &part)?
        };
        let pass = residual.is_zero();
        overall &= pass;
        per_degree.push(DegreeCheck {
            degree: t,
            residual,
            pass,
        });
    }
    let resonance_targets = surface_invariants(surface).s.map(|s| {
        resonance_schedule(k0, s, order)
            .iter()
            .map(|event| {
                let coefficient = surface.tail_coeff(0, event.degree);
                let pass = coefficient.is_zero();
                overall &= pass;
                ResonanceTargetCheck {
                    degree: event.degree,
                    coefficient,
                    pass,
                }
            })
            .collect()
    });
    Ok(VerificationReport {
        per_degree,
        resonance_targets,
        overall,
    })
}

/// Which group of formal transformations an equivalence question quotients by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivMode {
    /// Maps tangent to the identity only.
    Tangent,
    /// Tangent-to-identity maps composed with model-preserving scalings.
    Linear,
}

/// Outcome of an equivalence check, with a human-readable certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    /// A transformation between the two surfaces exists.
    Equivalent { certificate: String },
    /// No transformation exists; the certificate names a separating datum.
    Inequivalent { certificate: String },
    /// The search hit a barrier that exact arithmetic cannot cross.
    Undecided { certificate: String },
}

/// Exact n-th root of a positive rational, when one exists.
pub fn rational_nth_root(value: &BigRational, n: u32) -> Option<BigRational> {
    fn int_root(v: &BigInt, n: u32) -> Option<BigInt> {
        let root = v.nth_root(n);
        (root.pow(n) == *v).then_some(root)
    }
    if value.numer().sign() != num::bigint::Sign::Plus {
        return None;
    }
    let numer = int_root(value.numer(), n)?;
    let denom = int_root(value.denom(), n)?;
    Some(BigRational::new(numer, denom))
}

fn scaled_tail(tail: &BiPoly, lambda: &ExactScalar, c: &ExactScalar) -> BiPoly {
    let li = lambda.recip();
    let lci = lambda.conj().recip();
    BiPoly::from_terms(
        tail.terms()
            .map(|(&(m, n), a)| ((m, n), &(c * a) * &(&li.pow(m) * &lci.pow(n)))),
    )
}

fn first_tail_difference(a: &BiPoly, b: &BiPoly) -> Option<((u32, u32), ExactScalar, ExactScalar)> {
    let mut keys: Vec<(u32, u32)> = a.terms().map(|(&k, _)| k).collect();
    keys.extend(b.terms().map(|(&k, _)| k));
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|(m, n)| {
        let (ca, cb) = (a.coeff(m, n), b.coeff(m, n));
        (ca != cb).then_some(((m, n), ca, cb))
    })
}

/// Decides formal equivalence of two surface jets at their shared order.
pub fn equiv_check(a: &SurfaceJet, b: &SurfaceJet, mode: EquivMode) -> Result<EquivVerdict> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch);
    }
    if a.k0() != b.k0() {
        return Ok(EquivVerdict::Inequivalent {
            certificate: format!(
                "singularity degrees differ: k0 = {} vs {}",
                a.k0(),
                b.k0()
            ),
        });
    }
    let na = normalize(a)?;
    let nb = normalize(b)?;
    if na.report.s != nb.report.s {
        return Ok(EquivVerdict::Inequivalent {
            certificate: format!(
                "leading zbar-pure degrees differ: s = {} vs {}",
                na.report.s, nb.report.s
            ),
        });
    }
    if na.report.alpha != nb.report.alpha {
        return Ok(EquivVerdict::Inequivalent {
            certificate: format!(
                "model division invariants differ: alpha = {} vs {}",
                na.report.alpha, nb.report.alpha
            ),
        });
    }
    let fa = &na.normal_form;
    let fb = &nb.normal_form;
    if fa == fb {
        return Ok(EquivVerdict::Equivalent {
            certificate: format!(
                "normal forms agree coefficient-for-coefficient at order {}",
                a.order()
            ),
        });
    }
    if mode == EquivMode::Tangent {
        let certificate = if fa.model().poly() != fb.model().poly() {
            "models differ; tangent-to-identity maps preserve the model exactly".to_string()
        } else {
            let ((m, n), ca, cb) =
                first_tail_difference(fa.tail(), fb.tail()).expect("unequal normal forms differ");
            format!("normal forms differ at ({}, {}): {} vs {}", m, n, ca, cb)
        };
        return Ok(EquivVerdict::Inequivalent { certificate });
    }

    // Linear mode: search the model-preserving scalings.
    if fa.model().poly() != fb.model().poly() {
        return Ok(EquivVerdict::Undecided {
            certificate: "models differ; only scalings preserving a shared model are searched"
                .to_string(),
        });
    }
    let s = na.report.s;
    let k0 = a.k0();
    // Below the first truncation-boundary family the normal form is rigid,
    // so a support mismatch there separates the surfaces. At and above it
    // the re-pinned scaled candidate may create or destroy terms.
    let boundary_start = boundary_families(k0, s, a.order())
        .first()
        .map(|f| f.first_degree)
        .unwrap_or(a.order() + 1);
    if let Some((m, n)) = first_support_mismatch(fa.tail(), fb.tail(), boundary_start) {
        return Ok(EquivVerdict::Inequivalent {
            certificate: format!(
                "coefficient supports differ at ({}, {}); scalings never create or destroy terms",
                m, n
            ),
        });
    }
    let ca = fa.tail_coeff(0, s);
    let cb = fb.tail_coeff(0, s);
    let ratio = ca.norm_sqr() / cb.norm_sqr();
    let exponent = 2 * (s - k0);
    let rho = match rational_nth_root(&ratio, exponent) {
        Some(rho) => rho,
        None => {
            return Ok(EquivVerdict::Undecided {
                certificate: format!(
                    "required scaling modulus is irrational: rho^{} = {} has no rational solution",
                    exponent, ratio
                ),
            })
        }
    };
    let constraints = linear_automorphism_constraints(fa.model());
    let rho_scalar = ExactScalar::from_rational(rho.clone());
    for zeta in &constraints.exact_phases {
        let lambda = &rho_scalar * zeta;
        let c = constraints.w_scaling(&rho_scalar, zeta);
        // The truncation-boundary pin is not scaling-equivariant, so the
        // scaled candidate is re-normalized (a cheap run: only the pins
        // move) before the exact comparison.
        let scaled = SurfaceJet::new(
            fa.model().clone(),
            a.order(),
            scaled_tail(fa.tail(), &lambda, &c),
        )?;
        if normalize(&scaled)?.normal_form == *fb {
            return Ok(EquivVerdict::Equivalent {
                certificate: format!(
                    "scaling z -> ({}) z, w -> ({}) w maps one normal form onto the other",
                    lambda, c
                ),
            });
        }
    }
    if constraints.phases_complete {
        Ok(EquivVerdict::Inequivalent {
            certificate: format!(
                "no admissible scaling matches: modulus pinned to {} and all {} phases tested",
                rho,
                constraints.exact_phases.len()
            ),
        })
    } else {
        Ok(EquivVerdict::Undecided {
            certificate: format!(
                "no exactly representable phase matches, but the phase group has order {} and contains phases outside the Gaussian rationals",
                constraints.phase_order
            ),
        })
    }
}

fn first_support_mismatch(a: &BiPoly, b: &BiPoly, below: u32) -> Option<(u32, u32)> {
    let mut keys: Vec<(u32, u32)> = a
        .terms()
        .chain(b.terms())
        .map(|(&k, _)| k)
        .filter(|&(m, n)| m + n < below)
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .find(|&(m, n)| a.coeff(m, n).is_zero() != b.coeff(m, n).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{apply_map, TangentIdentityMap};
    use crate::normalize::{corrective_map, ResonanceCase};
    use crate::surface::ModelPolynomial;
    use crate::wjet::WJet;

    fn sc(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn cubic(order: u32, tail_terms: &[((u32, u32), ExactScalar)]) -> SurfaceJet {
        let model = ModelPolynomial::standard(3).unwrap();
        let mut tail = BiPoly::zero();
        for ((m, n), c) in tail_terms {
            tail.add_to_coeff(*m, *n, c);
        }
        SurfaceJet::new(model, order, tail).unwrap()
    }

    #[test]
    fn normalizer_output_verifies() {
        let surface = cubic(
            8,
            &[((0, 4), sc(1)), ((3, 1), sc(2)), ((2, 3), ExactScalar::i())],
        );
        let result = normalize(&surface).unwrap();
        let report = verify_normal_form(&result.normal_form).unwrap();
        assert!(report.overall);
        assert!(report.per_degree.iter().all(|d| d.pass));
        let targets = report.resonance_targets.expect("s = 4 is defined");
        assert_eq!(
            targets.iter().map(|t| t.degree).collect::<Vec<_>>(),
            vec![6, 8]
        );
        assert!(targets.iter().all(|t| t.pass));
    }

    #[test]
    fn z3zb_tail_fails_at_degree_four() {
        let surface = cubic(4, &[((3, 1), sc(1))]);
        let report = verify_normal_form(&surface).unwrap();
        assert!(!report.overall);
        let entry = &report.per_degree[0];
        assert_eq!(entry.degree, 4);
        assert!(!entry.pass);
        assert!(entry
            .residual
            .values()
            .contains(&ExactScalar::from_ratio(5, 7)));
        assert!(report.resonance_targets.is_none(), "no zbar-pure data");
    }

    #[test]
    fn model_only_surface_is_vacuously_normal() {
        let surface = cubic(8, &[]);
        let report = verify_normal_form(&surface).unwrap();
        assert!(report.overall);
        assert!(report.per_degree.iter().all(|d| d.pass));
        assert!(report.resonance_targets.is_none());
    }

    #[test]
    fn equivalence_is_reflexive() {
        let surface = cubic(8, &[((0, 4), sc(1)), ((3, 1), sc(1))]);
        let verdict = equiv_check(&surface, &surface, EquivMode::Tangent).unwrap();
        assert!(matches!(verdict, EquivVerdict::Equivalent { .. }));
    }

    #[test]
    fn mapped_surface_is_tangent_equivalent() {
        let surface = cubic(8, &[((0, 4), sc(1)), ((2, 2), sc(3))]);
        let map = TangentIdentityMap::new(
            3,
            WJet::monomial(2, 0, ExactScalar::i()),
            WJet::monomial(0, 2, sc(2)),
        )
        .unwrap();
        let moved = apply_map(&map, &surface).unwrap();
        let verdict = equiv_check(&surface, &moved, EquivMode::Tangent).unwrap();
        assert!(matches!(verdict, EquivVerdict::Equivalent { .. }));
        let back = equiv_check(&moved, &surface, EquivMode::Tangent).unwrap();
        assert!(matches!(back, EquivVerdict::Equivalent { .. }));
    }

    #[test]
    fn distinct_s_is_inequivalent() {
        let a = cubic(8, &[((0, 4), sc(1))]);
        let b = cubic(8, &[((0, 5), sc(1))]);
        for mode in [EquivMode::Tangent, EquivMode::Linear] {
            match equiv_check(&a, &b, mode).unwrap() {
                EquivVerdict::Inequivalent { certificate } => {
                    assert!(certificate.contains("s = 4 vs 5"), "{}", certificate)
                }
                other => panic!("expected inequivalent, got {:?}", other),
            }
        }
    }

    #[test]
    fn dilation_is_linear_but_not_tangent_equivalent() {
        // z -> 2z, w -> 8w sends tail zbar^4 to (1/2) zbar^4.
        let a = cubic(8, &[((0, 4), sc(1))]);
        let b = cubic(8, &[((0, 4), ExactScalar::from_ratio(1, 2))]);
        assert!(matches!(
            equiv_check(&a, &b, EquivMode::Tangent).unwrap(),
            EquivVerdict::Inequivalent { .. }
        ));
        match equiv_check(&a, &b, EquivMode::Linear).unwrap() {
            EquivVerdict::Equivalent { certificate } => {
                assert!(certificate.contains("2"), "{}", certificate)
            }
            other => panic!("expected equivalent, got {:?}", other),
        }
    }

    #[test]
    fn sign_flip_is_in_the_scaling_orbit() {
        // z -> -z, w -> -w preserves the cubic model and negates zbar^4.
        let a = cubic(8, &[((0, 4), sc(1))]);
        let b = cubic(8, &[((0, 4), sc(-1))]);
        assert!(matches!(
            equiv_check(&a, &b, EquivMode::Linear).unwrap(),
            EquivVerdict::Equivalent { .. }
        ));
    }

    #[test]
    fn linear_equivalence_survives_boundary_gauge() {
        // b differs from a by a dilation and by a truncation-boundary
        // family element. At order 9 the family moves two degrees, the
        // dilation weights them differently, and the pin condition does
        // not transport: the scaled candidate must be re-normalized
        // before it can match.
        let a = cubic(
            9,
            &[((0, 4), sc(1)), ((3, 2), sc(2)), ((2, 3), ExactScalar::i())],
        );
        let scaled = SurfaceJet::new(
            a.model().clone(),
            a.order(),
            scaled_tail(a.tail(), &sc(2), &sc(8)),
        )
        .unwrap();
        let gauge = corrective_map(
            ResonanceCase::A,
            3,
            2,
            &ExactScalar::from_ratio(3, 2),
            &ExactScalar::i(),
        )
        .unwrap();
        let b = apply_map(&gauge, &scaled).unwrap();
        match equiv_check(&a, &b, EquivMode::Linear).unwrap() {
            EquivVerdict::Equivalent { certificate } => {
                assert!(certificate.contains("2"), "{}", certificate)
            }
            other => panic!("expected equivalent, got {:?}", other),
        }
    }

    #[test]
    fn incompatible_coefficient_ratios_are_inequivalent() {
        let a = cubic(8, &[((0, 4), sc(1)), ((0, 5), sc(1))]);
        let b = cubic(8, &[((0, 4), sc(1)), ((0, 5), sc(2))]);
        match equiv_check(&a, &b, EquivMode::Linear).unwrap() {
            EquivVerdict::Inequivalent { certificate } => {
                assert!(certificate.contains("phases tested"), "{}", certificate)
            }
            other => panic!("expected inequivalent, got {:?}", other),
        }
    }

    #[test]
    fn irrational_modulus_is_undecided() {
        // Norm ratio 2 forces rho^2 = 2.
        let a = cubic(8, &[((0, 4), &sc(1) + &ExactScalar::i())]);
        let b = cubic(8, &[((0, 4), sc(1))]);
        match equiv_check(&a, &b, EquivMode::Linear).unwrap() {
            EquivVerdict::Undecided { certificate } => {
                assert!(certificate.contains("irrational"), "{}", certificate)
            }
            other => panic!("expected undecided, got {:?}", other),
        }
        // Symmetric in the other direction.
        assert!(matches!(
            equiv_check(&b, &a, EquivMode::Linear).unwrap(),
            EquivVerdict::Undecided { .. }
        ));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = cubic(8, &[((0, 4), sc(1))]);
        let b = cubic(10, &[((0, 4), sc(1))]);
        assert!(matches!(
            equiv_check(&a, &b, EquivMode::Tangent),
            Err(Error::OrderMismatch)
        ));
    }

    #[test]
    fn rational_roots_extract_exactly() {
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        assert_eq!(rational_nth_root(&r(4, 9), 2), Some(r(2, 3)));
        assert_eq!(rational_nth_root(&r(27, 8), 3), Some(r(3, 2)));
        assert_eq!(rational_nth_root(&r(2, 1), 2), None);
        assert_eq!(rational_nth_root(&r(-4, 1), 2), None);
        assert_eq!(rational_nth_root(&r(1, 1), 7), Some(r(1, 1)));
    }
}
