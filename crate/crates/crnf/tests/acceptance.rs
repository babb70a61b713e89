//! Acceptance gate: one test per shipped guarantee, exact comparisons only.
//!
//! Every check compares BigRational-backed values for bit equality; there
//! are no tolerances anywhere. Shared fixtures (the seeded reference corpus
//! and its normalization) are computed once and reused, and the two
//! wall-clock budgets are asserted on the single-threaded first computation.
//! Run with `--nocapture` to see one `acceptance NN PASS` line per check.

use crnf::fischer::{adjoint_apply, fischer_decompose, fischer_inner};
use crnf::invert::{invert_planar_jet, round_trip_defect};
use crnf::io::{self, surface_to_file, to_json_string, MapFile, ReportFile, SurfaceFile};
use crnf::map::{apply_map, TangentIdentityMap};
use crnf::normalize::{normalize, NormalizationResult};
use crnf::surface::{surface_invariants, ModelPolynomial, SurfaceJet};
use crnf::verify::verify_normal_form;
use crnf::weights::PseudoWeightTable;
use crnf::wjet::WJet;
use crnf::{BiPoly, ExactScalar, Jet};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Gaussian rational with |re|, |im| <= 9 and small denominators.
fn boxed_scalar(rng: &mut ChaCha8Rng) -> ExactScalar {
    let part = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=3));
    let re = part(rng);
    let im = part(rng);
    ExactScalar::new(re, im)
}

fn random_homogeneous(rng: &mut ChaCha8Rng, degree: u32) -> BiPoly {
    loop {
        let mut p = BiPoly::zero();
        for m in 0..=degree {
            if rng.gen_bool(0.5) {
                let c = boxed_scalar(rng);
                if !c.is_zero() {
                    p.add_to_coeff(m, degree - m, &c);
                }
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

struct Corpus {
    surface: SurfaceJet,
    result: NormalizationResult,
    normalize_time: Duration,
}

/// Seeded reference surface: standard cubic model, order 12, zbar^4 plus
/// ten random tail terms of degrees 4..=12 away from (0, 4).
fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let mut tail = BiPoly::monomial(0, 4, ExactScalar::one());
        let mut placed = 0;
        while placed < 10 {
            let degree = rng.gen_range(4..=12);
            let m = rng.gen_range(0..=degree);
            let c = boxed_scalar(&mut rng);
            if (m, degree - m) == (0, 4) || c.is_zero() {
                continue;
            }
            tail.add_to_coeff(m, degree - m, &c);
            placed += 1;
        }
        let model = ModelPolynomial::standard(3).unwrap();
        let surface = SurfaceJet::new(model, 12, tail).unwrap();
        let start = Instant::now();
        let result = normalize(&surface).unwrap();
        let normalize_time = start.elapsed();
        Corpus {
            surface,
            result,
            normalize_time,
        }
    })
}

#[test]
fn a01_multiplication_and_adjoint_pair_exactly() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut pairs = 0;
    for k0 in [3u32, 4] {
        let p = ModelPolynomial::standard(k0).unwrap().poly().clone();
        for _ in 0..200 {
            // Matched degrees exercise the nonzero pairing; mismatched ones
            // must give zero on both sides.
            let (da, db) = if rng.gen_bool(0.75) {
                let db = rng.gen_range(k0..=10);
                (db - k0, db)
            } else {
                (rng.gen_range(0..=10), rng.gen_range(0..=10))
            };
            let a = random_homogeneous(&mut rng, da);
            let b = random_homogeneous(&mut rng, db);
            let lhs = fischer_inner(&(&a * &p), &b);
            let rhs = fischer_inner(&a, &adjoint_apply(&p, &b).unwrap());
            assert_eq!(lhs, rhs, "pairing mismatch at k0 = {}", k0);
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {:?}", elapsed);
    println!(
        "acceptance 01 PASS  multiplication/adjoint pairing exact on {} pairs in {:?}",
        pairs, elapsed
    );
}

#[test]
fn a02_decomposition_reconstructs_and_remainder_is_annihilated() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for k0 in [3u32, 4] {
        let p = ModelPolynomial::standard(k0).unwrap().poly().clone();
        for _ in 0..100 {
            let d = rng.gen_range(k0..=12);
            let q = random_homogeneous(&mut rng, d);
            let split = fischer_decompose(&p, &q).unwrap();
            assert_eq!(&(&split.quotient * &p) + &split.remainder, q);
            assert!(adjoint_apply(&p, &split.remainder).unwrap().is_zero());
        }
        for _ in 0..50 {
            let d = rng.gen_range(0..=12 - k0);
            let s = random_homogeneous(&mut rng, d);
            let split = fischer_decompose(&p, &(&s * &p)).unwrap();
            assert_eq!(split.quotient, s, "quotient of an exact multiple");
            assert!(split.remainder.is_zero());
        }
    }
    println!("acceptance 02 PASS  decomposition reconstructs; exact multiples split as (S, 0)");
}

#[test]
fn a03_reference_invariants_come_out_exactly() {
    let cubic = SurfaceJet::new(
        ModelPolynomial::standard(3).unwrap(),
        8,
        BiPoly::monomial(0, 4, ExactScalar::one()),
    )
    .unwrap();
    let inv = surface_invariants(&cubic);
    assert_eq!(inv.s, Some(4));
    assert_eq!(inv.alpha, ExactScalar::from_ratio(3, 2));
    let expected_r = BiPoly::from_terms([
        ((2, 1), ExactScalar::from_ratio(1, 2)),
        ((1, 2), ExactScalar::from_ratio(-1, 2)),
    ]);
    assert_eq!(inv.alpha_remainder, expected_r);
    assert!(inv.nondegenerate);

    let quartic = SurfaceJet::new(ModelPolynomial::standard(4).unwrap(), 8, BiPoly::zero()).unwrap();
    let inv4 = surface_invariants(&quartic);
    assert_eq!(inv4.alpha, ExactScalar::from_int(2));
    println!("acceptance 03 PASS  s = 4, alpha = 3/2, R = (z^2 zb - z zb^2)/2; quartic alpha = 2");
}

#[test]
fn a04_normalization_finishes_in_budget_and_verifies_independently() {
    let c = corpus();
    assert!(
        c.normalize_time < Duration::from_secs(60),
        "normalization took {:?}",
        c.normalize_time
    );
    // The committed map must reproduce the normal form from the input.
    let replayed = apply_map(&c.result.map, &c.surface).unwrap();
    assert_eq!(replayed, c.result.normal_form);

    let report = verify_normal_form(&c.result.normal_form).unwrap();
    assert!(report.overall);
    let degrees: Vec<u32> = report.per_degree.iter().map(|d| d.degree).collect();
    assert_eq!(degrees, (4..=12).collect::<Vec<_>>());
    for check in &report.per_degree {
        assert!(check.pass, "degree {} residual nonzero", check.degree);
        assert!(check.residual.is_zero());
    }
    let targets = report.resonance_targets.as_ref().expect("s is visible");
    let target_degrees: Vec<u32> = targets.iter().map(|t| t.degree).collect();
    assert_eq!(target_degrees, vec![6, 8, 10, 12]);
    for t in targets {
        assert!(t.coefficient.is_zero(), "a_(0,{}) != 0", t.degree);
    }
    println!(
        "acceptance 04 PASS  order-12 normalization in {:?} (< 60 s); all residuals and targets zero",
        c.normalize_time
    );
}

#[test]
fn a05_normal_forms_are_fixed_points() {
    let c = corpus();
    let again = normalize(&c.result.normal_form).unwrap();
    assert!(again.map.is_identity(), "second pass moved the surface");
    assert_eq!(again.normal_form, c.result.normal_form);
    println!("acceptance 05 PASS  re-normalizing returns the identity map and the same jet");
}

/// Admissible random map: up to `max_terms` monomials split between f and g,
/// avoiding the g supports that do not preserve the model.
fn random_map(rng: &mut ChaCha8Rng, max_terms: usize) -> TangentIdentityMap {
    let mut f = WJet::zero();
    let mut g = WJet::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let k = rng.gen_range(0..=4u32);
        let l = rng.gen_range(0..=2u32);
        let re = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let im = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let c = ExactScalar::new(re, im);
        if c.is_zero() {
            continue;
        }
        if rng.gen_bool(0.5) {
            if k + l >= 2 || (k, l) == (0, 1) {
                f.add_to_coeff(k, l, &c);
            }
        } else if k + l >= 2 && !(l == 0 && k <= 3) {
            g.add_to_coeff(k, l, &c);
        }
    }
    TangentIdentityMap::new(3, f, g).unwrap()
}

#[test]
fn a06_normal_form_is_invariant_under_admissible_maps() {
    let c = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for round in 0..25 {
        let m = random_map(&mut rng, 6);
        let moved = apply_map(&m, &c.surface).unwrap();
        let nf = normalize(&moved).unwrap().normal_form;
        assert_eq!(
            nf, c.result.normal_form,
            "normal form changed under map #{}: {}",
            round, m
        );
    }
    println!("acceptance 06 PASS  25 transformed copies renormalize to the identical jet");
}

#[test]
fn a07_commits_never_disturb_lower_degrees_or_earlier_targets() {
    let c = corpus();
    assert!(!c.result.report.resonances.is_empty());
    for rec in &c.result.report.resonances {
        assert!(
            rec.locality_verified,
            "degree-{} commit moved settled coefficients",
            rec.degree
        );
    }
    for rec in &c.result.report.boundaries {
        assert!(
            rec.locality_verified && (rec.inert || rec.pinned),
            "boundary family {}{} was not settled",
            rec.case,
            rec.t
        );
    }
    println!("acceptance 07 PASS  every commit left settled degrees and earlier targets bit-identical");
}

#[test]
fn a08_resonance_probes_confirm_affinity_and_targets_rechecked_zero() {
    let c = corpus();
    assert_eq!(c.result.report.s, 4);
    let recs = &c.result.report.resonances;
    assert_eq!(recs.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![6, 8, 10, 12]);
    for rec in recs {
        assert!(rec.probed, "degree-{} target was already zero; reseed the corpus", rec.degree);
        assert!(rec.affine_confirmed, "degree-{} fourth probe mismatched", rec.degree);
        assert!(
            !(rec.measured_slope[0].is_zero() && rec.measured_slope[1].is_zero()),
            "degree-{} parameter had no effect",
            rec.degree
        );
        assert!(c.result.normal_form.tail_coeff(0, rec.degree).is_zero());
    }
    println!("acceptance 08 PASS  all four probed targets were affine and re-check to exact zero");
}

#[test]
fn a09_inversion_round_trips_at_order_twelve() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..100 {
        let mut p = BiPoly::monomial(1, 0, ExactScalar::one());
        for _ in 0..rng.gen_range(1..=5) {
            let m = rng.gen_range(0..=6u32);
            let n = rng.gen_range(0..=6u32);
            if m + n < 2 {
                continue;
            }
            let c = boxed_scalar(&mut rng);
            p.add_to_coeff(m, n, &c);
        }
        let phi = Jet::new(p, 12);
        let psi = invert_planar_jet(&phi, 12).unwrap();
        assert!(round_trip_defect(&phi, &psi, 12).is_zero());
    }
    println!("acceptance 09 PASS  100 random jets invert exactly through order 12");
}

#[test]
fn a10_weight_anchors_hold_and_derivative_comparison_is_logged() {
    for (k0, s) in [(3u32, 4u32), (3, 5), (4, 5), (4, 6), (5, 7)] {
        let table = PseudoWeightTable::new(k0, s).unwrap();
        assert_eq!(table.weight(1, 0).unwrap(), ratio(1, 1));
        assert_eq!(
            table.weight(0, 1).unwrap(),
            ratio((s - 1) as i64, (k0 - 1) as i64)
        );
        for gamma in 1..k0 {
            let beta = k0 - gamma;
            assert_eq!(
                table.weight(gamma, beta).unwrap(),
                ratio(s as i64, 1),
                "mixed ({}, {}) at k0 = {}, s = {}",
                gamma,
                beta,
                k0,
                s
            );
        }
        let check = table
            .derivative_weight_check(&ModelPolynomial::standard(k0).unwrap())
            .unwrap();
        println!(
            "acceptance 10 note  k0 = {}, s = {}: min weight of z d/dz terms = {} vs target {} (agrees: {})",
            k0, s, check.computed, check.target, check.agrees
        );
    }
    println!("acceptance 10 PASS  wt(z) = 1, wt(zb) = (s-1)/(k0-1), mixed model degree weighs s");
}

#[test]
fn a11_cli_round_trips_files_and_reports_are_byte_stable() {
    let exe = env!("CARGO_BIN_EXE_crnf");
    let dir = std::env::temp_dir().join(format!("crnf-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let surface = SurfaceJet::new(
        ModelPolynomial::standard(3).unwrap(),
        10,
        BiPoly::from_terms([
            ((0, 4), ExactScalar::one()),
            ((3, 1), ExactScalar::new(ratio(2, 1), ratio(-1, 1))),
            ((2, 3), ExactScalar::new(ratio(1, 2), ratio(0, 1))),
        ]),
    )
    .unwrap();
    let input = dir.join("input.json");
    std::fs::write(&input, to_json_string(&surface_to_file(&surface)).unwrap()).unwrap();

    // Write -> read -> write on the input must reproduce the bytes.
    let parsed = io::read_surface(&input).unwrap();
    assert_eq!(
        to_json_string(&surface_to_file(&parsed)).unwrap(),
        std::fs::read_to_string(&input).unwrap()
    );

    let run = |prefix: &str| -> PathBuf {
        let out = dir.join(prefix);
        let status = Command::new(exe)
            .args([
                "normalize",
                input.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(status.status.success(), "normalize failed: {:?}", status);
        out
    };
    let first = run("one");
    let second = run("two");

    for kind in ["normal", "map", "report"] {
        let a = std::fs::read(first.with_extension(format!("{}.json", kind))).unwrap();
        let b = std::fs::read(second.with_extension(format!("{}.json", kind))).unwrap();
        assert_eq!(a, b, "{} files differ between identical runs", kind);
    }

    // Every generated file parses back and re-serializes to the same bytes.
    let normal_path = first.with_extension("normal.json");
    let normal_bytes = std::fs::read_to_string(&normal_path).unwrap();
    let normal: SurfaceFile = serde_json::from_str(&normal_bytes).unwrap();
    assert_eq!(to_json_string(&normal).unwrap(), normal_bytes);
    io::read_surface(&normal_path).unwrap();

    let map_path = first.with_extension("map.json");
    let map_bytes = std::fs::read_to_string(&map_path).unwrap();
    let map: MapFile = serde_json::from_str(&map_bytes).unwrap();
    assert_eq!(to_json_string(&map).unwrap(), map_bytes);
    io::read_map(&map_path).unwrap();

    let report_path = first.with_extension("report.json");
    let report_bytes = std::fs::read_to_string(&report_path).unwrap();
    let report: ReportFile = serde_json::from_str(&report_bytes).unwrap();
    assert_eq!(to_json_string(&report).unwrap(), report_bytes);

    std::fs::remove_dir_all(&dir).ok();
    println!("acceptance 11 PASS  file round trips are identities and reports are byte-stable");
}
