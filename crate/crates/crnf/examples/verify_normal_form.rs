//! Checking membership in the normal form, independently of the solver.
//!
//! Verification recomputes every degree's residual from scratch through the
//! uncached division chain and reads the scheduled zbar-pure targets off
//! the jet; it shares no state with normalization, so a passing report is
//! independent evidence.

use crnf::normalize::normalize;
use crnf::surface::{ModelPolynomial, SurfaceJet};
use crnf::verify::verify_normal_form;
use crnf::{BiPoly, ExactScalar};

fn print_report(surface: &SurfaceJet) -> crnf::Result<()> {
    let report = verify_normal_form(surface)?;
    for check in &report.per_degree {
        println!(
            "  degree {:2}: {}",
            check.degree,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    match &report.resonance_targets {
        Some(targets) => {
            for t in targets {
                println!(
                    "  target a_(0,{:2}) = {}: {}",
                    t.degree,
                    t.coefficient,
                    if t.pass { "pass" } else { "FAIL" }
                );
            }
        }
        None => println!("  no zbar-pure coefficient in range; schedule undefined"),
    }
    println!("  overall: {}", if report.overall { "PASS" } else { "FAIL" });
    Ok(())
}

fn main() -> crnf::Result<()> {
    let tail = BiPoly::from_terms([
        ((0, 4), ExactScalar::one()),
        ((3, 1), ExactScalar::from_parts(2, 1, -1, 1)),
    ]);
    let surface = SurfaceJet::new(ModelPolynomial::standard(3)?, 8, tail)?;

    println!("before normalization:");
    print_report(&surface)?;

    let result = normalize(&surface)?;
    println!("after normalization:");
    print_report(&result.normal_form)?;
    Ok(())
}
