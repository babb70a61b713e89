//! Full normalization run with the audit trail printed.
//!
//! Degrees are settled bottom-up: each degree's residual is removed by one
//! solved elementary map, then the scheduled resonant degrees spend the
//! remaining corrective parameters to zero the zbar-pure targets, and the
//! families straddling the truncation order are pinned by least squares.
//! The committed composite map reproduces the normal form when replayed.

use crnf::map::apply_map;
use crnf::normalize::normalize;
use crnf::surface::{ModelPolynomial, SurfaceJet};
use crnf::{BiPoly, ExactScalar};

fn main() -> crnf::Result<()> {
    let tail = BiPoly::from_terms([
        ((0, 4), ExactScalar::one()),
        ((3, 1), ExactScalar::from_parts(2, 1, -1, 1)),
        ((2, 3), ExactScalar::from_ratio(1, 2)),
    ]);
    let surface = SurfaceJet::new(ModelPolynomial::standard(3)?, 8, tail)?;
    println!("input tail  = {}", surface.tail());

    let result = normalize(&surface)?;
    let report = &result.report;
    println!("s = {}, alpha = {}", report.s, report.alpha);

    for d in &report.degrees {
        println!(
            "degree {:2}: {} g-unknowns, {} f-unknowns, residual {}",
            d.degree,
            d.g_unknowns,
            d.f_unknowns,
            if d.residual_was_zero { "already zero" } else { "solved" }
        );
    }
    for r in &report.resonances {
        println!(
            "resonant degree {:2} (case {}, t = {}): target {} -> parameter {}",
            r.degree, r.case, r.t, r.target_before, r.parameter
        );
    }
    for b in &report.boundaries {
        println!(
            "boundary family {}{} (acts from degree {}, target {} beyond order): {}",
            b.case,
            b.t,
            b.first_degree,
            b.target_degree,
            if b.inert {
                "inert".to_string()
            } else if b.pinned {
                format!("pinned with parameter {}", b.parameter)
            } else {
                "left unspent".to_string()
            }
        );
    }

    println!("normal tail = {}", result.normal_form.tail());
    println!("map: {}", result.map);

    // The map is a certificate: replaying it on the input gives the output.
    let replayed = apply_map(&result.map, &surface)?;
    println!("replay matches: {}", replayed == result.normal_form);
    Ok(())
}
