//! The diagnostic grading on monomials z^gamma zb^beta.
//!
//! Generators carry wt(z) = 1 and wt(zb) = (s-1)/(k0-1); pure powers grade
//! additively, mixed monomials are anchored degree by degree, and higher
//! mixed monomials may beat the block reductions through the high-degree
//! clause. The grading is reported by the tooling but never gates a result.

use crnf::surface::ModelPolynomial;
use crnf::weights::PseudoWeightTable;

fn main() -> crnf::Result<()> {
    let table = PseudoWeightTable::new(3, 4)?;
    println!("k0 = {}, s = {}, wt(zb) = {}", table.k0(), table.s(), table.zbar_weight());
    println!();

    // Weight table over a small grid; (0, 0) carries no weight.
    print!("gamma\\beta |");
    for beta in 0..=4 {
        print!(" {:>5}", beta);
    }
    println!();
    for gamma in 0..=4 {
        print!("{:>10} |", gamma);
        for beta in 0..=4 {
            match table.weight(gamma, beta) {
                Ok(w) => print!(" {:>5}", w.to_string()),
                Err(_) => print!(" {:>5}", "-"),
            }
        }
        println!();
    }
    println!();

    let model = ModelPolynomial::standard(3)?;
    println!("min weight over the model: {}", table.min_weight(model.poly())?);
    let check = table.derivative_weight_check(&model)?;
    println!(
        "z d/dz comparison: computed {}, target {}, agrees: {} (logged, not asserted)",
        check.computed, check.target, check.agrees
    );
    Ok(())
}
