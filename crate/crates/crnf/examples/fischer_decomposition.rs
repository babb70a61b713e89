//! Splitting against the model: q = S P + T with the adjoint killing T.
//!
//! Walks one explicit division, checks the two defining identities, then
//! runs the iterated quotient chain down to degree k0 and prints the pure
//! coefficients the normal form cares about.

use crnf::fischer::{adjoint_apply, fischer_decompose, iterated_chain, sn_residual};
use crnf::surface::ModelPolynomial;
use crnf::{BiPoly, ExactScalar};

fn main() -> crnf::Result<()> {
    let p = ModelPolynomial::standard(3)?.poly().clone();
    println!("P      = {}", p);

    // A degree-6 input with both pure and mixed terms.
    let q = BiPoly::from_terms([
        ((6, 0), ExactScalar::from_int(1)),
        ((3, 3), ExactScalar::from_int(2)),
        ((1, 5), ExactScalar::from_ratio(-1, 2)),
        ((0, 6), ExactScalar::i()),
    ]);
    println!("q      = {}", q);

    let split = fischer_decompose(&p, &q)?;
    println!("S      = {}", split.quotient);
    println!("T      = {}", split.remainder);

    let reconstructed = &(&split.quotient * &p) + &split.remainder;
    println!("S P + T == q: {}", reconstructed == q);
    println!(
        "P* T   = {} (must be 0)",
        adjoint_apply(&p, &split.remainder)?
    );

    // Iterating the division produces S_0 = q, S_1, S_2, ... with degrees
    // dropping by k0 each level.
    let chain = iterated_chain(&p, &q)?;
    for j in 0..chain.len() {
        println!("S_{}    = {}", j, chain.quotient(j));
    }
    println!("chain reconstructs: {}", chain.reconstructs_against(&p));

    // The residual collects the pure coefficients of the quotients; a jet
    // is in normal form at this degree iff every entry vanishes.
    let residual = sn_residual(&p, &q)?;
    println!("z-pure coefficients    : {}", join(residual.z_pure()));
    println!("zbar-pure coefficients : {}", join(residual.zbar_pure()));
    println!("residual zero: {}", residual.is_zero());
    Ok(())
}

fn join(values: &[ExactScalar]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
