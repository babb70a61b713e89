//! Reading off s, alpha, and the nondegeneracy verdict of a surface jet.
//!
//! The surface is w = z^2 zb + z zb^2 + zb^4 truncated at order 8. Its two
//! invariants pin the whole normalization: s is the first zbar-pure tail
//! exponent, alpha the scalar in z P_z = alpha P + R.

use crnf::surface::{surface_invariants, ModelPolynomial, SurfaceJet};
use crnf::{BiPoly, ExactScalar};

fn main() -> crnf::Result<()> {
    let model = ModelPolynomial::standard(3)?;
    let tail = BiPoly::monomial(0, 4, ExactScalar::one());
    let surface = SurfaceJet::new(model, 8, tail)?;

    println!("model  = {}", surface.model().poly());
    println!("tail   = {}", surface.tail());
    println!("order  = {}", surface.order());

    let inv = surface_invariants(&surface);
    match inv.s {
        Some(s) => println!("s      = {}", s),
        None => println!("s      = none within the truncation"),
    }
    println!("alpha  = {}", inv.alpha);
    println!("R      = {}", inv.alpha_remainder);
    println!("nondegenerate: {}", inv.nondegenerate);
    for failure in &inv.failures {
        println!("  failed clause: {}", failure);
    }

    // The quartic model z^3 zb + z zb^3 has alpha = 2; with an empty tail
    // there is no s, so one nondegeneracy clause fails.
    let quartic = SurfaceJet::new(ModelPolynomial::standard(4)?, 8, BiPoly::zero())?;
    let inv4 = surface_invariants(&quartic);
    println!("quartic alpha = {}, nondegenerate: {}", inv4.alpha, inv4.nondegenerate);
    Ok(())
}
