//! Inverting a planar jet tangent to the identity.
//!
//! phi = z + u with u starting at degree 2 always has a formal inverse
//! psi = z + t; composing either way returns z exactly through the order.

use crnf::invert::{invert_planar_jet, round_trip_defect};
use crnf::{BiPoly, ExactScalar, Jet};

fn main() -> crnf::Result<()> {
    let phi = Jet::new(
        BiPoly::from_terms([
            ((1, 0), ExactScalar::one()),
            ((2, 0), ExactScalar::one()),
            ((0, 2), ExactScalar::from_ratio(-1, 3)),
        ]),
        6,
    );
    println!("phi = {}", phi.poly());

    let psi = invert_planar_jet(&phi, 6)?;
    println!("psi = {}", psi.poly());

    let defect = round_trip_defect(&phi, &psi, 6);
    println!("phi(psi) - z = {} (must be 0)", defect);

    // A shift concentrated in one degree refills the gaps above it: u at
    // degree 5 forces corrections at 5 and 9 but nowhere in between.
    let sparse = Jet::new(
        BiPoly::from_terms([((1, 0), ExactScalar::one()), ((3, 2), ExactScalar::one())]),
        11,
    );
    let inv = invert_planar_jet(&sparse, 11)?;
    for (&(m, n), c) in inv.poly().terms() {
        println!("psi term z^{} zb^{}: {}", m, n, c);
    }
    println!(
        "sparse round trip zero: {}",
        round_trip_defect(&sparse, &inv, 11).is_zero()
    );
    Ok(())
}
