//! Deciding when two surface jets are the same surface in disguise.
//!
//! Tangent mode compares normal forms exactly: two jets are equivalent
//! under tangent-to-identity maps iff their normal forms coincide. Linear
//! mode additionally quotients by the model-preserving scalings
//! (z, w) -> (lambda z, c w) and can return an exact certificate, an exact
//! refutation, or an honest "undecided" when the scaling modulus would be
//! irrational.

use crnf::map::{apply_map, TangentIdentityMap};
use crnf::surface::{ModelPolynomial, SurfaceJet};
use crnf::verify::{equiv_check, EquivMode, EquivVerdict};
use crnf::wjet::WJet;
use crnf::{BiPoly, ExactScalar};

fn cubic(order: u32, tail: BiPoly) -> crnf::Result<SurfaceJet> {
    SurfaceJet::new(ModelPolynomial::standard(3)?, order, tail)
}

fn show(label: &str, verdict: &EquivVerdict) {
    match verdict {
        EquivVerdict::Equivalent { certificate } => {
            println!("{}: equivalent ({})", label, certificate)
        }
        EquivVerdict::Inequivalent { certificate } => {
            println!("{}: inequivalent ({})", label, certificate)
        }
        EquivVerdict::Undecided { certificate } => {
            println!("{}: undecided ({})", label, certificate)
        }
    }
}

fn main() -> crnf::Result<()> {
    let base = cubic(8, BiPoly::monomial(0, 4, ExactScalar::one()))?;

    // A transformed copy of the base surface: tangent mode recovers the
    // equivalence through the shared normal form.
    let mut f = WJet::zero();
    f.add_to_coeff(2, 0, &ExactScalar::from_ratio(1, 2));
    let map = TangentIdentityMap::new(3, f, WJet::zero())?;
    let moved = apply_map(&map, &base)?;
    show("moved copy, tangent", &equiv_check(&base, &moved, EquivMode::Tangent)?);

    // Scaling z by 2 multiplies the zbar^4 coefficient by 1/2: not reachable
    // tangent to the identity, but the linear orbit closes the gap.
    let halved = cubic(8, BiPoly::monomial(0, 4, ExactScalar::from_ratio(1, 2)))?;
    show("scaled copy, tangent", &equiv_check(&base, &halved, EquivMode::Tangent)?);
    show("scaled copy, linear ", &equiv_check(&base, &halved, EquivMode::Linear)?);

    // Coefficient (1 + i) has norm-square 2, so the pinned modulus would
    // have to solve rho^2 = 2: exactly irrational, reported as undecided.
    let twisted = cubic(8, BiPoly::monomial(0, 4, ExactScalar::from_parts(1, 1, 1, 1)))?;
    show("twisted copy, linear", &equiv_check(&base, &twisted, EquivMode::Linear)?);

    // Different s is a hard invariant: no map of either kind can connect
    // tails first meeting zbar at different exponents.
    let later = cubic(8, BiPoly::monomial(0, 5, ExactScalar::one()))?;
    show("different s, linear ", &equiv_check(&base, &later, EquivMode::Linear)?);
    Ok(())
}
