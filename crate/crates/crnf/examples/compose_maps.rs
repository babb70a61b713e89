//! Composing transformations and acting on a surface.
//!
//! Applying maps one after another agrees with applying their composite,
//! and the weight-clipped composition matches the exact one after
//! truncation; chains of solved maps stay small that way.

use crnf::map::{apply_map, compose_maps, compose_maps_to_order, elementary_map, MapComponent};
use crnf::surface::{ModelPolynomial, SurfaceJet};
use crnf::{BiPoly, ExactScalar};

fn main() -> crnf::Result<()> {
    let surface = SurfaceJet::new(
        ModelPolynomial::standard(3)?,
        8,
        BiPoly::monomial(0, 4, ExactScalar::one()),
    )?;

    let a = elementary_map(3, (2, 0), ExactScalar::from_ratio(1, 2), MapComponent::F)?;
    let b = elementary_map(3, (0, 2), ExactScalar::i(), MapComponent::G)?;
    println!("a: {}", a);
    println!("b: {}", b);

    let ab = compose_maps(&a, &b)?;
    println!("a then b: {}", ab);

    let sequential = apply_map(&b, &apply_map(&a, &surface)?)?;
    let composed = apply_map(&ab, &surface)?;
    println!("sequential == composed: {}", sequential == composed);

    // The clipped composite drops exactly the terms that cannot reach
    // degree 8 on any surface of this order.
    let clipped = compose_maps_to_order(&a, &b, 8)?;
    println!("clipped:  {}", clipped);
    println!(
        "clipped == exact.truncated: {}",
        clipped == ab.truncated_to_order(8)
    );
    println!(
        "clipped acts identically: {}",
        apply_map(&clipped, &surface)? == composed
    );
    Ok(())
}
