//! Tangent-to-identity transformations and their action on surfaces.
//!
//! A map is (z, w) -> (z + f(z, w), w + g(z, w)) with the linear part
//! frozen to the identity. Admissible supports:
//!
//! - f: monomials z^k w^l with k + l >= 2, plus the single monomial w
//!   (combined degree 1 but normal weight k0 > 1, needed by the resonance
//!   correctives)
//! - g: monomials with k + l >= 2
//!
//! Applying a map recomposes the graph from scratch: substitute the graph
//! for w, invert the planar coordinate change, and re-read the result in
//! the new coordinates. Nothing in this file transcribes term-collection
//! identities; exactness comes from the composition engine alone.

use crate::error::{Error, Result};
use crate::invert::invert_planar_jet;
use crate::poly::{compose_shift, BiPoly};
use crate::scalar::ExactScalar;
use crate::surface::SurfaceJet;
use crate::wjet::{compose_graph, WJet};
use std::fmt;

/// Which component of a map a monomial belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapComponent {
    /// The z-component series f.
    F,
    /// The w-component series g.
    G,
}

/// Formal transformation tangent to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentIdentityMap {
    k0: u32,
    f: WJet,
    g: WJet,
}

fn check_f_support(f: &WJet) -> Result<()> {
    for (&(k, l), _) in f.terms() {
        if k + l < 2 && (k, l) != (0, 1) {
            return Err(Error::NotTangentToIdentity(format!(
                "f contains the monomial z^{} w^{}",
                k, l
            )));
        }
    }
    Ok(())
}

fn check_g_support(g: &WJet) -> Result<()> {
    for (&(k, l), _) in g.terms() {
        if k + l < 2 {
            return Err(Error::NotTangentToIdentity(format!(
                "g contains the monomial z^{} w^{}",
                k, l
            )));
        }
    }
    Ok(())
}

impl TangentIdentityMap {
    /// Builds a map after validating both supports.
    pub fn new(k0: u32, f: WJet, g: WJet) -> Result<Self> {
        if k0 < 3 {
            return Err(Error::DegreeViolation { k0 });
        }
        check_f_support(&f)?;
        check_g_support(&g)?;
        Ok(TangentIdentityMap { k0, f, g })
    }

    /// The identity transformation.
    pub fn identity(k0: u32) -> Self {
        TangentIdentityMap {
            k0,
            f: WJet::zero(),
            g: WJet::zero(),
        }
    }

    /// Singularity degree the map is meant for.
    pub fn k0(&self) -> u32 {
        self.k0
    }

    /// The z-component minus the identity.
    pub fn f(&self) -> &WJet {
        &self.f
    }

    /// The w-component minus the identity.
    pub fn g(&self) -> &WJet {
        &self.g
    }

    /// True iff both components vanish.
    pub fn is_identity(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// Drops terms that cannot influence a graph through total degree
    /// `order`: f keeps normal weight <= order - k0 + 1, g keeps <= order.
    pub fn truncated_to_order(&self, order: u32) -> TangentIdentityMap {
        TangentIdentityMap {
            k0: self.k0,
            f: self
                .f
                .truncated_to_weight(self.k0, order.saturating_sub(self.k0 - 1)),
            g: self.g.truncated_to_weight(self.k0, order),
        }
    }
}

impl fmt::Display for TangentIdentityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z' = z + ({}), w' = w + ({})", self.f, self.g)
    }
}

/// Identity plus a single term in one component.
pub fn elementary_map(
    k0: u32,
    monomial: (u32, u32),
    coefficient: ExactScalar,
    component: MapComponent,
) -> Result<TangentIdentityMap> {
    let (k, l) = monomial;
    if k + l < 2 {
        return Err(Error::InadmissibleMonomial { k, l });
    }
    let term = WJet::monomial(k, l, coefficient);
    match component {
        MapComponent::F => TangentIdentityMap::new(k0, term, WJet::zero()),
        MapComponent::G => TangentIdentityMap::new(k0, WJet::zero(), term),
    }
}

/// Pushes a surface through a transformation, exactly through its order.
///
/// With Q the full graph: the image surface is parameterized by
/// w' = Q + g(z, Q) over z' = z + f(z, Q); the planar change is inverted
/// and the result re-read as a graph over z'. Fails with ModelNotPreserved
/// if terms appear below degree k0 or the degree-k0 part moves (a g-term
/// z^k with k <= k0 does exactly that).
pub fn apply_map(map: &TangentIdentityMap, surface: &SurfaceJet) -> Result<SurfaceJet> {
    if map.k0() != surface.k0() {
        return Err(Error::InvalidInput(format!(
            "map is for k0 = {}, surface has k0 = {}",
            map.k0(),
            surface.k0()
        )));
    }
    if map.is_identity() {
        return Ok(surface.clone());
    }
    let order = surface.order();
    let q = surface.graph();
    let w_new = &q + &compose_graph(map.g(), &q, map.k0())?;
    let shift = compose_graph(map.f(), &q, map.k0())?;
    let phi = &crate::poly::Jet::identity_z(order) + &shift;
    let psi = invert_planar_jet(&phi, order)?;
    let t = psi.poly() - &BiPoly::monomial(1, 0, ExactScalar::one());
    let new_graph = compose_shift(w_new.poly(), &t, &t.conjugate(), order);
    SurfaceJet::from_graph(surface.model(), &new_graph, order)
}

/// Composition: applying the result equals applying `first`, then `second`.
///
/// The composite is computed exactly on finite supports (no truncation);
/// callers chaining many maps should prefer [`compose_maps_to_order`] or
/// re-truncate with [`TangentIdentityMap::truncated_to_order`] to keep
/// supports small.
pub fn compose_maps(
    first: &TangentIdentityMap,
    second: &TangentIdentityMap,
) -> Result<TangentIdentityMap> {
    compose_inner(first, second, None)
}

/// Composition clipped on the fly: agrees with [`compose_maps`] followed by
/// [`TangentIdentityMap::truncated_to_order`] at `order`, but every partial
/// product is clipped to the weights that can still matter.
///
/// Exact because normal weight is additive under multiplication and no
/// monomial has negative weight, so a clipped term can never feed a kept one.
pub fn compose_maps_to_order(
    first: &TangentIdentityMap,
    second: &TangentIdentityMap,
    order: u32,
) -> Result<TangentIdentityMap> {
    compose_inner(first, second, Some(order))
}

fn compose_inner(
    first: &TangentIdentityMap,
    second: &TangentIdentityMap,
    order: Option<u32>,
) -> Result<TangentIdentityMap> {
    if first.k0() != second.k0() {
        return Err(Error::InvalidInput(format!(
            "cannot compose maps for k0 = {} and k0 = {}",
            first.k0(),
            second.k0()
        )));
    }
    let k0 = first.k0();
    let clip_map = |m: &TangentIdentityMap| match order {
        Some(o) => m.truncated_to_order(o),
        None => m.clone(),
    };
    if first.is_identity() {
        return Ok(clip_map(second));
    }
    if second.is_identity() {
        return Ok(clip_map(first));
    }
    // z'' = z' + f2(z', w'), with z' = z + f1(z, w), w' = w + g1(z, w):
    // substitute z + f1 for z and w + g1 for w in every monomial of f2, g2.
    let z_image = WJet::monomial(1, 0, ExactScalar::one()).add(first.f());
    let w_image = WJet::monomial(0, 1, ExactScalar::one()).add(first.g());

    let substitute = |h: &WJet, bound: Option<u32>| -> WJet {
        let clip = |j: WJet| match bound {
            Some(b) => j.truncated_to_weight(k0, b),
            None => j,
        };
        let mut z_pows: Vec<WJet> = vec![WJet::monomial(0, 0, ExactScalar::one())];
        let mut w_pows: Vec<WJet> = vec![WJet::monomial(0, 0, ExactScalar::one())];
        let mut out = WJet::zero();
        for (&(k, l), c) in h.terms() {
            while z_pows.len() <= k as usize {
                let next = clip(z_pows.last().unwrap().mul(&z_image));
                z_pows.push(next);
            }
            while w_pows.len() <= l as usize {
                let next = clip(w_pows.last().unwrap().mul(&w_image));
                w_pows.push(next);
            }
            out = out.add(&clip(z_pows[k as usize].mul(&w_pows[l as usize])).scaled(c));
        }
        out
    };

    // f keeps weight <= order - k0 + 1 and g keeps <= order, matching
    // truncated_to_order; note the input supports are NOT pre-clipped, a
    // high-weight monomial of `second` can land inside the bound once g1
    // terms of weight below k0 are substituted for w.
    let f_bound = order.map(|o| o.saturating_sub(k0 - 1));
    let f = first.f().add(&substitute(second.f(), f_bound));
    let g = first.g().add(&substitute(second.g(), order));
    let (f, g) = match (f_bound, order) {
        (Some(bf), Some(bg)) => (
            f.truncated_to_weight(k0, bf),
            g.truncated_to_weight(k0, bg),
        ),
        _ => (f, g),
    };
    TangentIdentityMap::new(k0, f, g)
}
