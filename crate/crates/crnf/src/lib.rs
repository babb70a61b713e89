//! Exact normal forms for real surfaces in C^2 near a degenerate CR
//! singularity.
//!
//! The crate computes, verifies, and compares formal normal forms of
//! surfaces given as truncated graphs w = P(z, zbar) + higher order terms,
//! entirely in exact rational arithmetic.

pub mod error;
pub mod fischer;
pub mod invert;
pub mod io;
pub mod linear;
pub mod map;
pub mod normalize;
pub mod poly;
pub mod scalar;
pub mod solve;
pub mod surface;
pub mod verify;
pub mod weights;
pub mod wjet;

pub use error::{Error, Result};
pub use poly::{BiPoly, Jet};
pub use scalar::ExactScalar;
