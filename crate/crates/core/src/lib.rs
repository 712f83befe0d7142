//! Iteration of holomorphic self-maps of the unit ball `B^N` and the Siegel
//! domain `H^N = {(z, w) : Re z > ||w||²}`.
//!
//! * [`geometry`]: points, Cayley charts, pseudo-hyperbolic distances,
//!   horospheres, Koranyi regions and the automorphism algebra of `H^N`.
//! * [`maps`]: evaluable self-map families with closed-form structure.
//! * [`dynamics`]: forward and backward orbits, boundary multipliers and
//!   numerical checks of the quantitative bounds.
//! * [`conjugation`]: the intertwining map `ψ` with `ψ∘η = f∘ψ` at a boundary
//!   repelling fixed point, sampled on a grid.

pub mod conjugation;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod geometry;
pub mod maps;
pub mod policy;
pub mod serial;

pub use error::{Error, Result};
pub use policy::NumericPolicy;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/geometry.md")]
mod book_geometry {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/maps.md")]
mod book_maps {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/orbits.md")]
mod book_orbits {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/conjugation.md")]
mod book_conjugation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
