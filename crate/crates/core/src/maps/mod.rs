//! Self-map families of `H^N` with closed-form structure: the quadratic
//! family, lifts of half-plane maps, diagonal linear maps, conjugates by
//! automorphisms, and coordinate-wise products on the ball.

mod classify;
mod descriptor;
mod expand;
pub mod fixtures;
mod one_dim;
mod quadratic;

pub use classify::{
    classify, known_brfp_set, lift_one_dim, ClassificationReport, DenjoyWolff, FixedPointSet, MapType,
};
pub use descriptor::{evaluate, MapDescriptor, Quadratic};
pub use expand::{expandable_decompose, recenter_at, to_siegel_boundary, Expansion};
pub use one_dim::OneDimMap;
pub use quadratic::{classify_quadratic, quadratic_inverse, quadratic_iterate_closed, Preimage};
