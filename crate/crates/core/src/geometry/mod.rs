//! Coordinates, domains, metrics, regions and automorphisms of `B^N` and `H^N`.

mod automorphism;
mod cayley;
mod metric;
mod point;
mod region;
mod vector;

pub use automorphism::{
    apply_automorphism, build_automorphism, compose_automorphisms, invert_automorphism, Primitive,
    SiegelAutomorphism,
};
pub use cayley::{cayley_to_siegel, siegel_to_ball, Chart};
pub use metric::{boundary_projection, defect, dist_ball, dist_siegel, hyperbolic_ball_extremes};
pub use point::{BallPoint, BoundaryPoint, ModelPoint, SiegelPoint};
pub use region::{
    ball_horo_value, horosphere_contains, koranyi_contains, koranyi_ratio, siegel_origin_horo_value,
    siegel_origin_koranyi_ratio, Horosphere, KoranyiRegion,
};
pub use vector::CVector;
