//! Forward and backward orbits, boundary multipliers, and numerical checks of
//! the quantitative estimates.

mod backward;
mod checks;
mod forward;
mod multiplier;
mod solver;

pub use backward::{backward_orbit, backward_step, BackwardOrbit, StopReason};
pub use checks::{
    angular_ratio_diagnostics, elliptic_growth_constant, julia_inclusion_check, multiplier_sandwich, norm_ratio_bound,
    orbit_asymptotics, projection_increment_constant, verify_decay_sequence, verify_defect_decay, AngularReport,
    AsymptoticsReport, DecayReport, GrowthReport, JuliaReport, SandwichReport,
};
pub use forward::{ball_gap, forward_orbit, ForwardOrbit};
pub use multiplier::{multiplier_at_boundary, MultiplierEstimate};
pub use solver::{newton_preimage, SolverPolicy};
