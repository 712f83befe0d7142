//! The intertwining map `ψ` with `ψ∘η = f∘ψ` at a boundary repelling fixed
//! point, approximated by `ψ_n = f_n ∘ τ_n ∘ p_L` on a grid of sample points.

mod run;
mod special;
mod tau;

pub use run::{
    conjugation_residual, default_grid, g_n_diagnostics, psi_approx, psi_interpolation_check, ConjugationRun,
    VariantKind,
};
pub use special::{horosphere_index, special_backward_construct, SpecialOrbit};
pub use tau::{build_tau, tau_limit_diagnostics, TauReport, Variant};
