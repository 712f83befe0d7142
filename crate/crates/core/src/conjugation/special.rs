use serde::{Deserialize, Serialize};

use crate::dynamics::{backward_orbit, BackwardOrbit, SolverPolicy};
use crate::error::{Error, Result};
use crate::geometry::{dist_siegel, BoundaryPoint, SiegelAutomorphism, SiegelPoint};
use crate::maps::{evaluate, recenter_at, to_siegel_boundary, MapDescriptor};

/// Backward orbit built at a boundary repelling fixed point, expressed in the
/// frame where that point is the Siegel origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialOrbit {
    /// The orbit for `recentered`, starting at `(α^{-n0}, 0)`.
    pub orbit: BackwardOrbit,
    /// Sends the fixed point to the origin.
    pub recentering: SiegelAutomorphism,
    /// `recentering ∘ f ∘ recentering⁻¹`.
    pub recentered: MapDescriptor,
    pub alpha: f64,
    /// `(α − 1)/(α + 1)`.
    pub step_bound: f64,
    pub n0: usize,
    /// `d(r_k, f(r_k))` at the axis points `r_k = (α^{-(n0+k)}, 0)`; tends to
    /// the step bound.
    pub axis_steps: Vec<f64>,
}

/// Smallest `n0` with the horosphere of level `α^{-n0}` at the fixed point
/// inside the Euclidean ball of radius `rho` around it (in `B^N`). That
/// horosphere is the ball of centre `e_1/(1+R)` and radius `R/(1+R)`, so the
/// condition is `2R/(1+R) ≤ rho`.
pub fn horosphere_index(alpha: f64, rho: f64) -> usize {
    let r_max = rho / (2.0 - rho);
    if r_max >= 1.0 {
        return 0;
    }
    (-r_max.ln() / alpha.ln()).ceil().max(0.0) as usize
}

/// Bounded-step backward orbit tending to the fixed point `q` with multiplier
/// `alpha`, with steps at most `(α − 1)/(α + 1)`.
///
/// The orbit is seeded on the axis at the horosphere level `α^{-n0}`, with
/// `n0` from [`horosphere_index`] for the exclusion radius. Whether `q` is
/// isolated from other repelling fixed points is not checked.
pub fn special_backward_construct(
    f: &MapDescriptor,
    q: &BoundaryPoint,
    alpha: f64,
    exclusion_radius: f64,
    n: usize,
    solver: &SolverPolicy,
) -> Result<SpecialOrbit> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidParameter(format!("multiplier {alpha} must exceed 1")));
    }
    if !(exclusion_radius > 0.0 && exclusion_radius <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "exclusion radius {exclusion_radius} not in (0, 2]"
        )));
    }
    let qs = to_siegel_boundary(f, q)?;
    let recentering = SiegelAutomorphism::recentering(&qs)?;
    let g = recenter_at(f, q)?;
    let a = (alpha - 1.0) / (alpha + 1.0);
    let n0 = horosphere_index(alpha, exclusion_radius);
    let dim = f.dim();
    let seed = SiegelPoint::axis(alpha.powi(-(n0 as i32)), dim)?;
    let orbit = backward_orbit(&g, &seed, a, n, solver).map_err(|e| {
        Error::ConstructionFailed(format!("no admissible first step from (α^-{n0}, 0) with bound {a}: {e}"))
    })?;
    if orbit.len() < n + 1 {
        return Err(Error::ConstructionFailed(format!(
            "step bound {a} violated after {} steps ({:?})",
            orbit.len() - 1,
            orbit.stop
        )));
    }
    let mut axis_steps = Vec::with_capacity(n);
    for k in 0..n {
        let r = SiegelPoint::axis(alpha.powi(-((n0 + k) as i32)), dim)?;
        axis_steps.push(dist_siegel(&r, &evaluate(&g, &r)?)?);
    }
    Ok(SpecialOrbit {
        orbit,
        recentering,
        recentered: g,
        alpha,
        step_bound: a,
        n0,
        axis_steps,
    })
}
