//! Numerical checks of the quantitative estimates along orbits and on
//! sampled horospheres.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::backward::BackwardOrbit;
use crate::error::{Error, Result};
use crate::geometry::{boundary_projection, dist_ball, siegel_origin_koranyi_ratio, BallPoint, BoundaryPoint, SiegelAutomorphism, SiegelPoint};
use crate::maps::{recenter_at, MapDescriptor, OneDimMap};

/// Outcome of checking `t_{n+k} ≤ c^k t_n` over all pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub holds: bool,
    pub pairs: usize,
    pub violations: usize,
    /// Smallest `ln(c^k t_n / t_{n+k})`; negative values are violations.
    pub min_log_margin: f64,
}

pub fn verify_defect_decay(orbit: &BackwardOrbit, c: f64) -> DecayReport {
    verify_decay_sequence(&orbit.defects, c)
}

/// [`verify_defect_decay`] on a bare sequence of defects.
pub fn verify_decay_sequence(t: &[f64], c: f64) -> DecayReport {
    let lc = c.ln();
    let logs: Vec<f64> = t.iter().map(|x| x.ln()).collect();
    let mut pairs = 0;
    let mut violations = 0;
    let mut min_log_margin = f64::INFINITY;
    for n in 0..logs.len() {
        for m in (n + 1)..logs.len() {
            let k = (m - n) as f64;
            let margin = k * lc + logs[n] - logs[m];
            pairs += 1;
            min_log_margin = min_log_margin.min(margin);
            // Rounding in the logarithms scales with the number of factors.
            if !(margin >= -1e-12 * (1.0 + k)) {
                violations += 1;
            }
        }
    }
    DecayReport {
        holds: violations == 0,
        pairs,
        violations,
        min_log_margin,
    }
}

/// `1/c ≤ α ≤ (1+a)/(1−a)` for the orbit's multiplier estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub lower: f64,
    pub estimate: f64,
    pub upper: f64,
    pub holds: bool,
}

pub fn multiplier_sandwich(orbit: &BackwardOrbit, c: f64, tol: f64) -> Result<SandwichReport> {
    let estimate = orbit
        .multiplier_estimate
        .ok_or(Error::OrbitTooShort { len: orbit.len(), needed: 2 })?;
    let a = orbit.step_bound;
    let lower = 1.0 / c;
    let upper = (1.0 + a) / (1.0 - a);
    Ok(SandwichReport {
        lower,
        estimate,
        upper,
        holds: estimate >= lower * (1.0 - tol) && estimate <= upper * (1.0 + tol),
    })
}

/// Largest `||pr(Z_k) − pr(Z_{k+1})|| / sqrt(t_k)` along an orbit.
pub fn projection_increment_constant(orbit: &BackwardOrbit) -> f64 {
    orbit
        .points
        .windows(2)
        .map(|p| (&boundary_projection(&p[0]) - &boundary_projection(&p[1])).norm() / p[0].defect().sqrt())
        .fold(0.0, f64::max)
}

/// Both sides of `(1 − ||W||)/(1 − ||Z||) ≤ (1 + d)/(1 − d||Z||)`, `d = d(Z, W)`.
pub fn norm_ratio_bound(z: &BallPoint, w: &BallPoint) -> Result<(f64, f64)> {
    let d = dist_ball(z, w)?;
    Ok(((1.0 - w.norm()) / (1.0 - z.norm()), (1.0 + d) / (1.0 - d * z.norm())))
}

/// Julia's lemma on sampled horospheres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaReport {
    pub seed: u64,
    pub samples: usize,
    pub violations: usize,
    /// Largest `E(f(P)) / (α E(P))`; `1` means the inclusion is sharp.
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub radii: Vec<f64>,
}

/// Checks `f(H(X, R)) ⊂ H(X, αR)` on `n_samples` points spread over a
/// log-spaced grid of `R`.
///
/// The horofunction is `E = |z|²/t` after moving `X` to the Siegel origin, and
/// `E = 1/t` at infinity, where the statement reads `f(H(t/α)) ⊂ H(t)` in
/// terms of defect levels. Ball points are read through the map's chart.
pub fn julia_inclusion_check(f: &MapDescriptor, x: &BoundaryPoint, alpha: f64, n_samples: usize, seed: u64) -> Result<JuliaReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
    }
    let dim = f.dim();
    let at_infinity = f.chart().boundary_to_siegel(x)?.is_infinity();
    let g = if at_infinity { f.clone() } else { recenter_at(f, x)? };
    let radii: Vec<f64> = (0..13).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut violations, mut max_ratio, mut sum) = (0, 0.0f64, 0.0);
    for i in 0..n_samples {
        let r = radii[i % radii.len()];
        let e = r * rng.random_range(0.01..1.0);
        let p = if at_infinity {
            sample_level_infinity(&mut rng, e, dim)
        } else {
            sample_level_origin(&mut rng, e, dim)
        };
        let (z, w) = g.eval_coords(p.z(), p.w().coords());
        let t = z.re - w.iter().map(Complex64::norm_sqr).sum::<f64>();
        let e_img = if at_infinity { 1.0 / t } else { z.norm_sqr() / t };
        let e_src = if at_infinity { 1.0 / p.defect() } else { p.z().norm_sqr() / p.defect() };
        let ratio = e_img / (alpha * e_src);
        if !(t > 0.0) || !(ratio <= 1.0 + 1e-9) {
            violations += 1;
        }
        if ratio.is_finite() {
            max_ratio = max_ratio.max(ratio);
            sum += ratio;
        }
    }
    Ok(JuliaReport {
        seed,
        samples: n_samples,
        violations,
        max_ratio,
        mean_ratio: sum / n_samples.max(1) as f64,
        radii,
    })
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[0] = Complex64::new(1.0, 0.0);
        return e;
    }
    v.into_iter().map(|x| x / norm).collect()
}

/// A point with `|z|²/t = e`: `z = ρ e^{iθ}`, `t = ρ²/e`, `ρ ≤ e cos θ`.
fn sample_level_origin(rng: &mut ChaCha8Rng, e: f64, dim: usize) -> SiegelPoint {
    loop {
        let theta = rng.random_range(-FRAC_PI_2..FRAC_PI_2) * 0.999;
        let v = if dim == 1 { 1.0 } else { rng.random_range(0.05..1.0) };
        let rho = e * theta.cos() * v;
        let wn = (rho * theta.cos() * (1.0 - v)).max(0.0).sqrt();
        let w = random_direction(rng, dim - 1).into_iter().map(|x| x * wn).collect();
        if let Ok(p) = SiegelPoint::new(Complex64::from_polar(rho, theta), w) {
            return p;
        }
    }
}

/// A point with `1/t = e`.
fn sample_level_infinity(rng: &mut ChaCha8Rng, e: f64, dim: usize) -> SiegelPoint {
    loop {
        let t = 1.0 / e;
        let wn = rng.random_range(0.0..2.0);
        let w: Vec<Complex64> = random_direction(rng, dim - 1).into_iter().map(|x| x * wn).collect();
        let y = rng.random_range(-3.0..3.0);
        if let Ok(p) = SiegelPoint::new(Complex64::new(t + wn * wn, y), w) {
            return p;
        }
    }
}

/// Ratio sequences along a backward orbit moved so that its limit is the
/// Siegel origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsReport {
    pub re_ratio: Vec<f64>,
    pub im_ratio: Vec<f64>,
    pub w_ratio: Vec<f64>,
    pub t_ratio: Vec<f64>,
    /// `||w_n||² / Re z_n`, which tends to `0` on special sequences.
    pub special: Vec<f64>,
    /// Last value of each of the four ratio sequences.
    pub limits: [f64; 4],
    /// `(1, 0, 0, α)` with `α` the orbit's multiplier estimate.
    pub targets: [f64; 4],
    pub limits_ok: [bool; 4],
    pub special_ok: bool,
}

pub fn orbit_asymptotics(orbit: &BackwardOrbit, recenter: &SiegelAutomorphism, tol: f64) -> Result<AsymptoticsReport> {
    if orbit.len() < 5 {
        return Err(Error::OrbitTooShort {
            len: orbit.len(),
            needed: 5,
        });
    }
    let moved: Vec<SiegelPoint> = orbit.points.iter().map(|p| recenter.apply(p)).collect::<Result<_>>()?;
    let t: Vec<f64> = moved.iter().map(SiegelPoint::defect).collect();
    let re_ratio: Vec<f64> = moved.iter().zip(&t).map(|(p, t)| p.z().re / t).collect();
    let im_ratio: Vec<f64> = moved.iter().zip(&t).map(|(p, t)| p.z().im / t).collect();
    let w_ratio: Vec<f64> = moved.iter().zip(&t).map(|(p, t)| p.w().norm_sqr() / t).collect();
    let t_ratio: Vec<f64> = t.windows(2).map(|p| p[0] / p[1]).collect();
    let special: Vec<f64> = moved.iter().map(|p| p.w().norm_sqr() / p.z().re).collect();
    let alpha = orbit.multiplier_estimate.unwrap_or(f64::NAN);
    let last = |v: &[f64]| *v.last().expect("non-empty");
    let limits = [last(&re_ratio), last(&im_ratio), last(&w_ratio), last(&t_ratio)];
    let targets = [1.0, 0.0, 0.0, alpha];
    let mut limits_ok = [false; 4];
    for i in 0..4 {
        limits_ok[i] = (limits[i] - targets[i]).abs() <= tol * targets[i].abs().max(1.0);
    }
    let special_ok = last(&special) <= tol;
    Ok(AsymptoticsReport {
        re_ratio,
        im_ratio,
        w_ratio,
        t_ratio,
        special,
        limits,
        targets,
        limits_ok,
        special_ok,
    })
}

/// `c(r0) = sup_{r ≥ r0} (1 − r)/(1 − M(r))` with `M(r) = max_{||Z||=r} ||f(Z)||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub r0: f64,
    pub c: f64,
    pub radii: Vec<f64>,
    /// `1 − M(r)` at each radius.
    pub gaps: Vec<f64>,
    /// Set when `c` is within rounding of `1`: the map looks like an
    /// automorphism near the boundary rather than a strict contraction.
    pub apparent_non_elliptic: bool,
}

/// Grid estimate of the elliptic growth constant for a ball product fixing
/// the centre. `n_angles` samples per complex dimension and per splitting
/// angle; 32 radii `1 − (1 − r0) 2^{-i}`. The grid maximum is a lower bound
/// for `M(r)`.
pub fn elliptic_growth_constant(f: &MapDescriptor, r0: f64, n_angles: usize) -> Result<GrowthReport> {
    let MapDescriptor::BallProduct { components } = f else {
        return Err(Error::ModelMismatch("growth constant needs a ball product".into()));
    };
    if !(r0 > 0.0 && r0 < 1.0) {
        return Err(Error::InvalidParameter(format!("r0 = {r0} not in (0, 1)")));
    }
    if n_angles < 2 {
        return Err(Error::InvalidParameter("need at least two angles".into()));
    }
    let radii: Vec<f64> = (0..32).map(|i| 1.0 - (1.0 - r0) * 0.5f64.powi(i)).collect();
    let mut gaps = Vec::with_capacity(radii.len());
    let mut c = 0.0f64;
    for &r in &radii {
        let one_minus_r = 1.0 - r;
        let one_minus_r2 = one_minus_r * (1.0 + r);
        // 1 − M² = (1 − r²) + Σ_j (r_j² − |g_j(Z_j)|²), minimised over splits.
        let mut best = f64::INFINITY;
        for split in splits(components.len(), n_angles) {
            let d: f64 = components
                .iter()
                .zip(&split)
                .map(|(g, s)| component_deficit(g, r * s, n_angles))
                .sum();
            best = best.min(d);
        }
        let d = (one_minus_r2 + best).max(0.0);
        let gap = d / (1.0 + (1.0 - d).max(0.0).sqrt());
        gaps.push(gap);
        c = c.max(one_minus_r / gap);
    }
    Ok(GrowthReport {
        r0,
        c,
        radii,
        gaps,
        apparent_non_elliptic: c >= 1.0 - 1e-6,
    })
}

/// `min_θ (s² − |g(s e^{iθ})|²)`.
fn component_deficit(g: &OneDimMap, s: f64, n_angles: usize) -> f64 {
    if let OneDimMap::DiskScale { lambda } = g {
        let l = lambda.norm();
        return s * s * (1.0 - l) * (1.0 + l);
    }
    (0..n_angles)
        .map(|k| {
            let z = Complex64::from_polar(s, 2.0 * PI * k as f64 / n_angles as f64);
            s * s - g.eval_disk(z).norm_sqr()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Unit vectors of magnitudes `(s_1, .., s_n)` on a spherical-angle grid.
fn splits(n: usize, n_angles: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0]];
    }
    let mut out = Vec::new();
    for k in 0..n_angles {
        let phi = FRAC_PI_2 * k as f64 / (n_angles - 1) as f64;
        let (c, s) = (phi.cos(), phi.sin());
        for rest in splits(n - 1, n_angles) {
            let mut v = vec![c];
            v.extend(rest.iter().map(|x| x * s));
            out.push(v);
        }
    }
    out
}

/// The two functions of the angular-derivative argument along samples
/// approaching `q`, computed after moving `q` to the Siegel origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularReport {
    /// `|1 − π₁(f(Z))| / |1 − π₁(Z)|` in the ball.
    pub ratios: Vec<f64>,
    /// `||f(Z)'|| / |1 − π₁(Z)|^{1/2}`, tangential part of the image.
    pub tangential: Vec<f64>,
    /// Indices of samples outside the Koranyi region.
    pub rejected: Vec<usize>,
    pub bounded: bool,
    pub ratio_limit: Option<f64>,
    pub tangential_limit: Option<f64>,
}

/// Samples are given in the recentred frame, where `q` is the Siegel origin
/// and the ball is reached through the reflected chart (`1 − π₁ = 2z/(1+z)`).
pub fn angular_ratio_diagnostics(
    f: &MapDescriptor,
    q: &BoundaryPoint,
    samples: &[SiegelPoint],
    amplitude: f64,
) -> Result<AngularReport> {
    let g = recenter_at(f, q)?;
    let mut ratios = Vec::new();
    let mut tangential = Vec::new();
    let mut rejected = Vec::new();
    for (i, p) in samples.iter().enumerate() {
        if siegel_origin_koranyi_ratio(p) >= amplitude {
            rejected.push(i);
            continue;
        }
        let (z, w) = g.eval_coords(p.z(), p.w().coords());
        let gap_src = 2.0 * p.z() / (p.z() + 1.0);
        let gap_img = 2.0 * z / (z + 1.0);
        let wn = w.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt() * 2.0 / (z + 1.0).norm();
        ratios.push(gap_img.norm() / gap_src.norm());
        tangential.push(wn / gap_src.norm().sqrt());
    }
    let bounded = ratios.iter().chain(&tangential).all(|x| x.is_finite());
    Ok(AngularReport {
        ratio_limit: ratios.last().copied(),
        tangential_limit: tangential.last().copied(),
        ratios,
        tangential,
        rejected,
        bounded,
    })
}
