use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, SiegelPoint};
use crate::maps::{recenter_at, MapDescriptor};

/// Radial estimate of the boundary dilation coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierEstimate {
    /// Minimum of the defect ratio over the tail (last half) of the samples;
    /// `+∞` when the ratios diverge.
    pub value: f64,
    /// Minimum over all samples.
    pub full_min: f64,
    /// First-order Richardson extrapolation from the last two samples.
    pub richardson: f64,
    /// `defect(g(x_k, 0)) / x_k` for `x_k = decay^k`, `k = 1..=n_samples`.
    pub samples: Vec<f64>,
    pub diverges: bool,
}

/// Boundary dilation coefficient of `f` at `q`. The map is recentred so that
/// `q` sits at the Siegel origin, then `defect(g(x, 0))/x` is sampled along the
/// axis at `x = decay^k`.
pub fn multiplier_at_boundary(
    f: &MapDescriptor,
    q: &BoundaryPoint,
    decay: f64,
    n_samples: usize,
) -> Result<MultiplierEstimate> {
    if !(decay > 0.0 && decay < 1.0) {
        return Err(Error::InvalidParameter(format!("decay {decay} not in (0, 1)")));
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least two radial samples".into()));
    }
    let g = recenter_at(f, q)?;
    let dim = g.dim();
    let mut samples = Vec::with_capacity(n_samples);
    let mut x = 1.0;
    for _ in 0..n_samples {
        x *= decay;
        let p = SiegelPoint::axis(x, dim)?;
        let (z, w) = g.eval_coords(p.z(), p.w().coords());
        let t = z.re - w.iter().map(|c| c.norm_sqr()).sum::<f64>();
        samples.push(t / x);
    }
    let tail = &samples[n_samples / 2..];
    let full_min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let tail_min = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let (r1, r0) = (samples[n_samples - 1], samples[n_samples - 2]);
    let richardson = (r1 - decay * r0) / (1.0 - decay);
    // Divergence: non-finite samples, or a tail that keeps growing by a
    // constant factor per sample.
    let growth = tail.windows(2).map(|p| p[1] / p[0]).fold(f64::INFINITY, f64::min);
    let diverges = samples.iter().any(|s| !s.is_finite()) || (growth > 1.05 && tail.len() >= 3);
    Ok(MultiplierEstimate {
        value: if diverges { f64::INFINITY } else { tail_min },
        full_min,
        richardson,
        samples,
        diverges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{CVector, SiegelAutomorphism};
    use crate::maps::fixtures;
    use num_complex::Complex64;

    #[test]
    fn quadpol_at_both_fixed_points() {
        let f = fixtures::quadpol();
        let at0 = multiplier_at_boundary(&f, &BoundaryPoint::siegel_origin(2), 0.5, 40).unwrap();
        assert!((at0.value - 2.0).abs() < 1e-6);
        let at_inf = multiplier_at_boundary(&f, &BoundaryPoint::infinity(2), 0.5, 40).unwrap();
        assert!((at_inf.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn linear_model_is_exact() {
        let f = MapDescriptor::conjugated(
            MapDescriptor::DiagonalLinear {
                alpha: 3.0,
                lambda: vec![Complex64::new(3f64.sqrt(), 0.0)],
            },
            SiegelAutomorphism::identity(),
        );
        let m = multiplier_at_boundary(&f, &BoundaryPoint::siegel_origin(2), 0.5, 30).unwrap();
        assert!((m.value - 3.0).abs() < 1e-14);
    }

    #[test]
    fn curve_point_and_blaschke() {
        let f = fixtures::quadpol();
        let r = 0.9;
        let q = BoundaryPoint::siegel(CVector::new(vec![Complex64::new(r * r, 0.0), Complex64::new(0.0, r)]).unwrap())
            .unwrap();
        let m = multiplier_at_boundary(&f, &q, 0.5, 40).unwrap();
        assert!((m.value - 2.0).abs() < 1e-12);
        let b = fixtures::blaschke_product();
        let e1 = BoundaryPoint::ball(CVector::e1(2)).unwrap();
        let m = multiplier_at_boundary(&b, &e1, 0.5, 40).unwrap();
        assert!((m.value - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_ratio_reported_infinite() {
        // (0, 1) is sent into the interior, so the defect ratio blows up.
        let f = fixtures::blaschke_product();
        let q = BoundaryPoint::ball(CVector::from_reals(&[0.0, 1.0]).unwrap()).unwrap();
        let m = multiplier_at_boundary(&f, &q, 0.5, 40).unwrap();
        assert!(m.value.is_infinite() && m.diverges);
    }
}
