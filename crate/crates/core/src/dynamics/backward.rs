use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::forward::limit_from_tail;
use super::solver::{newton_preimage, SolverPolicy};
use crate::error::{Error, Result};
use crate::geometry::{dist_siegel, siegel_origin_koranyi_ratio, BoundaryPoint, CVector, Chart, SiegelAutomorphism, SiegelPoint};
use crate::maps::{quadratic_inverse, MapDescriptor};
use crate::policy::policy;

/// Why a backward orbit ended before the requested length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    NoBackwardStep { best_step: Option<f64> },
    SolverFailure { residual: f64 },
}

/// A finite backward-iteration sequence `f(Z_{k+1}) = Z_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackwardOrbit {
    pub points: Vec<SiegelPoint>,
    /// `d(Z_k, Z_{k+1})`.
    pub steps: Vec<f64>,
    /// `t_k = defect(Z_k)`.
    pub defects: Vec<f64>,
    pub step_bound: f64,
    /// Limit estimated from the boundary projections of the last five points.
    pub limit: BoundaryPoint,
    /// The limit in the ball, through [`BackwardOrbit::chart`].
    pub limit_ball: Option<BoundaryPoint>,
    /// Median of `t_k/t_{k+1}` over the last quarter, with defects measured
    /// after moving the limit to the Siegel origin. `None` for a single point.
    pub multiplier_estimate: Option<f64>,
    /// Largest Koranyi ratio of the orbit at its limit.
    pub koranyi_certificate: f64,
    /// Set when the orbit was truncated.
    pub stop: Option<StopReason>,
    pub chart: Chart,
}

impl BackwardOrbit {
    /// Assembles the derived fields from a list of points.
    pub fn from_points(points: Vec<SiegelPoint>, step_bound: f64, chart: Chart, stop: Option<StopReason>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::OrbitTooShort { len: 0, needed: 1 });
        }
        let steps = points
            .windows(2)
            .map(|p| dist_siegel(&p[0], &p[1]))
            .collect::<Result<Vec<_>>>()?;
        let defects = points.iter().map(SiegelPoint::defect).collect();
        let tail = &points[points.len().saturating_sub(5)..];
        let limit = limit_from_tail(tail, chart)?;
        let limit_ball = chart.boundary_to_ball(&limit).ok();
        let h = SiegelAutomorphism::recentering(&limit)?;
        let moved: Vec<SiegelPoint> = points.iter().map(|p| h.apply(p)).collect::<Result<_>>()?;
        let t: Vec<f64> = moved.iter().map(SiegelPoint::defect).collect();
        let multiplier_estimate = if t.len() < 2 {
            None
        } else {
            let ratios: Vec<f64> = t.windows(2).map(|p| p[0] / p[1]).collect();
            let start = ratios.len() - (ratios.len() / 4).max(1);
            Some(median(&ratios[start..]))
        };
        let koranyi_certificate = moved.iter().map(siegel_origin_koranyi_ratio).fold(0.0, f64::max);
        Ok(Self {
            points,
            steps,
            defects,
            step_bound,
            limit,
            limit_ball,
            multiplier_estimate,
            koranyi_certificate,
            stop,
            chart,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// All preimages of `v` when the family has a closed-form inverse.
fn closed_form_preimages(f: &MapDescriptor, v: &CVector) -> Option<Vec<CVector>> {
    let (z, w) = v.split_first();
    match f {
        MapDescriptor::Quadratic(q) => quadratic_inverse(q, v).ok().map(|p| vec![p.point]),
        MapDescriptor::Lifted { phi } => {
            let w2 = w[0] * w[0];
            Some(
                phi.preimages_half_plane(z - w2)
                    .into_iter()
                    .map(|u| CVector::from_parts(u + w2, &w))
                    .collect(),
            )
        }
        MapDescriptor::DiagonalLinear { alpha, lambda } => {
            if lambda.iter().any(|l| l.norm() == 0.0) {
                return None;
            }
            let nw: Vec<Complex64> = w.coords().iter().zip(lambda).map(|(x, l)| x / l).collect();
            Some(vec![CVector::from_parts(z / alpha, &CVector::raw(nw))])
        }
        MapDescriptor::Conjugated { base, by } => {
            let inv = by.inverse();
            let (bz, bw) = inv.apply_coords(z, w.coords());
            let pre = closed_form_preimages(base, &CVector::from_parts(bz, &CVector::raw(bw)))?;
            Some(
                pre.into_iter()
                    .map(|p| {
                        let (pz, pw) = p.split_first();
                        let (nz, nw) = by.apply_coords(pz, pw.coords());
                        CVector::from_parts(nz, &CVector::raw(nw))
                    })
                    .collect(),
            )
        }
        MapDescriptor::BallProduct { components } => {
            if components[1..]
                .iter()
                .any(|g| g.derivative_at_centre().is_some_and(|d| d.norm() == 0.0))
            {
                return None;
            }
            // Reflected chart: the first coordinate is the half-plane variable
            // of the first component; the others are rescaled disk variables.
            let firsts = components[0].preimages_half_plane(z);
            let targets: Vec<Complex64> = w.coords().iter().map(|x| 2.0 * x / (z + 1.0)).collect();
            let mut tangential: Vec<Vec<Complex64>> = vec![Vec::new()];
            for (g, t) in components[1..].iter().zip(&targets) {
                let pre = g.preimages_disk(*t);
                tangential = tangential
                    .into_iter()
                    .flat_map(|prefix| {
                        pre.iter().map(move |x| {
                            let mut p = prefix.clone();
                            p.push(*x);
                            p
                        })
                    })
                    .collect();
            }
            let mut out = Vec::new();
            for u in firsts {
                for xs in &tangential {
                    let nw: Vec<Complex64> = xs.iter().map(|x| x * (u + 1.0) * 0.5).collect();
                    out.push(CVector::from_parts(u, &CVector::raw(nw)));
                }
            }
            Some(out)
        }
    }
}

fn relative_residual(f: &MapDescriptor, cand: &CVector, target: &CVector) -> f64 {
    f.eval_cvector(cand).max_abs_diff(target) / target.norm().max(1.0)
}

/// One backward step: a preimage of `zn` within pseudo-hyperbolic distance `a`.
///
/// Closed-form inverses are used when the family has them; otherwise a damped
/// Newton iteration seeded at `zn`. Among admissible preimages the one with
/// the smallest step wins, ties going to the smaller defect.
pub fn backward_step(f: &MapDescriptor, zn: &SiegelPoint, a: f64, solver: &SolverPolicy) -> Result<SiegelPoint> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!("step bound {a} not in (0, 1)")));
    }
    if zn.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: zn.dim(),
        });
    }
    let target = zn.to_cvector();
    let closed = closed_form_preimages(f, &target);
    let mut candidates: Vec<CVector> = Vec::new();
    let mut newton_failure = None;
    match (&closed, solver.force_newton) {
        (Some(c), false) => candidates.extend(
            c.iter()
                .filter(|p| p.is_finite() && relative_residual(f, p, &target) <= 1e-10)
                .cloned(),
        ),
        _ => {
            let mut seeds = vec![target.clone()];
            if let Some(c) = &closed {
                seeds.extend(c.iter().filter(|p| p.is_finite()).cloned());
            }
            for s in &seeds {
                match newton_preimage(f, &target, s, solver) {
                    Ok((root, _)) => candidates.push(root),
                    Err(Error::SolverFailure { residual, .. }) => newton_failure = Some(residual),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let bound = a + policy().validity_tol;
    let mut best: Option<(f64, f64, SiegelPoint)> = None;
    let mut best_step: Option<f64> = None;
    for c in candidates {
        let Ok(p) = SiegelPoint::from_cvector(&c) else {
            continue;
        };
        let d = dist_siegel(zn, &p)?;
        best_step = Some(best_step.map_or(d, |b: f64| b.min(d)));
        if d > bound {
            continue;
        }
        let t = p.defect();
        let better = match &best {
            None => true,
            Some((bd, bt, _)) => d < *bd || (d == *bd && t < *bt),
        };
        if better {
            best = Some((d, t, p));
        }
    }
    match (best, newton_failure, best_step) {
        (Some((_, _, p)), _, _) => Ok(p),
        (None, Some(residual), None) => Err(Error::SolverFailure {
            residual,
            iterations: solver.max_iter,
        }),
        (None, _, best_step) => Err(Error::NoBackwardStep { bound: a, best_step }),
    }
}

/// Up to `n` backward steps from `z0`. A failure at the first step is an
/// error; later failures truncate the orbit and are recorded in `stop`.
pub fn backward_orbit(
    f: &MapDescriptor,
    z0: &SiegelPoint,
    a: f64,
    n: usize,
    solver: &SolverPolicy,
) -> Result<BackwardOrbit> {
    let mut points = vec![z0.clone()];
    let mut stop = None;
    for k in 0..n {
        match backward_step(f, points.last().expect("non-empty"), a, solver) {
            Ok(p) => points.push(p),
            Err(e) if k == 0 => return Err(e),
            Err(Error::NoBackwardStep { best_step, .. }) => {
                stop = Some(StopReason::NoBackwardStep { best_step });
                break;
            }
            Err(Error::SolverFailure { residual, .. }) => {
                stop = Some(StopReason::SolverFailure { residual });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    BackwardOrbit::from_points(points, a, f.chart(), stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{evaluate, fixtures};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadpol_axis_step() {
        let f = fixtures::quadpol();
        let p = backward_step(&f, &SiegelPoint::axis(1.0, 2).unwrap(), 0.4, &SolverPolicy::default()).unwrap();
        assert_eq!(p.z(), c(0.5, 0.0));
        let d = dist_siegel(&SiegelPoint::axis(1.0, 2).unwrap(), &p).unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
        let err = backward_step(&f, &SiegelPoint::axis(1.0, 2).unwrap(), 0.3, &SolverPolicy::default());
        assert!(matches!(err, Err(Error::NoBackwardStep { .. })));
    }

    #[test]
    fn lifted_inverse() {
        let f = fixtures::lifted_2z();
        let zn = SiegelPoint::new(c(3.0, 0.5), vec![c(0.7, 0.0)]).unwrap();
        let p = backward_step(&f, &zn, 0.9, &SolverPolicy::default()).unwrap();
        assert!((p.z() - c((3.0 + 0.49) / 2.0, 0.25)).norm() < 1e-15);
        assert_eq!(p.w()[0], c(0.7, 0.0));
    }

    #[test]
    fn diagonal_step_bound_decides() {
        let f = fixtures::diagonal_2_1();
        let zn = SiegelPoint::new(c(1.0, 0.0), vec![c(0.1, 0.0)]).unwrap();
        let cand = SiegelPoint::new(c(0.5, 0.0), vec![c(0.1, 0.0)]).unwrap();
        let d = dist_siegel(&zn, &cand).unwrap();
        let ok = backward_step(&f, &zn, d + 1e-6, &SolverPolicy::default()).unwrap();
        assert!(ok.to_cvector().max_abs_diff(&cand.to_cvector()) < 1e-15);
        assert!(backward_step(&f, &zn, d - 1e-6, &SolverPolicy::default()).is_err());
    }

    #[test]
    fn newton_agrees_with_closed_forms() {
        let forced = SolverPolicy {
            force_newton: true,
            ..SolverPolicy::default()
        };
        let zn = SiegelPoint::new(c(0.9, 0.3), vec![c(0.2, -0.1)]).unwrap();
        for f in [fixtures::quadpol(), fixtures::lifted_2z(), fixtures::blaschke_product()] {
            let a = backward_step(&f, &zn, 0.9, &SolverPolicy::default()).unwrap();
            let b = backward_step(&f, &zn, 0.9, &forced).unwrap();
            assert!(a.to_cvector().max_abs_diff(&b.to_cvector()) < 1e-9, "{f:?}");
        }
    }

    #[test]
    fn quadpol_orbit() {
        let o = backward_orbit(&fixtures::quadpol(), &SiegelPoint::axis(1.0, 2).unwrap(), 0.34, 40, &SolverPolicy::default())
            .unwrap();
        assert_eq!(o.len(), 41);
        for (k, p) in o.points.iter().enumerate() {
            assert_eq!(p.z(), c(0.5f64.powi(k as i32), 0.0));
        }
        for d in &o.steps {
            assert!((d - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(o.limit, BoundaryPoint::siegel_origin(2));
        assert_eq!(o.multiplier_estimate, Some(2.0));
        assert!(o.koranyi_certificate.is_finite());
        assert!(o.stop.is_none());
    }

    #[test]
    fn lifted_orbit_reaches_the_curve() {
        let f = fixtures::lifted_2z();
        let z0 = SiegelPoint::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).unwrap();
        let o = backward_orbit(&f, &z0, 0.34, 40, &SolverPolicy::default()).unwrap();
        for (k, p) in o.points.iter().enumerate() {
            assert_eq!(p.z(), c(1.0 + 0.5f64.powi(k as i32), 0.0));
        }
        for d in &o.steps {
            assert!((d - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(o.limit, BoundaryPoint::siegel(CVector::from_reals(&[1.0, 1.0]).unwrap()).unwrap());
        for pair in o.points.windows(2) {
            let img = evaluate(&f, &pair[1]).unwrap();
            assert!(img.to_cvector().max_abs_diff(&pair[0].to_cvector()) < 1e-10);
        }
    }

    #[test]
    fn elliptic_orbit_converges_to_ball_point() {
        let f = fixtures::blaschke_product();
        let start = Chart::Reflected.to_siegel(&crate::geometry::BallPoint::new(CVector::from_reals(&[0.5, 0.0]).unwrap()).unwrap());
        let o = backward_orbit(&f, &start, 0.34, 80, &SolverPolicy::default()).unwrap();
        assert_eq!(o.limit_ball, Some(BoundaryPoint::ball(CVector::e1(2)).unwrap()));
        assert!((o.multiplier_estimate.unwrap() - 4.0 / 3.0).abs() < 1e-4);
        // b(z) = z (z + 1/2)/(1 + z/2) evaluated directly in the disk.
        let b = |z: f64| z * (z + 0.5) / (1.0 + 0.5 * z);
        for pair in o.points.windows(2) {
            let x0 = Chart::Reflected.to_ball(&pair[0]).v()[0].re;
            let x1 = Chart::Reflected.to_ball(&pair[1]).v()[0].re;
            assert!((b(x1) - x0).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_is_recorded() {
        // Backward steps double w and halve z, so the orbit leaves H^2.
        let f = MapDescriptor::DiagonalLinear {
            alpha: 2.0,
            lambda: vec![c(0.5, 0.0)],
        };
        let z0 = SiegelPoint::new(c(1.0, 0.0), vec![c(0.1, 0.0)]).unwrap();
        let o = backward_orbit(&f, &z0, 0.99, 50, &SolverPolicy::default()).unwrap();
        assert_eq!(o.len(), 3);
        assert!(matches!(o.stop, Some(StopReason::NoBackwardStep { .. })));
    }
}
