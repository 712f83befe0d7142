use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_siegel, BoundaryPoint, CVector, Chart, SiegelPoint};
use crate::maps::{evaluate, DenjoyWolff, MapDescriptor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardOrbit {
    pub points: Vec<SiegelPoint>,
    /// `d(Z_n, Z_{n+1})`.
    pub steps: Vec<f64>,
    pub dw_estimate: Option<DenjoyWolff>,
    pub converged: bool,
}

/// `1 − ||B||` for the ball image `B` of `P` (either chart), from Siegel
/// coordinates: `1 − ||B||² = 4t/|z + 1|²`.
pub fn ball_gap(p: &SiegelPoint) -> f64 {
    let g2 = 4.0 * p.defect() / (p.z() + 1.0).norm_sqr();
    g2 / (1.0 + (1.0 - g2).max(0.0).sqrt())
}

/// Iterates `f` from `Z0` until the orbit is within `tol` of the boundary
/// (defect or ball gap below `tol`), the step drops below `tol` (interior
/// convergence), or `n_max` iterations are used.
pub fn forward_orbit(f: &MapDescriptor, z0: &SiegelPoint, n_max: usize, tol: f64) -> Result<ForwardOrbit> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let mut points = vec![checked_start(f, z0)?];
    let mut steps = Vec::new();
    let mut converged = false;
    let mut interior = false;
    for _ in 0..n_max {
        let cur = points.last().expect("non-empty");
        let next = match evaluate(f, cur) {
            Ok(p) => p,
            // Rounding pushed the image onto the boundary.
            Err(Error::OutsideDomain(_)) => {
                converged = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let d = dist_siegel(cur, &next)?;
        steps.push(d);
        points.push(next);
        let last = points.last().expect("non-empty");
        if last.defect() < tol || ball_gap(last) < tol {
            converged = true;
            break;
        }
        if d < tol {
            converged = true;
            interior = true;
            break;
        }
    }
    let last = points.last().expect("non-empty");
    let dw_estimate = Some(if interior {
        DenjoyWolff::Interior { point: last.clone() }
    } else {
        DenjoyWolff::Boundary {
            point: limit_from_tail(std::slice::from_ref(last), f.chart())?,
        }
    });
    Ok(ForwardOrbit {
        points,
        steps,
        dw_estimate,
        converged,
    })
}

/// Boundary point approached by a tail of points: infinity when the last
/// point is within `1e-3` of the chart's infinity in the ball, otherwise the
/// averaged boundary projection, put back on the boundary.
pub(crate) fn limit_from_tail(tail: &[SiegelPoint], chart: Chart) -> Result<BoundaryPoint> {
    let last = tail.last().ok_or(Error::OrbitTooShort { len: 0, needed: 1 })?;
    let dim = last.dim();
    let ball = chart.coords_to_ball(&last.to_cvector());
    let infinity = chart
        .boundary_to_ball(&BoundaryPoint::infinity(dim))?
        .coords()
        .cloned()
        .expect("finite ball point");
    if ball.max_abs_diff(&infinity) < 1e-3 {
        return Ok(BoundaryPoint::infinity(dim));
    }
    let n = tail.len() as f64;
    let y = tail.iter().map(|p| p.z().im).sum::<f64>() / n;
    let mut w = CVector::zeros(dim - 1);
    for p in tail {
        w = &w + p.w();
    }
    let w = w.scale_re(1.0 / n);
    BoundaryPoint::siegel(CVector::from_parts(Complex64::new(w.norm_sqr(), y), &w))
}

fn checked_start(f: &MapDescriptor, z0: &SiegelPoint) -> Result<SiegelPoint> {
    if z0.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: z0.dim(),
        });
    }
    Ok(z0.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::fixtures;

    #[test]
    fn quadpol_escapes_to_infinity() {
        let o = forward_orbit(&fixtures::quadpol(), &SiegelPoint::axis(1.0, 2).unwrap(), 20, 1e-10).unwrap();
        for (k, p) in o.points.iter().enumerate() {
            assert_eq!(p.z(), Complex64::new(2f64.powi(k as i32), 0.0));
        }
        assert_eq!(
            o.dw_estimate,
            Some(DenjoyWolff::Boundary {
                point: BoundaryPoint::infinity(2)
            })
        );
    }

    #[test]
    fn attracting_quadratic_tends_to_origin() {
        let z0 = SiegelPoint::new(Complex64::new(1.5, 0.7), vec![Complex64::new(0.3, -0.4)]).unwrap();
        let o = forward_orbit(&fixtures::quadratic_attracting(), &z0, 200, 1e-12).unwrap();
        assert!(o.converged);
        let Some(DenjoyWolff::Boundary { point }) = &o.dw_estimate else {
            panic!("expected a boundary point")
        };
        assert!(point.coords().unwrap().norm() < 1e-5);
        for pair in o.steps.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-10);
        }
    }

    #[test]
    fn diagonal_contraction() {
        let f = MapDescriptor::DiagonalLinear {
            alpha: 0.5,
            lambda: vec![Complex64::new(0.5, 0.0)],
        };
        let o = forward_orbit(&f, &SiegelPoint::axis(1.0, 2).unwrap(), 60, 1e-12).unwrap();
        for (k, p) in o.points.iter().enumerate() {
            assert_eq!(p.z().re, 0.5f64.powi(k as i32));
        }
        let Some(DenjoyWolff::Boundary { point }) = &o.dw_estimate else {
            panic!()
        };
        assert_eq!(point.coords().unwrap().norm(), 0.0);
    }
}
