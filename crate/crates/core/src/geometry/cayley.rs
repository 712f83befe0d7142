//! Cayley transforms between `B^N` and `H^N`.
//!
//! The standard chart sends the ball point `(1, 0)` to infinity and `(−1, 0)`
//! to the Siegel origin. The reflected chart is the standard chart followed by
//! the inversion `(z, w) ↦ (1/z, w/z)`; it sends `(1, 0)` to the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{BallPoint, BoundaryPoint, SiegelPoint};
use super::vector::CVector;
use crate::error::Result;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `C(z, w) = ((1+z)/(1−z), w/(1−z))`.
    #[default]
    Standard,
    /// `((1−z)/(1+z), w/(1+z))`.
    Reflected,
}

impl Chart {
    pub fn to_siegel(self, p: &BallPoint) -> SiegelPoint {
        let (z, w) = p.v().split_first();
        let (num, den) = match self {
            Chart::Standard => (ONE + z, ONE - z),
            Chart::Reflected => (ONE - z, ONE + z),
        };
        SiegelPoint::raw(num / den, w.scale(ONE / den))
    }

    pub fn to_ball(self, p: &SiegelPoint) -> BallPoint {
        let z = p.z();
        let den = z + ONE;
        let first = match self {
            Chart::Standard => (z - ONE) / den,
            Chart::Reflected => (ONE - z) / den,
        };
        BallPoint::new(CVector::from_parts(first, &p.w().scale(2.0 / den)))
            .unwrap_or_else(|_| clamp_to_ball(first, &p.w().scale(2.0 / den)))
    }

    /// Raw coordinate version of [`Chart::to_siegel`], no validity check.
    pub fn coords_to_siegel(self, v: &CVector) -> CVector {
        let (z, w) = v.split_first();
        let (num, den) = match self {
            Chart::Standard => (ONE + z, ONE - z),
            Chart::Reflected => (ONE - z, ONE + z),
        };
        CVector::from_parts(num / den, &w.scale(ONE / den))
    }

    /// Raw coordinate version of [`Chart::to_ball`], no validity check.
    pub fn coords_to_ball(self, v: &CVector) -> CVector {
        let (z, w) = v.split_first();
        let den = z + ONE;
        let first = match self {
            Chart::Standard => (z - ONE) / den,
            Chart::Reflected => (ONE - z) / den,
        };
        CVector::from_parts(first, &w.scale(2.0 / den))
    }

    /// Ball boundary point to Siegel boundary point (possibly infinity).
    pub fn boundary_to_siegel(self, q: &BoundaryPoint) -> Result<BoundaryPoint> {
        match q {
            BoundaryPoint::Ball { v } => {
                let (z, _) = v.split_first();
                let pole = match self {
                    Chart::Standard => ONE - z,
                    Chart::Reflected => ONE + z,
                };
                if pole.norm() < 1e-15 {
                    Ok(BoundaryPoint::infinity(v.dim()))
                } else {
                    BoundaryPoint::siegel(self.coords_to_siegel(v))
                }
            }
            other => Ok(other.clone()),
        }
    }

    /// Siegel boundary point (or infinity) to ball boundary point.
    pub fn boundary_to_ball(self, q: &BoundaryPoint) -> Result<BoundaryPoint> {
        match q {
            BoundaryPoint::Siegel { v } => BoundaryPoint::ball(self.coords_to_ball(v)),
            BoundaryPoint::Infinity { dim } => {
                let mut v = CVector::e1(*dim);
                if self == Chart::Reflected {
                    v = -&v;
                }
                BoundaryPoint::ball(v)
            }
            other => Ok(other.clone()),
        }
    }
}

/// Rounding can push the image of a point with tiny defect onto the sphere;
/// pull it back inside by one ulp-scale factor.
fn clamp_to_ball(first: Complex64, w: &CVector) -> BallPoint {
    let v = CVector::from_parts(first, w);
    let n = v.norm();
    BallPoint::new(v.scale_re((1.0 - 1e-16) / n)).expect("rescaled point lies in the ball")
}

/// Standard Cayley transform `B^N → H^N`.
pub fn cayley_to_siegel(p: &BallPoint) -> SiegelPoint {
    Chart::Standard.to_siegel(p)
}

/// Inverse standard Cayley transform `H^N → B^N`.
pub fn siegel_to_ball(p: &SiegelPoint) -> BallPoint {
    Chart::Standard.to_ball(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn centre_and_base_point() {
        let o = BallPoint::origin(2);
        let s = cayley_to_siegel(&o);
        assert_eq!(s.z(), c(1.0, 0.0));
        assert_eq!(s.w().norm(), 0.0);
        assert_eq!(siegel_to_ball(&s), o);
    }

    #[test]
    fn near_boundary_point() {
        let p = BallPoint::new(CVector::from_reals(&[-1.0 + 1e-9]).unwrap()).unwrap();
        let s = cayley_to_siegel(&p);
        // 1e-9 / (2 - 1e-9), evaluated exactly enough for a 1e-6 relative check
        let expected = 1e-9 / (2.0 - 1e-9);
        assert!((s.z().re - expected).abs() / expected < 1e-6);
        assert!((s.defect() - expected).abs() / expected < 1e-6);
    }

    #[test]
    fn axis_points() {
        for t in [0.1, 0.5, 1.0, 3.0, 40.0] {
            let b = siegel_to_ball(&SiegelPoint::axis(t, 2).unwrap());
            assert!((b.v()[0].re - (t - 1.0) / (t + 1.0)).abs() < 1e-15);
        }
        let b = siegel_to_ball(&SiegelPoint::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).unwrap());
        assert!(b.norm() < 1.0);
    }

    #[test]
    fn reflected_chart_swaps_poles() {
        let one = BoundaryPoint::ball(CVector::e1(2)).unwrap();
        assert!(Chart::Standard.boundary_to_siegel(&one).unwrap().is_infinity());
        let r = Chart::Reflected.boundary_to_siegel(&one).unwrap();
        assert_eq!(r, BoundaryPoint::siegel_origin(2));
        let back = Chart::Reflected.boundary_to_ball(&r).unwrap();
        assert_eq!(back, one);
    }
}
