//! Horospheres and Koranyi approach regions.

use serde::{Deserialize, Serialize};

use super::point::{BallPoint, BoundaryPoint, ModelPoint, SiegelPoint};
use super::vector::CVector;
use crate::error::{Error, Result};

/// An open horosphere. Membership is strict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Horosphere {
    /// `{Z : |1 − (Z,X)|² / (1 − ||Z||²) < R}`.
    Ball { center: CVector, radius: f64 },
    /// `{P : defect(P) > t}`, the horosphere at infinity.
    SiegelInfinity { level: f64 },
}

impl Horosphere {
    pub fn ball(center: &BoundaryPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("horosphere radius {radius}")));
        }
        match center {
            BoundaryPoint::Ball { v } => Ok(Self::Ball {
                center: v.clone(),
                radius,
            }),
            _ => Err(Error::ModelMismatch("ball horosphere needs a ball boundary point".into())),
        }
    }

    pub fn siegel_infinity(level: f64) -> Result<Self> {
        if !(level > 0.0) {
            return Err(Error::InvalidParameter(format!("horosphere level {level}")));
        }
        Ok(Self::SiegelInfinity { level })
    }
}

/// `|1 − (Z,X)|² / (1 − ||Z||²)`.
pub fn ball_horo_value(z: &BallPoint, x: &CVector) -> f64 {
    (1.0 - z.v().inner(x)).norm_sqr() / (1.0 - z.v().norm_sqr())
}

/// Horofunction at the Siegel origin: `|z|² / t`. Its sublevel sets are the
/// horospheres at `0`, in either Cayley chart.
pub fn siegel_origin_horo_value(p: &SiegelPoint) -> f64 {
    p.z().norm_sqr() / p.defect()
}

pub fn horosphere_contains(h: &Horosphere, p: &ModelPoint) -> Result<bool> {
    match (h, p) {
        (Horosphere::Ball { center, radius }, ModelPoint::Ball(z)) => {
            center.check_dim(z.v())?;
            Ok(ball_horo_value(z, center) < *radius)
        }
        (Horosphere::SiegelInfinity { level }, ModelPoint::Siegel(q)) => Ok(q.defect() > *level),
        _ => Err(Error::ModelMismatch(
            "horosphere and point belong to different models".into(),
        )),
    }
}

/// `K(q, M) = {Z : |1 − (Z,q)| / (1 − ||Z||) < M}` with vertex on `∂B^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoranyiRegion {
    pub vertex: CVector,
    pub amplitude: f64,
}

impl KoranyiRegion {
    pub fn new(vertex: &BoundaryPoint, amplitude: f64) -> Result<Self> {
        if !(amplitude > 1.0) {
            return Err(Error::InvalidParameter(format!("Koranyi amplitude {amplitude} <= 1")));
        }
        match vertex {
            BoundaryPoint::Ball { v } => Ok(Self {
                vertex: v.clone(),
                amplitude,
            }),
            _ => Err(Error::ModelMismatch("Koranyi vertex must be a ball boundary point".into())),
        }
    }
}

pub fn koranyi_ratio(z: &BallPoint, vertex: &CVector) -> f64 {
    let n = z.v().norm();
    (1.0 - z.v().inner(vertex)).norm() / (1.0 - n)
}

pub fn koranyi_contains(k: &KoranyiRegion, z: &BallPoint) -> bool {
    koranyi_ratio(z, &k.vertex) < k.amplitude
}

/// Koranyi ratio of `P` at the Siegel origin, measured in the ball through
/// either Cayley chart (the two charts give the same value). Evaluated from
/// Siegel coordinates so it stays accurate as `P` approaches the vertex.
pub fn siegel_origin_koranyi_ratio(p: &SiegelPoint) -> f64 {
    let z = p.z();
    let t = p.defect();
    let zp1 = (z + 1.0).norm();
    let gap = 4.0 * t / (zp1 * zp1);
    let ball_norm = (1.0 - gap).max(0.0).sqrt();
    z.norm() * zp1 * (1.0 + ball_norm) / (2.0 * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cayley::{siegel_to_ball, Chart};
    use num_complex::Complex64;

    #[test]
    fn siegel_horosphere_is_strict() {
        let h = Horosphere::siegel_infinity(1.0).unwrap();
        let p2 = ModelPoint::Siegel(SiegelPoint::axis(2.0, 2).unwrap());
        let p1 = ModelPoint::Siegel(SiegelPoint::axis(1.0, 2).unwrap());
        assert!(horosphere_contains(&h, &p2).unwrap());
        assert!(!horosphere_contains(&h, &p1).unwrap());
        let b = ModelPoint::Ball(BallPoint::origin(2));
        assert!(horosphere_contains(&h, &b).is_err());
    }

    #[test]
    fn koranyi_at_centre_and_radial() {
        let q = BoundaryPoint::ball(CVector::from_reals(&[0.6, 0.8]).unwrap()).unwrap();
        let k = KoranyiRegion::new(&q, 2.0).unwrap();
        assert!(koranyi_contains(&k, &BallPoint::origin(2)));
        let qv = q.coords().unwrap();
        for eps in [1e-2, 1e-5, 1e-9] {
            let z = BallPoint::new(qv.scale_re(1.0 - eps)).unwrap();
            assert!(koranyi_contains(&k, &z));
            assert!((koranyi_ratio(&z, qv) - 1.0).abs() < 1e-6);
        }
        assert!(KoranyiRegion::new(&q, 1.0).is_err());
    }

    #[test]
    fn origin_ratio_matches_ball_formula_in_both_charts() {
        let p = SiegelPoint::new(Complex64::new(0.3, 0.2), vec![Complex64::new(0.1, 0.2)]).unwrap();
        let r = siegel_origin_koranyi_ratio(&p);
        let b = siegel_to_ball(&p);
        let minus_one = -&CVector::e1(2);
        assert!((koranyi_ratio(&b, &minus_one) - r).abs() < 1e-12);
        let b2 = Chart::Reflected.to_ball(&p);
        assert!((koranyi_ratio(&b2, &CVector::e1(2)) - r).abs() < 1e-12);
    }
}
