//! Pseudo-hyperbolic distances.
//!
//! Both formulas are evaluated in a cancellation-free form: the numerator
//! `|1 − (Z,W)|² − (1 − ||Z||²)(1 − ||W||²)` is rewritten through the
//! difference `Z − W`, so nearby points keep full relative accuracy.

use super::point::{BallPoint, SiegelPoint};
use super::vector::CVector;
use crate::error::{Error, Result};

/// `d(Z, W)` in `B^N`.
pub fn dist_ball(z: &BallPoint, w: &BallPoint) -> Result<f64> {
    z.v().check_dim(w.v())?;
    Ok(dist_ball_coords(z.v(), w.v()))
}

pub(crate) fn dist_ball_coords(z: &CVector, w: &CVector) -> f64 {
    let d = z - w;
    let mut num = d.norm_sqr();
    let (dc, wc) = (d.coords(), w.coords());
    for i in 0..dc.len() {
        for j in (i + 1)..dc.len() {
            num -= (dc[i] * wc[j] - dc[j] * wc[i]).norm_sqr();
        }
    }
    let den = (1.0 - z.inner(w)).norm_sqr();
    (num.max(0.0) / den).sqrt().min(1.0)
}

/// `d(P, Q)` in `H^N`.
pub fn dist_siegel(p: &SiegelPoint, q: &SiegelPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(dist_siegel_unchecked(p, q))
}

pub(crate) fn dist_siegel_unchecked(p: &SiegelPoint, q: &SiegelPoint) -> f64 {
    let (t1, t2) = (p.defect(), q.defect());
    let dw = p.w() - q.w();
    let s = dw.norm_sqr();
    let im = p.z().im - q.z().im - 2.0 * dw.inner(q.w()).im;
    let num = (t1 - t2).powi(2) + s * s + 2.0 * s * (t1 + t2) + im * im;
    (num / (num + 4.0 * t1 * t2)).sqrt()
}

/// `t = Re z − ||w||²`.
pub fn defect(p: &SiegelPoint) -> f64 {
    p.defect()
}

/// Euclidean projection `pr(z, w) = (i Im z + ||w||², w)` onto `∂H^N`.
pub fn boundary_projection(p: &SiegelPoint) -> CVector {
    let z = num_complex::Complex64::new(p.w().norm_sqr(), p.z().im);
    CVector::from_parts(z, p.w())
}

/// Range of `||W||` over the closed pseudo-hyperbolic ball of radius `d` at `Z`.
pub fn hyperbolic_ball_extremes(z: &BallPoint, d: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::InvalidParameter(format!("radius {d} not in [0, 1)")));
    }
    let r = z.norm();
    let min = ((r - d) / (1.0 - d * r)).max(0.0);
    let max = (r + d) / (1.0 + d * r);
    Ok((min, max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cayley::siegel_to_ball;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn naive_ball(z: &CVector, w: &CVector) -> f64 {
        let num = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr());
        (1.0 - num / (1.0 - z.inner(w)).norm_sqr()).max(0.0).sqrt()
    }

    #[test]
    fn siegel_axis_values() {
        let one = SiegelPoint::axis(1.0, 2).unwrap();
        let half = SiegelPoint::axis(0.5, 2).unwrap();
        assert!((dist_siegel(&one, &half).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(dist_siegel(&half, &half).unwrap(), 0.0);
        for t in [0.01, 0.2, 0.7, 0.99] {
            let p = SiegelPoint::axis(t, 2).unwrap();
            let d = dist_siegel(&one, &p).unwrap();
            assert!((d - (1.0 - t) / (1.0 + t)).abs() < 1e-15);
        }
    }

    #[test]
    fn distance_to_origin_is_norm() {
        let z = BallPoint::new(CVector::new(vec![c(0.3, -0.2), c(0.1, 0.5)]).unwrap()).unwrap();
        let o = BallPoint::origin(2);
        assert!((dist_ball(&z, &o).unwrap() - z.norm()).abs() < 1e-15);
        assert_eq!(dist_ball(&z, &z).unwrap(), 0.0);
    }

    #[test]
    fn accurate_form_matches_naive_form_away_from_cancellation() {
        let z = CVector::new(vec![c(0.3, -0.2), c(0.1, 0.5)]).unwrap();
        let w = CVector::new(vec![c(-0.4, 0.1), c(0.2, -0.3)]).unwrap();
        assert!((dist_ball_coords(&z, &w) - naive_ball(&z, &w)).abs() < 1e-14);
    }

    #[test]
    fn siegel_agrees_with_ball() {
        let p = SiegelPoint::new(c(2.0, 0.5), vec![c(0.7, 0.3)]).unwrap();
        let q = SiegelPoint::new(c(0.4, -1.0), vec![c(-0.2, 0.1)]).unwrap();
        let ds = dist_siegel(&p, &q).unwrap();
        let db = dist_ball(&siegel_to_ball(&p), &siegel_to_ball(&q)).unwrap();
        assert!((ds - db).abs() < 1e-14);
    }

    #[test]
    fn projection_examples() {
        let p = SiegelPoint::new(c(2.0, 3.0), vec![c(1.0, 0.0)]).unwrap();
        let pr = boundary_projection(&p);
        assert_eq!(pr.coords(), &[c(1.0, 3.0), c(1.0, 0.0)]);
        let o = boundary_projection(&SiegelPoint::axis(1.0, 2).unwrap());
        assert_eq!(o.norm(), 0.0);
    }

    #[test]
    fn extremes() {
        let o = BallPoint::origin(2);
        assert_eq!(hyperbolic_ball_extremes(&o, 0.4).unwrap(), (0.0, 0.4));
        let z = BallPoint::new(CVector::from_reals(&[0.5, 0.0]).unwrap()).unwrap();
        assert_eq!(hyperbolic_ball_extremes(&z, 0.0).unwrap(), (0.5, 0.5));
        assert!(hyperbolic_ball_extremes(&z, 1.0).is_err());
    }
}
