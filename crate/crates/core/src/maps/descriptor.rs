use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::one_dim::OneDimMap;
use crate::error::{Error, Result};
use crate::geometry::{Chart, SiegelAutomorphism, SiegelPoint};
use crate::geometry::CVector;
use crate::policy::policy;
use crate::serial;

/// `f(z, w) = (Az + Bw², Cw)` on `H^2`, `A > 0` real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B", with = "serial::complex")]
    pub b: Complex64,
    #[serde(rename = "C", with = "serial::complex")]
    pub c: Complex64,
}

impl Quadratic {
    pub fn new(a: f64, b: Complex64, c: Complex64) -> Self {
        Self { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Self::new(a, Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    /// `A − |B| ≥ |C|²`, with a relative slack from the numeric policy.
    pub fn is_self_map(&self) -> bool {
        let tol = policy().self_map_tol * self.a.abs().max(1.0);
        self.a - self.b.norm() >= self.c.norm_sqr() - tol
    }
}

/// A closed, evaluable description of a self-map of `H^N`.
///
/// `BallProduct` acts coordinate-wise on the ball and is read in the
/// reflected Cayley chart, so the ball point `(1, 0, ..)` sits at the Siegel
/// origin and the ball centre at `(1, 0, ..)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapDescriptor {
    Quadratic(Quadratic),
    /// `f(z, w) = (φ(z − w²) + w², w)` on `H^2`.
    Lifted { phi: OneDimMap },
    /// `(αz, Λw)`.
    DiagonalLinear {
        alpha: f64,
        #[serde(with = "serial::complex_vec")]
        lambda: Vec<Complex64>,
    },
    /// `by ∘ base ∘ by⁻¹`.
    Conjugated {
        base: Box<MapDescriptor>,
        by: SiegelAutomorphism,
    },
    /// `Z ↦ (g_1(Z_1), ..., g_N(Z_N))` on `B^N`; each `g_j` fixes `0`.
    BallProduct { components: Vec<OneDimMap> },
}

impl MapDescriptor {
    pub fn quadratic(a: f64, b: f64, c: f64) -> Self {
        MapDescriptor::Quadratic(Quadratic::real(a, b, c))
    }

    pub fn conjugated(base: MapDescriptor, by: SiegelAutomorphism) -> Self {
        MapDescriptor::Conjugated {
            base: Box::new(base),
            by,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MapDescriptor::Quadratic(_) | MapDescriptor::Lifted { .. } => 2,
            MapDescriptor::DiagonalLinear { lambda, .. } => 1 + lambda.len(),
            MapDescriptor::Conjugated { base, .. } => base.dim(),
            MapDescriptor::BallProduct { components } => components.len(),
        }
    }

    /// Cayley chart through which ball points relate to this map.
    pub fn chart(&self) -> Chart {
        match self {
            MapDescriptor::BallProduct { .. } => Chart::Reflected,
            MapDescriptor::Conjugated { base, .. } => base.chart(),
            _ => Chart::Standard,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapDescriptor::Quadratic(q) => {
                if !q.a.is_finite() || !q.b.re.is_finite() || !q.b.im.is_finite() || !q.c.re.is_finite() || !q.c.im.is_finite() {
                    return Err(Error::NonFinite);
                }
                if !(q.a > 0.0) {
                    return Err(Error::InvalidParameter(format!("A = {} must be positive", q.a)));
                }
                if !q.is_self_map() {
                    return Err(Error::InvalidParameter(format!(
                        "A − |B| = {} < |C|² = {}: not a self-map",
                        q.a - q.b.norm(),
                        q.c.norm_sqr()
                    )));
                }
                Ok(())
            }
            MapDescriptor::Lifted { phi } => {
                phi.validate()?;
                match phi {
                    OneDimMap::HalfPlaneLinear { c } | OneDimMap::HalfPlaneAffine { c, .. } if *c >= 1.0 => Ok(()),
                    _ => Err(Error::NotLiftable(
                        "lifting needs a half-plane map with Denjoy-Wolff point at infinity".into(),
                    )),
                }
            }
            MapDescriptor::DiagonalLinear { alpha, lambda } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
                }
                if lambda.is_empty() {
                    return Err(Error::InvalidParameter("diagonal map needs N ≥ 2".into()));
                }
                let tol = policy().self_map_tol * alpha.max(1.0);
                if let Some(l) = lambda.iter().find(|l| l.norm_sqr() > alpha + tol) {
                    return Err(Error::InvalidParameter(format!(
                        "|Λ_jj|² = {} exceeds alpha = {alpha}",
                        l.norm_sqr()
                    )));
                }
                Ok(())
            }
            MapDescriptor::Conjugated { base, by } => {
                base.validate()?;
                by.validate()?;
                by.apply(&SiegelPoint::axis(1.0, base.dim())?)?;
                Ok(())
            }
            MapDescriptor::BallProduct { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidParameter("ball product needs a component".into()));
                }
                for g in components {
                    g.validate()?;
                    if !g.fixes_disk_centre() {
                        return Err(Error::InvalidParameter(
                            "ball product components must fix the disk centre".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Raw action on coordinates, defined wherever the formula is.
    pub fn eval_coords(&self, z: Complex64, w: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        match self {
            MapDescriptor::Quadratic(q) => (q.a * z + q.b * w[0] * w[0], vec![q.c * w[0]]),
            MapDescriptor::Lifted { phi } => {
                let w2 = w[0] * w[0];
                (phi.eval_half_plane(z - w2) + w2, vec![w[0]])
            }
            MapDescriptor::DiagonalLinear { alpha, lambda } => (
                z * alpha,
                w.iter().zip(lambda).map(|(wj, l)| wj * l).collect(),
            ),
            MapDescriptor::Conjugated { base, by } => {
                let (z1, w1) = by.inverse().apply_coords(z, w);
                let (z2, w2) = base.eval_coords(z1, &w1);
                by.apply_coords(z2, &w2)
            }
            MapDescriptor::BallProduct { components } => {
                let u1 = components[0].eval_half_plane(z);
                let scale = 0.5 * (u1 + 1.0);
                let den = z + 1.0;
                let w1 = w
                    .iter()
                    .zip(&components[1..])
                    .map(|(wj, g)| g.eval_disk(2.0 * wj / den) * scale)
                    .collect();
                (u1, w1)
            }
        }
    }

    pub fn eval_cvector(&self, v: &CVector) -> CVector {
        let (z, w) = v.split_first();
        let (nz, nw) = self.eval_coords(z, w.coords());
        CVector::from_parts(nz, &CVector::raw(nw))
    }

    /// Ball-model action, for maps defined on `B^N`.
    pub fn eval_ball(&self, v: &CVector) -> Result<CVector> {
        match self {
            MapDescriptor::BallProduct { components } => Ok(CVector::raw(
                v.coords().iter().zip(components).map(|(x, g)| g.eval_disk(*x)).collect(),
            )),
            _ => Err(Error::ModelMismatch("only ball products act natively on the ball".into())),
        }
    }
}

/// `f(P)`, checked to lie in `H^N`.
pub fn evaluate(f: &MapDescriptor, p: &SiegelPoint) -> Result<SiegelPoint> {
    if p.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: p.dim(),
        });
    }
    let (z, w) = f.eval_coords(p.z(), p.w().coords());
    SiegelPoint::new(z, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(z: f64, w: f64) -> SiegelPoint {
        SiegelPoint::new(c(z, 0.0), vec![c(w, 0.0)]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let q = MapDescriptor::quadratic(2.0, 1.0, 1.0);
        assert_eq!(evaluate(&q, &pt(1.0, 1.0 - 1e-9)).unwrap().w()[0], c(1.0 - 1e-9, 0.0));
        let img = evaluate(&q, &pt(1.5, 1.0)).unwrap();
        assert_eq!(img.z(), c(4.0, 0.0));
        let lifted = MapDescriptor::Lifted {
            phi: OneDimMap::HalfPlaneLinear { c: 2.0 },
        };
        let img = evaluate(&lifted, &pt(2.0, 1.0)).unwrap();
        assert_eq!((img.z(), img.w()[0]), (c(3.0, 0.0), c(1.0, 0.0)));
        let diag = MapDescriptor::DiagonalLinear {
            alpha: 2.0,
            lambda: vec![c(2f64.sqrt(), 0.0)],
        };
        assert_eq!(evaluate(&diag, &pt(1.0, 0.0)).unwrap().z(), c(2.0, 0.0));
    }

    #[test]
    fn quadratic_at_unit_point() {
        // (1, 1) lies on the boundary, so only the raw formula applies there.
        let q = MapDescriptor::quadratic(2.0, 1.0, 1.0);
        let (z, w) = q.eval_coords(c(1.0, 0.0), &[c(1.0, 0.0)]);
        assert_eq!((z, w[0]), (c(3.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn validation() {
        assert!(MapDescriptor::quadratic(1.0, 0.5, 1.0).validate().is_err());
        assert!(MapDescriptor::quadratic(0.5, 0.25, 0.5).validate().is_ok());
        assert!(MapDescriptor::DiagonalLinear { alpha: 2.0, lambda: vec![c(1.5, 0.0)] }
            .validate()
            .is_err());
        let bad_lift = MapDescriptor::Lifted {
            phi: OneDimMap::HalfPlaneLinear { c: 0.5 },
        };
        assert!(matches!(bad_lift.validate(), Err(Error::NotLiftable(_))));
    }

    #[test]
    fn ball_product_agrees_with_ball_action() {
        let f = MapDescriptor::BallProduct {
            components: vec![
                OneDimMap::BlaschkeDeg2 { a: 0.5 },
                OneDimMap::DiskScale { lambda: c(0.5, 0.0) },
            ],
        };
        let p = SiegelPoint::new(c(0.8, 0.3), vec![c(0.2, -0.4)]).unwrap();
        let ball = Chart::Reflected.to_ball(&p);
        let via_ball = f.eval_ball(ball.v()).unwrap();
        let via_siegel = Chart::Reflected.coords_to_ball(&f.eval_cvector(&p.to_cvector()));
        assert!(via_ball.max_abs_diff(&via_siegel) < 1e-14);
    }

    #[test]
    fn json_shape() {
        let q = MapDescriptor::quadratic(2.0, 1.0, 1.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(
            s,
            r#"{"family":"quadratic","A":2.0,"B":{"re":1.0,"im":0.0},"C":{"re":1.0,"im":0.0}}"#
        );
        let back: MapDescriptor =
            serde_json::from_str(r#"{"family":"quadratic","A":2,"B":{"re":1,"im":0},"C":{"re":1,"im":0}}"#).unwrap();
        assert_eq!(back, q);
    }
}
