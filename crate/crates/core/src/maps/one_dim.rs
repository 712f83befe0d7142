use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serial;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// One-dimensional holomorphic self-maps, either of the right half-plane
/// `{Re u > 0}` or of the unit disk.
///
/// The disk and the half-plane are identified by `u = (1 − z)/(1 + z)`, which
/// sends `z = 1` to `u = 0` and `z = 0` to `u = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OneDimMap {
    /// `u ↦ c u` on the half-plane, `c > 0`.
    HalfPlaneLinear { c: f64 },
    /// `u ↦ c u + i b` on the half-plane, `c > 0`, `b` real.
    HalfPlaneAffine { c: f64, b: f64 },
    /// `z ↦ z (z + a)/(1 + a z)` on the disk, `0 < a < 1`.
    BlaschkeDeg2 { a: f64 },
    /// `z ↦ λ z` on the disk, `|λ| ≤ 1`.
    DiskScale {
        #[serde(with = "serial::complex")]
        lambda: Complex64,
    },
}

impl OneDimMap {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OneDimMap::HalfPlaneLinear { c } => positive("c", c),
            OneDimMap::HalfPlaneAffine { c, b } => {
                positive("c", c)?;
                if !b.is_finite() {
                    return Err(Error::NonFinite);
                }
                Ok(())
            }
            OneDimMap::BlaschkeDeg2 { a } => {
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::InvalidParameter(format!("Blaschke parameter {a} not in (0, 1)")));
                }
                Ok(())
            }
            OneDimMap::DiskScale { lambda } => {
                if !(lambda.norm() <= 1.0 + 1e-12) {
                    return Err(Error::InvalidParameter(format!("disk scale |λ| = {} > 1", lambda.norm())));
                }
                Ok(())
            }
        }
    }

    /// Whether the map fixes the disk centre (equivalently `u = 1`).
    pub fn fixes_disk_centre(&self) -> bool {
        match *self {
            OneDimMap::BlaschkeDeg2 { .. } | OneDimMap::DiskScale { .. } => true,
            OneDimMap::HalfPlaneLinear { c } => c == 1.0,
            OneDimMap::HalfPlaneAffine { c, b } => c == 1.0 && b == 0.0,
        }
    }

    /// Action in the half-plane coordinate.
    pub fn eval_half_plane(&self, u: Complex64) -> Complex64 {
        match *self {
            OneDimMap::HalfPlaneLinear { c } => u * c,
            OneDimMap::HalfPlaneAffine { c, b } => u * c + Complex64::new(0.0, b),
            OneDimMap::BlaschkeDeg2 { a } => 2.0 * u / ((1.0 + a) + (1.0 - a) * u * u),
            OneDimMap::DiskScale { .. } => disk_to_half(self.eval_disk(half_to_disk(u))),
        }
    }

    /// Action in the disk coordinate.
    pub fn eval_disk(&self, z: Complex64) -> Complex64 {
        match *self {
            OneDimMap::BlaschkeDeg2 { a } => z * (z + a) / (ONE + a * z),
            OneDimMap::DiskScale { lambda } => lambda * z,
            _ => half_to_disk(self.eval_half_plane(disk_to_half(z))),
        }
    }

    /// All preimages of `v` in the half-plane coordinate (not filtered by domain).
    pub fn preimages_half_plane(&self, v: Complex64) -> Vec<Complex64> {
        match *self {
            OneDimMap::HalfPlaneLinear { c } => vec![v / c],
            OneDimMap::HalfPlaneAffine { c, b } => vec![(v - Complex64::new(0.0, b)) / c],
            OneDimMap::BlaschkeDeg2 { a } => {
                if v.norm() == 0.0 {
                    return vec![v];
                }
                // (1 − a) v u² − 2u + (1 + a) v = 0; the small root is written
                // without cancellation.
                let s = (ONE - (1.0 - a * a) * v * v).sqrt();
                vec![(1.0 + a) * v / (ONE + s), (ONE + s) / ((1.0 - a) * v)]
            }
            OneDimMap::DiskScale { .. } => self
                .preimages_disk(half_to_disk(v))
                .into_iter()
                .map(disk_to_half)
                .collect(),
        }
    }

    /// All preimages of `v` in the disk coordinate.
    pub fn preimages_disk(&self, v: Complex64) -> Vec<Complex64> {
        match *self {
            OneDimMap::DiskScale { lambda } => {
                if lambda.norm() == 0.0 {
                    Vec::new()
                } else {
                    vec![v / lambda]
                }
            }
            _ => self
                .preimages_half_plane(disk_to_half(v))
                .into_iter()
                .map(half_to_disk)
                .collect(),
        }
    }

    /// Boundary fixed point `i y0` of a half-plane map with repelling
    /// multiplier `c > 1` there, when one exists besides infinity.
    pub fn half_plane_brfp(&self) -> Option<f64> {
        match *self {
            OneDimMap::HalfPlaneLinear { c } if c > 1.0 => Some(0.0),
            OneDimMap::HalfPlaneAffine { c, b } if c > 1.0 => Some(b / (1.0 - c)),
            _ => None,
        }
    }

    /// Multiplier at the disk point `1` for maps fixing it.
    pub fn multiplier_at_one(&self) -> Option<f64> {
        match *self {
            OneDimMap::BlaschkeDeg2 { a } => Some(2.0 / (1.0 + a)),
            OneDimMap::DiskScale { lambda } if lambda == ONE => Some(1.0),
            _ => None,
        }
    }

    /// Derivative at the disk centre for maps fixing it.
    pub fn derivative_at_centre(&self) -> Option<Complex64> {
        match *self {
            OneDimMap::BlaschkeDeg2 { a } => Some(Complex64::new(a, 0.0)),
            OneDimMap::DiskScale { lambda } => Some(lambda),
            _ => None,
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {x} must be positive")))
    }
}

pub(crate) fn disk_to_half(z: Complex64) -> Complex64 {
    (ONE - z) / (ONE + z)
}

pub(crate) fn half_to_disk(u: Complex64) -> Complex64 {
    (ONE - u) / (ONE + u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn blaschke_half_plane_form_matches_disk_form() {
        let b = OneDimMap::BlaschkeDeg2 { a: 0.5 };
        for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.45), c(0.99, 0.0)] {
            let via_half = half_to_disk(b.eval_half_plane(disk_to_half(z)));
            assert!((via_half - b.eval_disk(z)).norm() < 1e-14);
        }
    }

    #[test]
    fn preimages_are_preimages() {
        let maps = [
            OneDimMap::BlaschkeDeg2 { a: 0.5 },
            OneDimMap::HalfPlaneAffine { c: 2.0, b: 1.0 },
            OneDimMap::DiskScale { lambda: c(0.3, 0.4) },
        ];
        for m in &maps {
            let v = c(0.7, -0.2);
            for u in m.preimages_half_plane(v) {
                assert!((m.eval_half_plane(u) - v).norm() < 1e-13, "{m:?}");
            }
        }
    }

    #[test]
    fn blaschke_derivative_at_one() {
        // quotient rule: b'(z) = ((2z + a)(1 + az) − a z (z + a)) / (1 + az)²
        let a = 0.5;
        let deriv = ((2.0 + a) * (1.0 + a) - a * (1.0 + a)) / (1.0 + a) / (1.0 + a);
        let m = OneDimMap::BlaschkeDeg2 { a };
        assert!((m.multiplier_at_one().unwrap() - deriv).abs() < 1e-15);
        assert!((deriv - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn affine_boundary_fixed_point() {
        let m = OneDimMap::HalfPlaneAffine { c: 3.0, b: 2.0 };
        let y0 = m.half_plane_brfp().unwrap();
        assert!((m.eval_half_plane(c(0.0, y0)) - c(0.0, y0)).norm() < 1e-15);
        assert!(OneDimMap::HalfPlaneLinear { c: 0.5 }.half_plane_brfp().is_none());
    }

    #[test]
    fn json_shape() {
        let m = OneDimMap::DiskScale { lambda: c(0.5, 0.0) };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"kind":"disk_scale","lambda":{"re":0.5,"im":0.0}}"#);
    }
}
