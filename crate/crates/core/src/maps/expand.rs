//! First-order structure at a boundary fixed point and recentering.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::classify::{classify, FixedPointSet};
use super::descriptor::MapDescriptor;
use super::one_dim::OneDimMap;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, CVector, SiegelAutomorphism};
use crate::policy::policy;
use crate::serial;

/// Expansion `f(z, w) = (αz + o(|z|), Aw + o(|z|^{1/2}))` at the origin with
/// diagonal `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub alpha: f64,
    /// Diagonal of `A`.
    #[serde(with = "serial::complex_vec")]
    pub a_diag: Vec<Complex64>,
    /// `Ω_jj = a_jj/√α` where `|a_jj|² = α`, else `1`.
    #[serde(with = "serial::complex_vec")]
    pub omega: Vec<Complex64>,
    /// Tangential coordinates with `|a_jj|² = α`.
    pub mask: Vec<bool>,
    /// Number of such coordinates.
    pub l: usize,
}

impl Expansion {
    fn from_parts(alpha: f64, a_diag: Vec<Complex64>) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::NonExpandable(format!(
                "radial dilation {alpha} at the origin is not repelling"
            )));
        }
        let tol = 1e-12 * alpha;
        let mask: Vec<bool> = a_diag.iter().map(|a| (a.norm_sqr() - alpha).abs() <= tol).collect();
        let omega = a_diag
            .iter()
            .zip(&mask)
            .map(|(a, &m)| if m { a / a.norm() } else { Complex64::new(1.0, 0.0) })
            .collect();
        let l = mask.iter().filter(|&&m| m).count();
        Ok(Self {
            alpha,
            a_diag,
            omega,
            mask,
            l,
        })
    }

    /// `η(z, w) = (αz, √α Ω w)`.
    pub fn eta(&self) -> SiegelAutomorphism {
        SiegelAutomorphism::eta(self.alpha, &self.omega).expect("valid by construction")
    }

    /// `p_L`: keeps `z` and the tangential coordinates in the mask.
    pub fn project(&self, z: Complex64, w: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let zero = Complex64::new(0.0, 0.0);
        (
            z,
            w.iter().zip(&self.mask).map(|(x, &m)| if m { *x } else { zero }).collect(),
        )
    }

    /// Expansion of the basic construction: `L = 0`, `Ω = 1`.
    pub fn basic(alpha: f64, dim: usize) -> Result<Self> {
        Self::from_parts(alpha, vec![Complex64::new(0.0, 0.0); dim - 1])
    }
}

/// Reads off `α`, `A`, `Ω` and `L` for maps expandable at the Siegel origin.
pub fn expandable_decompose(f: &MapDescriptor) -> Result<Expansion> {
    match f {
        MapDescriptor::DiagonalLinear { alpha, lambda } => Expansion::from_parts(*alpha, lambda.clone()),
        MapDescriptor::Quadratic(q) => Expansion::from_parts(q.a, vec![q.c]),
        MapDescriptor::Lifted {
            phi: OneDimMap::HalfPlaneLinear { c } | OneDimMap::HalfPlaneAffine { c, b: 0.0 },
        } => Expansion::from_parts(*c, vec![Complex64::new(1.0, 0.0)]),
        MapDescriptor::BallProduct { components } => {
            let alpha = components[0]
                .multiplier_at_one()
                .ok_or_else(|| Error::NonExpandable("first component does not fix the disk point 1".into()))?;
            let a_diag = components[1..]
                .iter()
                .map(|g| g.derivative_at_centre().expect("components fix the centre"))
                .collect();
            Expansion::from_parts(alpha, a_diag)
        }
        _ => Err(Error::NonExpandable(
            "no closed-form expansion at the origin for this descriptor".into(),
        )),
    }
}

/// Boundary point in the Siegel model, using the map's chart for ball points.
pub fn to_siegel_boundary(f: &MapDescriptor, q: &BoundaryPoint) -> Result<BoundaryPoint> {
    f.chart().boundary_to_siegel(q)
}

fn on_curve(set: &FixedPointSet, q: &CVector) -> bool {
    let FixedPointSet::BoundaryCurve { offset, direction } = set else {
        return false;
    };
    let tol = policy().validity_tol.max(1e-12) * (1.0 + q.norm());
    let (z, w) = q.split_first();
    let r = (w[0] * direction.conj()).re;
    (w[0] - direction * r).norm() <= tol && (z - offset - r * r).norm() <= tol
}

/// `h ∘ f ∘ h⁻¹` for an automorphism `h` sending `q` to the Siegel origin.
/// Families with a closed form for the recentred map return it; otherwise the
/// result is `Conjugated`.
pub fn recenter_at(f: &MapDescriptor, q: &BoundaryPoint) -> Result<MapDescriptor> {
    let q = to_siegel_boundary(f, q)?;
    if q.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: q.dim(),
        });
    }
    if let BoundaryPoint::Siegel { v } = &q {
        if v.norm() == 0.0 {
            return Ok(f.clone());
        }
        match f {
            MapDescriptor::Quadratic(_) | MapDescriptor::Lifted { .. } => {
                if on_curve(&classify(f)?.fixed_point_set, v) {
                    return Ok(match f {
                        MapDescriptor::Lifted {
                            phi: OneDimMap::HalfPlaneAffine { c, .. },
                        } => MapDescriptor::Lifted {
                            phi: OneDimMap::HalfPlaneLinear { c: *c },
                        },
                        other => other.clone(),
                    });
                }
            }
            _ => {}
        }
    }
    if let (BoundaryPoint::Infinity { .. }, MapDescriptor::DiagonalLinear { alpha, lambda }) = (&q, f) {
        return Ok(MapDescriptor::DiagonalLinear {
            alpha: 1.0 / alpha,
            lambda: lambda.iter().map(|l| l / alpha).collect(),
        });
    }
    Ok(MapDescriptor::conjugated(f.clone(), SiegelAutomorphism::recentering(&q)?))
}
