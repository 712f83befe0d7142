//! Closed forms for the quadratic family `f(z, w) = (Az + Bw², Cw)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::classify::{ClassificationReport, FixedPointSet, MapType};
use super::descriptor::Quadratic;
use crate::error::{Error, Result};
use crate::geometry::CVector;
use crate::policy::policy;

/// A preimage that may fall outside `H^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preimage {
    pub point: CVector,
    pub in_domain: bool,
}

/// `f⁻¹(z, w) = (z/A − B w²/(A C²), w/C)`.
pub fn quadratic_inverse(q: &Quadratic, p: &CVector) -> Result<Preimage> {
    if q.a == 0.0 || q.c.norm() == 0.0 {
        return Err(Error::Degenerate("quadratic inverse needs A ≠ 0 and C ≠ 0".into()));
    }
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: p.dim() });
    }
    let (z, w) = (p[0], p[1]);
    let nz = z / q.a - q.b * w * w / (q.a * q.c * q.c);
    let nw = w / q.c;
    let in_domain = nz.re - nw.norm_sqr() > 0.0;
    Ok(Preimage {
        point: CVector::raw(vec![nz, nw]),
        in_domain,
    })
}

/// `Σ_{k<n} A^{n−1−k} C^{2k}`, equal to `(A^n − C^{2n})/(A − C²)` off the
/// resolvent singularity and to `n A^{n−1}` on it.
fn resolvent_sum(a: f64, c2: Complex64, n: u32) -> Complex64 {
    let gap = Complex64::new(a, 0.0) - c2;
    let scale = a.abs().max(c2.norm());
    if gap.norm() > 0.5 * scale {
        (Complex64::new(a.powi(n as i32), 0.0) - c2.powu(n)) / gap
    } else {
        // Horner form of the geometric sum.
        let mut acc = Complex64::new(0.0, 0.0);
        let mut cp = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            acc = acc * a + cp;
            cp *= c2;
        }
        acc
    }
}

/// `f^n(z, w) = (A^n z + B (A^n − C^{2n})/(A − C²) w², C^n w)`.
pub fn quadratic_iterate_closed(q: &Quadratic, n: u32, p: &CVector) -> CVector {
    let (z, w) = (p[0], p[1]);
    let c2 = q.c * q.c;
    let s = resolvent_sum(q.a, c2, n);
    CVector::raw(vec![q.a.powi(n as i32) * z + q.b * s * w * w, q.c.powu(n) * w])
}

/// Full case analysis of the quadratic family.
pub fn classify_quadratic(a: f64, b: Complex64, c: Complex64) -> ClassificationReport {
    let q = Quadratic::new(a, b, c);
    if !q.is_self_map() {
        return ClassificationReport::not_self_map();
    }
    let tol = policy().self_map_tol;
    let one = Complex64::new(1.0, 0.0);
    let c_is_one = (c - one).norm() <= tol;
    if a == 0.0 {
        return ClassificationReport::of_type(MapType::ZeroMap, FixedPointSet::Unknown);
    }
    if c.norm() == 0.0 {
        return ClassificationReport::of_type(MapType::DegenerateProjection, FixedPointSet::Unknown);
    }
    if c_is_one && (a - 1.0).abs() <= tol {
        return ClassificationReport::of_type(MapType::Identity, FixedPointSet::Whole);
    }
    if (a - 1.0).abs() <= tol {
        return ClassificationReport::of_type(MapType::Elliptic, FixedPointSet::InteriorLine);
    }
    let set = if c_is_one && b.norm() > 0.0 && (a - b.norm() - 1.0).abs() <= tol * a.max(1.0) {
        // −B ω² = |B| with |ω| = 1 puts (r², rω) on the fixed curve.
        let direction = Complex64::from_polar(1.0, 0.5 * (std::f64::consts::PI - b.arg()));
        FixedPointSet::BoundaryCurve {
            offset: Complex64::new(0.0, 0.0),
            direction,
        }
    } else {
        FixedPointSet::OriginAndInfinity
    };
    ClassificationReport::hyperbolic_origin_infinity(2, a, set)
}
