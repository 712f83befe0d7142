use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vector::CVector;
use crate::error::{Error, Result};
use crate::policy::policy;

/// A point of the open unit ball `B^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    v: CVector,
}

impl BallPoint {
    pub fn new(v: CVector) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        if v.norm_sqr() >= 1.0 {
            return Err(Error::OutsideDomain(format!(
                "ball point has norm {} >= 1",
                v.norm()
            )));
        }
        Ok(Self { v })
    }

    pub fn origin(dim: usize) -> Self {
        Self { v: CVector::zeros(dim) }
    }

    pub fn v(&self) -> &CVector {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

/// A point `(z, w)` of the Siegel domain `H^N = {Re z > ||w||²}`.
///
/// `w` is the tangential block and has `N - 1` coordinates (none when `N = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    z: Complex64,
    w: CVector,
}

impl SiegelPoint {
    pub fn new(z: Complex64, w: Vec<Complex64>) -> Result<Self> {
        let p = Self { z, w: CVector::raw(w) };
        if !p.z.re.is_finite() || !p.z.im.is_finite() || !p.w.is_finite() {
            return Err(Error::NonFinite);
        }
        let t = p.defect();
        if !(t > 0.0) {
            return Err(Error::OutsideDomain(format!("Siegel defect {t:e} is not positive")));
        }
        Ok(p)
    }

    /// Builds from the full coordinate vector `(z, w_1, ..., w_{N-1})`.
    pub fn from_cvector(v: &CVector) -> Result<Self> {
        let (z, w) = v.split_first();
        Self::new(z, w.into_coords())
    }

    /// Real point `(x, 0, ..., 0)` on the axis.
    pub fn axis(x: f64, dim: usize) -> Result<Self> {
        Self::new(Complex64::new(x, 0.0), vec![Complex64::new(0.0, 0.0); dim - 1])
    }

    /// Unchecked construction from raw coordinates.
    pub(crate) fn raw(z: Complex64, w: CVector) -> Self {
        Self { z, w }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self) -> &CVector {
        &self.w
    }

    pub fn dim(&self) -> usize {
        1 + self.w.dim()
    }

    /// `t = Re z − ||w||²`.
    pub fn defect(&self) -> f64 {
        self.z.re - self.w.norm_sqr()
    }

    pub fn to_cvector(&self) -> CVector {
        CVector::from_parts(self.z, &self.w)
    }
}

impl Serialize for SiegelPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_cvector().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SiegelPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = CVector::deserialize(d)?;
        SiegelPoint::from_cvector(&v).map_err(serde::de::Error::custom)
    }
}

impl Serialize for BallPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = CVector::deserialize(d)?;
        BallPoint::new(v).map_err(serde::de::Error::custom)
    }
}

/// A point of `∂B^N`, of the boundary `{Re z = ||w||²}` of `H^N`, or the
/// point at infinity of `H^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum BoundaryPoint {
    Ball { v: CVector },
    Siegel { v: CVector },
    Infinity { dim: usize },
}

impl BoundaryPoint {
    /// Unit-sphere point; `|norm − 1|` must be within the validity tolerance.
    pub fn ball(v: CVector) -> Result<Self> {
        if (v.norm() - 1.0).abs() > policy().validity_tol {
            return Err(Error::OutsideDomain(format!(
                "ball boundary point has norm {}",
                v.norm()
            )));
        }
        Ok(Self::Ball { v })
    }

    /// Finite Siegel boundary point; `|Re z − ||w||²|` within tolerance.
    pub fn siegel(v: CVector) -> Result<Self> {
        let (z, w) = v.split_first();
        let t = z.re - w.norm_sqr();
        if t.abs() > policy().validity_tol {
            return Err(Error::OutsideDomain(format!(
                "Siegel boundary point has defect {t:e}"
            )));
        }
        Ok(Self::Siegel { v })
    }

    pub fn infinity(dim: usize) -> Self {
        Self::Infinity { dim }
    }

    /// Siegel origin `(0, 0, ..., 0)`.
    pub fn siegel_origin(dim: usize) -> Self {
        Self::Siegel { v: CVector::zeros(dim) }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { v } | Self::Siegel { v } => v.dim(),
            Self::Infinity { dim } => *dim,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity { .. })
    }

    /// Euclidean coordinates, `None` at infinity.
    pub fn coords(&self) -> Option<&CVector> {
        match self {
            Self::Ball { v } | Self::Siegel { v } => Some(v),
            Self::Infinity { .. } => None,
        }
    }
}

/// A point tagged with its model, for operations that accept either.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelPoint {
    Ball(BallPoint),
    Siegel(SiegelPoint),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn defect_examples() {
        let p = SiegelPoint::new(c(2.0, 0.0), vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(p.defect(), 1.0);
        let q = SiegelPoint::new(c(1.0, 0.0), vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(q.defect(), 1.0);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(SiegelPoint::new(c(1.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(SiegelPoint::new(c(-1.0, 3.0), vec![]).is_err());
        assert!(BallPoint::new(CVector::from_reals(&[0.6, 0.8]).unwrap()).is_err());
        assert!(BoundaryPoint::ball(CVector::from_reals(&[0.6, 0.8]).unwrap()).is_ok());
        assert!(BoundaryPoint::siegel(CVector::from_reals(&[1.0, 1.0]).unwrap()).is_ok());
        assert!(BoundaryPoint::siegel(CVector::from_reals(&[1.5, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn boundary_json() {
        let b = BoundaryPoint::infinity(2);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"model":"infinity","dim":2}"#);
        let o = BoundaryPoint::siegel_origin(2);
        let back: BoundaryPoint = serde_json::from_str(&serde_json::to_string(&o).unwrap()).unwrap();
        assert_eq!(back, o);
    }
}
