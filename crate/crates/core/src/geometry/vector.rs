use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of `C^N`, stored as its `N` complex coordinates.
///
/// Serialized as `{"re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<Complex64>);

impl CVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("a vector needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    /// Unchecked constructor for internal arithmetic. May hold zero coordinates
    /// (the tangential block of a one-dimensional Siegel point).
    pub(crate) fn raw(coords: Vec<Complex64>) -> Self {
        Self(coords)
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// `e_1 = (1, 0, ..., 0)`.
    pub fn e1(dim: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[0] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Hermitian product `(Z, W) = Σ Z_j conj(W_j)`.
    pub fn inner(&self, other: &CVector) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> CVector {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn scale_re(&self, s: f64) -> CVector {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    /// Largest coordinate-wise modulus of the difference.
    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, other: &CVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `(head, tail)` split into first coordinate and the rest.
    pub fn split_first(&self) -> (Complex64, CVector) {
        (self.0[0], Self(self.0[1..].to_vec()))
    }

    pub fn from_parts(z: Complex64, w: &CVector) -> CVector {
        let mut v = Vec::with_capacity(1 + w.dim());
        v.push(z);
        v.extend_from_slice(&w.0);
        Self(v)
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CVector {
    type Output = CVector;
    fn neg(self) -> CVector {
        CVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<f64> for &CVector {
    type Output = CVector;
    fn mul(self, rhs: f64) -> CVector {
        self.scale_re(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct ReImArrays {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for CVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReImArrays {
            re: self.0.iter().map(|c| c.re).collect(),
            im: self.0.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let arrays = ReImArrays::deserialize(d)?;
        if arrays.re.len() != arrays.im.len() {
            return Err(serde::de::Error::custom("re and im arrays differ in length"));
        }
        let coords = arrays
            .re
            .into_iter()
            .zip(arrays.im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        CVector::new(coords).map_err(serde::de::Error::custom)
    }
}
