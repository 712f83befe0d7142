//! Serde helpers: complex numbers as `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: c.re, im: c.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex64::new(v.re, v.im))
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let items: Vec<ReIm> = v.iter().map(|c| ReIm { re: c.re, im: c.im }).collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let items = Vec::<ReIm>::deserialize(d)?;
        Ok(items.into_iter().map(|c| Complex64::new(c.re, c.im)).collect())
    }
}

/// Fixed 17-significant-digit decimal rendering used for CSV cells and for
/// JSON fields that are emitted as strings.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}
