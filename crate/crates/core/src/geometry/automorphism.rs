//! Automorphisms of `H^N` as chains of primitives.
//!
//! A chain is stored in application order: `chain[0]` acts first. Siegel
//! translations are not complex-linear, so chains are kept symbolic instead
//! of being multiplied out into matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{BoundaryPoint, SiegelPoint};
use super::vector::CVector;
use crate::error::{Error, Result};
use crate::serial;

const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    /// `h(z, w) = (z − iy + ||w0||² − 2⟨w, w0⟩, w − w0)`; sends
    /// `(iy + ||w0||², w0)` to the origin and preserves the defect.
    Translation {
        y: f64,
        #[serde(with = "serial::complex_vec")]
        w0: Vec<Complex64>,
    },
    /// `δ(z, w) = (z/t, w/√t)`.
    Dilation { t: f64 },
    /// `(z, Ωw)` with `Ω` diagonal and unimodular.
    Rotation {
        #[serde(with = "serial::complex_vec")]
        omega: Vec<Complex64>,
    },
    /// `(αz, Λw)` with `|Λ_jj|² = α`.
    LinearDiag {
        alpha: f64,
        #[serde(with = "serial::complex_vec")]
        lambda: Vec<Complex64>,
    },
    /// `ι(z, w) = (1/z, w/z)`, an involution exchanging `0` and `∞`.
    Inversion,
}

impl Primitive {
    fn validate(&self) -> Result<()> {
        let finite = |v: &[Complex64]| v.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        match self {
            Primitive::Translation { y, w0 } => {
                if !y.is_finite() || !finite(w0) {
                    return Err(Error::NonFinite);
                }
            }
            Primitive::Dilation { t } => {
                if !(t.is_finite() && *t > 0.0) {
                    return Err(Error::InvalidParameter(format!("dilation factor {t}")));
                }
            }
            Primitive::Rotation { omega } => {
                if omega.iter().any(|o| (o.norm() - 1.0).abs() > UNIT_TOL) {
                    return Err(Error::InvalidParameter("rotation entries must be unimodular".into()));
                }
            }
            Primitive::LinearDiag { alpha, lambda } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::InvalidParameter(format!("linear factor {alpha}")));
                }
                let s = alpha.sqrt();
                if lambda.iter().any(|l| (l.norm() - s).abs() > UNIT_TOL * s.max(1.0)) {
                    return Err(Error::InvalidParameter(
                        "tangential entries must have modulus sqrt(alpha)".into(),
                    ));
                }
            }
            Primitive::Inversion => {}
        }
        Ok(())
    }

    /// Tangential dimension this primitive requires, if any.
    fn tangential_dim(&self) -> Option<usize> {
        match self {
            Primitive::Translation { w0, .. } => Some(w0.len()),
            Primitive::Rotation { omega } => Some(omega.len()),
            Primitive::LinearDiag { lambda, .. } => Some(lambda.len()),
            Primitive::Dilation { .. } | Primitive::Inversion => None,
        }
    }

    fn inverse(&self) -> Primitive {
        match self {
            Primitive::Translation { y, w0 } => Primitive::Translation {
                y: -y,
                w0: w0.iter().map(|c| -c).collect(),
            },
            Primitive::Dilation { t } => Primitive::Dilation { t: 1.0 / t },
            Primitive::Rotation { omega } => Primitive::Rotation {
                omega: omega.iter().map(|o| o.conj()).collect(),
            },
            Primitive::LinearDiag { alpha, lambda } => Primitive::LinearDiag {
                alpha: 1.0 / alpha,
                lambda: lambda.iter().map(|l| 1.0 / l).collect(),
            },
            Primitive::Inversion => Primitive::Inversion,
        }
    }

    fn is_identity(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Primitive::Translation { y, w0 } => *y == 0.0 && w0.iter().all(|c| c.norm() == 0.0),
            Primitive::Dilation { t } => *t == 1.0,
            Primitive::Rotation { omega } => omega.iter().all(|o| *o == one),
            Primitive::LinearDiag { alpha, lambda } => *alpha == 1.0 && lambda.iter().all(|l| *l == one),
            Primitive::Inversion => false,
        }
    }

    /// `self` followed by `next`, as a single primitive when possible.
    fn merge(&self, next: &Primitive) -> Option<Primitive> {
        use Primitive::*;
        match (self, next) {
            (Dilation { t: a }, Dilation { t: b }) => Some(Dilation { t: a * b }),
            (Rotation { omega: a }, Rotation { omega: b }) if a.len() == b.len() => Some(Rotation {
                omega: a.iter().zip(b).map(|(x, y)| x * y).collect(),
            }),
            (Translation { y: ya, w0: wa }, Translation { y: yb, w0: wb }) if wa.len() == wb.len() => {
                let cross: Complex64 = wa.iter().zip(wb).map(|(x, y)| x * y.conj()).sum();
                Some(Translation {
                    y: ya + yb - 2.0 * cross.im,
                    w0: wa.iter().zip(wb).map(|(x, y)| x + y).collect(),
                })
            }
            (Inversion, Inversion) => Some(Dilation { t: 1.0 }),
            _ => None,
        }
    }

    fn apply(&self, z: Complex64, w: &mut [Complex64]) -> Complex64 {
        match self {
            Primitive::Translation { y, w0 } => {
                let mut nz = z - Complex64::new(0.0, *y);
                for (wj, w0j) in w.iter_mut().zip(w0) {
                    nz += w0j.norm_sqr() - 2.0 * *wj * w0j.conj();
                    *wj -= w0j;
                }
                nz
            }
            Primitive::Dilation { t } => {
                let s = t.sqrt();
                w.iter_mut().for_each(|wj| *wj /= s);
                z / t
            }
            Primitive::Rotation { omega } => {
                w.iter_mut().zip(omega).for_each(|(wj, o)| *wj *= o);
                z
            }
            Primitive::LinearDiag { alpha, lambda } => {
                w.iter_mut().zip(lambda).for_each(|(wj, l)| *wj *= l);
                z * alpha
            }
            Primitive::Inversion => {
                w.iter_mut().for_each(|wj| *wj /= z);
                1.0 / z
            }
        }
    }

    /// Action on a finite boundary point; `None` when the image is infinity.
    fn apply_boundary(&self, v: &CVector) -> Option<CVector> {
        let (z, w) = v.split_first();
        if matches!(self, Primitive::Inversion) && z.norm() == 0.0 {
            return None;
        }
        let mut wc = w.into_coords();
        let nz = self.apply(z, &mut wc);
        Some(CVector::from_parts(nz, &CVector::raw(wc)))
    }
}

/// Element of the automorphism group of `H^N` generated by the primitives.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SiegelAutomorphism {
    chain: Vec<Primitive>,
}

impl SiegelAutomorphism {
    pub fn identity() -> Self {
        Self { chain: Vec::new() }
    }

    /// Validated single-primitive automorphism.
    pub fn build(p: Primitive) -> Result<Self> {
        p.validate()?;
        Ok(Self { chain: vec![p] })
    }

    /// Validated chain in application order.
    pub fn from_chain(chain: Vec<Primitive>) -> Result<Self> {
        let a = Self { chain };
        a.validate()?;
        Ok(a.simplified())
    }

    /// Checks every primitive and the consistency of tangential dimensions.
    pub fn validate(&self) -> Result<()> {
        let mut dim = None;
        for p in &self.chain {
            p.validate()?;
            if let Some(d) = p.tangential_dim() {
                match dim {
                    None => dim = Some(d),
                    Some(e) if e != d => {
                        return Err(Error::DimensionMismatch { expected: e + 1, found: d + 1 })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn translation(y: f64, w0: &CVector) -> Result<Self> {
        Self::build(Primitive::Translation {
            y,
            w0: w0.coords().to_vec(),
        })
    }

    /// The translation sending the point `P` to `(t, 0)`, `t = defect(P)`.
    pub fn translation_to_axis(p: &SiegelPoint) -> Self {
        Self {
            chain: vec![Primitive::Translation {
                y: p.z().im,
                w0: p.w().coords().to_vec(),
            }],
        }
    }

    pub fn dilation(t: f64) -> Result<Self> {
        Self::build(Primitive::Dilation { t })
    }

    pub fn rotation(omega: Vec<Complex64>) -> Result<Self> {
        Self::build(Primitive::Rotation { omega })
    }

    pub fn linear_diag(alpha: f64, lambda: Vec<Complex64>) -> Result<Self> {
        Self::build(Primitive::LinearDiag { alpha, lambda })
    }

    /// `η(z, w) = (αz, √α Ω w)`.
    pub fn eta(alpha: f64, omega: &[Complex64]) -> Result<Self> {
        let s = alpha.sqrt();
        Self::linear_diag(alpha, omega.iter().map(|o| o * s).collect())
    }

    pub fn inversion() -> Self {
        Self {
            chain: vec![Primitive::Inversion],
        }
    }

    /// An automorphism sending the Siegel boundary point `q` (or infinity) to
    /// the Siegel origin: a translation, or the inversion for infinity. Ball
    /// points must first be moved to the Siegel model through a chart.
    pub fn recentering(q: &BoundaryPoint) -> Result<Self> {
        match q {
            BoundaryPoint::Infinity { .. } => Ok(Self::inversion()),
            BoundaryPoint::Siegel { v } => {
                let (z, w) = v.split_first();
                Self::translation(z.im, &w)
            }
            BoundaryPoint::Ball { .. } => Err(Error::ModelMismatch(
                "recentering needs a Siegel boundary point".into(),
            )),
        }
    }

    pub fn chain(&self) -> &[Primitive] {
        &self.chain
    }

    pub fn is_identity(&self) -> bool {
        self.chain.is_empty()
    }

    /// Raw coordinate action, without domain checks.
    pub fn apply_coords(&self, z: Complex64, w: &[Complex64]) -> (Complex64, Vec<Complex64>) {
        let mut wc = w.to_vec();
        let mut zc = z;
        for p in &self.chain {
            zc = p.apply(zc, &mut wc);
        }
        (zc, wc)
    }

    pub fn apply(&self, p: &SiegelPoint) -> Result<SiegelPoint> {
        self.check_point_dim(p.dim())?;
        let (z, w) = self.apply_coords(p.z(), p.w().coords());
        Ok(SiegelPoint::raw(z, CVector::raw(w)))
    }

    /// Action on `∂H^N ∪ {∞}`. Ball boundary points are rejected.
    pub fn apply_boundary(&self, q: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.check_point_dim(q.dim())?;
        let mut cur = q.clone();
        for p in &self.chain {
            cur = match cur {
                BoundaryPoint::Infinity { dim } => match p {
                    Primitive::Inversion => BoundaryPoint::siegel_origin(dim),
                    _ => BoundaryPoint::Infinity { dim },
                },
                BoundaryPoint::Siegel { v } => match p.apply_boundary(&v) {
                    Some(nv) => BoundaryPoint::Siegel { v: nv },
                    None => BoundaryPoint::Infinity { dim: v.dim() },
                },
                BoundaryPoint::Ball { .. } => {
                    return Err(Error::ModelMismatch("automorphisms act on the Siegel model".into()))
                }
            };
        }
        Ok(cur)
    }

    fn check_point_dim(&self, dim: usize) -> Result<()> {
        for p in &self.chain {
            if let Some(d) = p.tangential_dim() {
                if d + 1 != dim {
                    return Err(Error::DimensionMismatch {
                        expected: d + 1,
                        found: dim,
                    });
                }
            }
        }
        Ok(())
    }

    /// `a ∘ b`: apply `b` first, then `a`.
    pub fn compose(a: &Self, b: &Self) -> Self {
        let mut chain = b.chain.clone();
        chain.extend(a.chain.iter().cloned());
        Self { chain }.simplified()
    }

    pub fn then(&self, next: &Self) -> Self {
        Self::compose(next, self)
    }

    pub fn inverse(&self) -> Self {
        Self {
            chain: self.chain.iter().rev().map(Primitive::inverse).collect(),
        }
    }

    /// Merges adjacent compatible primitives and drops exact identities.
    fn simplified(self) -> Self {
        let mut out: Vec<Primitive> = Vec::with_capacity(self.chain.len());
        for p in self.chain {
            if p.is_identity() {
                continue;
            }
            match out.last().and_then(|last| last.merge(&p)) {
                Some(m) => {
                    out.pop();
                    if !m.is_identity() {
                        out.push(m);
                    }
                }
                None => out.push(p),
            }
        }
        Self { chain: out }
    }
}

pub fn build_automorphism(p: Primitive) -> Result<SiegelAutomorphism> {
    SiegelAutomorphism::build(p)
}

pub fn apply_automorphism(a: &SiegelAutomorphism, p: &SiegelPoint) -> Result<SiegelPoint> {
    a.apply(p)
}

pub fn compose_automorphisms(a: &SiegelAutomorphism, b: &SiegelAutomorphism) -> SiegelAutomorphism {
    SiegelAutomorphism::compose(a, b)
}

pub fn invert_automorphism(a: &SiegelAutomorphism) -> SiegelAutomorphism {
    a.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::dist_siegel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(p: &SiegelPoint, q: &SiegelPoint, tol: f64) -> bool {
        p.to_cvector().max_abs_diff(&q.to_cvector()) < tol
    }

    fn sample() -> SiegelPoint {
        SiegelPoint::new(c(1.3, -0.4), vec![c(0.5, 0.2)]).unwrap()
    }

    #[test]
    fn translation_sends_point_to_axis() {
        let p = sample();
        let h = SiegelAutomorphism::translation_to_axis(&p);
        let q = h.apply(&p).unwrap();
        assert!((q.z() - c(p.defect(), 0.0)).norm() < 1e-15);
        assert!(q.w().norm() < 1e-15);
        assert!((q.defect() - p.defect()).abs() < 1e-15);
    }

    #[test]
    fn dilation_scales_defect() {
        let p = sample();
        let d = SiegelAutomorphism::dilation(4.0).unwrap();
        assert!((d.apply(&p).unwrap().defect() - p.defect() / 4.0).abs() < 1e-15);
        assert!(SiegelAutomorphism::dilation(1.0).unwrap().chain().len() == 1);
        assert!(close(&SiegelAutomorphism::dilation(1.0).unwrap().apply(&p).unwrap(), &p, 1e-15));
        assert!(SiegelAutomorphism::dilation(-1.0).is_err());
    }

    #[test]
    fn inverse_and_group_law() {
        let a = SiegelAutomorphism::from_chain(vec![
            Primitive::Translation { y: 0.3, w0: vec![c(0.2, -0.1)] },
            Primitive::Dilation { t: 0.7 },
            Primitive::Rotation { omega: vec![c(0.6, 0.8)] },
            Primitive::Inversion,
        ])
        .unwrap();
        let b = SiegelAutomorphism::from_chain(vec![
            Primitive::LinearDiag { alpha: 2.0, lambda: vec![c(0.0, 2f64.sqrt())] },
            Primitive::Translation { y: -1.0, w0: vec![c(0.4, 0.4)] },
        ])
        .unwrap();
        let p = sample();
        let ab = SiegelAutomorphism::compose(&a, &b);
        let lhs = ab.apply(&p).unwrap();
        let rhs = a.apply(&b.apply(&p).unwrap()).unwrap();
        assert!(close(&lhs, &rhs, 1e-13));
        let back = ab.inverse().apply(&lhs).unwrap();
        assert!(close(&back, &p, 1e-12));
        let inv1 = ab.inverse().apply(&lhs).unwrap();
        let inv2 = SiegelAutomorphism::compose(&b.inverse(), &a.inverse()).apply(&lhs).unwrap();
        assert!(close(&inv1, &inv2, 1e-13));
        let q = SiegelPoint::new(c(0.2, 0.9), vec![c(-0.1, 0.3)]).unwrap();
        let d0 = dist_siegel(&p, &q).unwrap();
        let d1 = dist_siegel(&ab.apply(&p).unwrap(), &ab.apply(&q).unwrap()).unwrap();
        assert!((d0 - d1).abs() < 1e-13);
    }

    #[test]
    fn merging_translations_matches_sequential_application() {
        let h1 = SiegelAutomorphism::translation(0.5, &CVector::new(vec![c(0.3, 0.1)]).unwrap()).unwrap();
        let h2 = SiegelAutomorphism::translation(-0.2, &CVector::new(vec![c(-0.1, 0.7)]).unwrap()).unwrap();
        let merged = h1.then(&h2);
        assert_eq!(merged.chain().len(), 1);
        let p = sample();
        let seq = h2.apply(&h1.apply(&p).unwrap()).unwrap();
        assert!(close(&merged.apply(&p).unwrap(), &seq, 1e-14));
        let id = h1.then(&h1.inverse());
        assert!(id.is_identity());
    }

    #[test]
    fn recentering_sends_boundary_point_to_origin() {
        let r = 0.7;
        let q = BoundaryPoint::siegel(CVector::new(vec![c(r * r, 0.0), c(0.0, r)]).unwrap()).unwrap();
        let h = SiegelAutomorphism::recentering(&q).unwrap();
        let img = h.apply_boundary(&q).unwrap();
        assert!(img.coords().unwrap().norm() < 1e-15);
        let inf = SiegelAutomorphism::recentering(&BoundaryPoint::infinity(2)).unwrap();
        assert_eq!(inf.apply_boundary(&BoundaryPoint::infinity(2)).unwrap(), BoundaryPoint::siegel_origin(2));
    }

    #[test]
    fn json_shape() {
        let a = SiegelAutomorphism::from_chain(vec![
            Primitive::Dilation { t: 2.0 },
            Primitive::Translation { y: 1.0, w0: vec![c(0.0, 1.0)] },
        ])
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"chain":[{"kind":"dilation","t":2.0},{"kind":"translation","y":1.0,"w0":[{"re":0.0,"im":1.0}]}]}"#
        );
        let back: SiegelAutomorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
