use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::descriptor::{MapDescriptor, Quadratic};
use super::one_dim::OneDimMap;
use super::quadratic::classify_quadratic;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPoint, CVector, Chart, SiegelAutomorphism, SiegelPoint};
use crate::serial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapType {
    Hyperbolic,
    Elliptic,
    ParabolicExcluded,
    DegenerateProjection,
    ZeroMap,
    Identity,
}

/// The Denjoy-Wolff point: on the boundary (or at infinity), or an interior
/// fixed point in the elliptic case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DenjoyWolff {
    Boundary { point: BoundaryPoint },
    Interior { point: SiegelPoint },
}

/// Closed-form descriptions of fixed-point sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPointSet {
    #[serde(rename = "none")]
    Empty,
    /// Boundary fixed points `0` and `∞` only.
    OriginAndInfinity,
    /// Interior fixed points `{(z, 0)}`.
    InteriorLine,
    /// Boundary curve `{(offset + r², r·direction) : r ∈ ℝ}`.
    BoundaryCurve {
        #[serde(with = "serial::complex")]
        offset: Complex64,
        #[serde(with = "serial::complex")]
        direction: Complex64,
    },
    /// Explicit boundary points.
    Finite { points: Vec<BoundaryPoint> },
    /// Image of a set under an automorphism.
    Mapped {
        set: Box<FixedPointSet>,
        by: SiegelAutomorphism,
    },
    /// Every point is fixed.
    Whole,
    Unknown,
}

impl FixedPointSet {
    /// Representative boundary points for parameters `rs` (curves) or the
    /// listed points (finite sets), in the Siegel model.
    pub fn sample_points(&self, dim: usize, rs: &[f64], chart: Chart) -> Result<Vec<BoundaryPoint>> {
        Ok(match self {
            FixedPointSet::OriginAndInfinity => {
                vec![BoundaryPoint::siegel_origin(dim), BoundaryPoint::infinity(dim)]
            }
            FixedPointSet::BoundaryCurve { offset, direction } => rs
                .iter()
                .map(|&r| {
                    let mut w = vec![Complex64::new(0.0, 0.0); dim - 1];
                    w[0] = direction * r;
                    BoundaryPoint::siegel(CVector::from_parts(offset + r * r, &CVector::new(w)?))
                })
                .collect::<Result<_>>()?,
            FixedPointSet::Finite { points } => points
                .iter()
                .map(|p| chart.boundary_to_siegel(p))
                .collect::<Result<_>>()?,
            FixedPointSet::Mapped { set, by } => set
                .sample_points(dim, rs, chart)?
                .iter()
                .map(|p| by.apply_boundary(p))
                .collect::<Result<_>>()?,
            FixedPointSet::Empty | FixedPointSet::InteriorLine | FixedPointSet::Whole | FixedPointSet::Unknown => {
                Vec::new()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_self_map: bool,
    /// `None` when the map is not a self-map.
    pub map_type: Option<MapType>,
    pub denjoy_wolff: Option<DenjoyWolff>,
    pub multiplier_at_dw: Option<f64>,
    /// A boundary repelling fixed point, when the family has one in closed form.
    pub brfp: Option<BoundaryPoint>,
    pub brfp_multiplier: Option<f64>,
    pub fixed_point_set: FixedPointSet,
}

impl ClassificationReport {
    pub(crate) fn not_self_map() -> Self {
        Self {
            is_self_map: false,
            map_type: None,
            denjoy_wolff: None,
            multiplier_at_dw: None,
            brfp: None,
            brfp_multiplier: None,
            fixed_point_set: FixedPointSet::Unknown,
        }
    }

    pub(crate) fn of_type(t: MapType, set: FixedPointSet) -> Self {
        Self {
            is_self_map: true,
            map_type: Some(t),
            denjoy_wolff: None,
            multiplier_at_dw: None,
            brfp: None,
            brfp_multiplier: None,
            fixed_point_set: set,
        }
    }

    /// Hyperbolic map with fixed points `0` and `∞` and dilation `k ≠ 1` at `0`.
    pub(crate) fn hyperbolic_origin_infinity(dim: usize, k: f64, set: FixedPointSet) -> Self {
        let (dw, brfp) = if k < 1.0 {
            (BoundaryPoint::siegel_origin(dim), BoundaryPoint::infinity(dim))
        } else {
            (BoundaryPoint::infinity(dim), BoundaryPoint::siegel_origin(dim))
        };
        let (c, alpha) = if k < 1.0 { (k, 1.0 / k) } else { (1.0 / k, k) };
        Self {
            is_self_map: true,
            map_type: Some(MapType::Hyperbolic),
            denjoy_wolff: Some(DenjoyWolff::Boundary { point: dw }),
            multiplier_at_dw: Some(c),
            brfp: Some(brfp),
            brfp_multiplier: Some(alpha),
            fixed_point_set: set,
        }
    }
}

/// Classification for every descriptor family.
pub fn classify(f: &MapDescriptor) -> Result<ClassificationReport> {
    match f {
        MapDescriptor::Quadratic(Quadratic { a, b, c }) => Ok(classify_quadratic(*a, *b, *c)),
        MapDescriptor::Lifted { phi } => {
            f.validate()?;
            let (c, shift) = match *phi {
                OneDimMap::HalfPlaneLinear { c } => (c, 0.0),
                OneDimMap::HalfPlaneAffine { c, b } => (c, b),
                _ => unreachable!("validated"),
            };
            if c == 1.0 {
                return Ok(if shift == 0.0 {
                    ClassificationReport::of_type(MapType::Identity, FixedPointSet::Whole)
                } else {
                    ClassificationReport::of_type(MapType::ParabolicExcluded, FixedPointSet::Empty)
                });
            }
            let y0 = phi.half_plane_brfp().expect("c > 1");
            let offset = Complex64::new(0.0, y0);
            let mut r = ClassificationReport::hyperbolic_origin_infinity(
                2,
                c,
                FixedPointSet::BoundaryCurve {
                    offset,
                    direction: Complex64::new(1.0, 0.0),
                },
            );
            r.brfp = Some(BoundaryPoint::siegel(CVector::new(vec![offset, Complex64::new(0.0, 0.0)])?)?);
            Ok(r)
        }
        MapDescriptor::DiagonalLinear { alpha, lambda } => {
            f.validate()?;
            let dim = 1 + lambda.len();
            if *alpha != 1.0 {
                return Ok(ClassificationReport::hyperbolic_origin_infinity(
                    dim,
                    *alpha,
                    FixedPointSet::OriginAndInfinity,
                ));
            }
            if lambda.iter().all(|l| *l == Complex64::new(1.0, 0.0)) {
                return Ok(ClassificationReport::of_type(MapType::Identity, FixedPointSet::Whole));
            }
            Ok(ClassificationReport::of_type(MapType::Elliptic, FixedPointSet::InteriorLine))
        }
        MapDescriptor::Conjugated { base, by } => {
            let r = classify(base)?;
            let map_boundary = |p: &BoundaryPoint| by.apply_boundary(p);
            Ok(ClassificationReport {
                denjoy_wolff: match r.denjoy_wolff {
                    Some(DenjoyWolff::Boundary { point }) => Some(DenjoyWolff::Boundary {
                        point: map_boundary(&point)?,
                    }),
                    Some(DenjoyWolff::Interior { point }) => Some(DenjoyWolff::Interior {
                        point: by.apply(&point)?,
                    }),
                    None => None,
                },
                brfp: r.brfp.as_ref().map(map_boundary).transpose()?,
                fixed_point_set: match r.fixed_point_set {
                    s @ (FixedPointSet::Whole | FixedPointSet::Empty | FixedPointSet::Unknown) => s,
                    s => FixedPointSet::Mapped {
                        set: Box::new(s),
                        by: by.clone(),
                    },
                },
                ..r
            })
        }
        MapDescriptor::BallProduct { components } => {
            f.validate()?;
            let dim = components.len();
            if components
                .iter()
                .all(|g| matches!(g, OneDimMap::DiskScale { lambda } if *lambda == Complex64::new(1.0, 0.0)))
            {
                return Ok(ClassificationReport::of_type(MapType::Identity, FixedPointSet::Whole));
            }
            let centre = Chart::Reflected.to_siegel(&crate::geometry::BallPoint::origin(dim));
            let mut points = Vec::new();
            let mut mult = None;
            for (j, g) in components.iter().enumerate() {
                if let Some(m) = g.multiplier_at_one() {
                    if m > 1.0 {
                        let mut e = CVector::zeros(dim).into_coords();
                        e[j] = Complex64::new(1.0, 0.0);
                        points.push(BoundaryPoint::ball(CVector::new(e)?)?);
                        if j == 0 {
                            mult = Some(m);
                        }
                    }
                }
            }
            let brfp = if mult.is_some() {
                Some(BoundaryPoint::siegel_origin(dim))
            } else {
                None
            };
            Ok(ClassificationReport {
                is_self_map: true,
                map_type: Some(MapType::Elliptic),
                denjoy_wolff: Some(DenjoyWolff::Interior { point: centre }),
                multiplier_at_dw: None,
                brfp,
                brfp_multiplier: mult,
                fixed_point_set: if points.is_empty() {
                    FixedPointSet::Empty
                } else {
                    FixedPointSet::Finite { points }
                },
            })
        }
    }
}

/// `f(z, w) = (φ(z − w²) + w², w)`.
pub fn lift_one_dim(phi: OneDimMap) -> Result<MapDescriptor> {
    let f = MapDescriptor::Lifted { phi };
    f.validate()?;
    Ok(f)
}

/// Closed-form set of boundary fixed points, `Unknown` when the family has
/// none.
pub fn known_brfp_set(f: &MapDescriptor) -> Result<FixedPointSet> {
    let r = classify(f)?;
    if !r.is_self_map {
        return Err(Error::InvalidParameter("not a self-map".into()));
    }
    Ok(r.fixed_point_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::descriptor::evaluate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `f(q + ε e)` approaches `q` as `ε → 0` along the inward normal.
    fn fixes_radially(f: &MapDescriptor, q: &BoundaryPoint) -> bool {
        let v = q.coords().unwrap();
        let mut errs = Vec::new();
        for k in 10..14 {
            let eps = 10f64.powi(-k);
            let (z, w) = v.split_first();
            let p = SiegelPoint::new(z + eps, w.into_coords()).unwrap();
            let img = evaluate(f, &p).unwrap();
            errs.push(img.to_cvector().max_abs_diff(v));
        }
        errs.last().unwrap() < &1e-9
    }

    #[test]
    fn quadpol_curve_points_are_fixed() {
        let f = MapDescriptor::quadratic(2.0, 1.0, 1.0);
        let set = known_brfp_set(&f).unwrap();
        let FixedPointSet::BoundaryCurve { offset, direction } = set else {
            panic!("expected a curve")
        };
        assert_eq!(offset, c(0.0, 0.0));
        assert!((direction - c(0.0, 1.0)).norm() < 1e-15);
        for q in set.sample_points(2, &[-1.5, 0.0, 0.3, 2.0], Chart::Standard).unwrap() {
            assert!(fixes_radially(&f, &q), "{q:?}");
        }
    }

    #[test]
    fn lifted_curve() {
        let f = lift_one_dim(OneDimMap::HalfPlaneAffine { c: 2.0, b: 1.0 }).unwrap();
        let set = known_brfp_set(&f).unwrap();
        let FixedPointSet::BoundaryCurve { offset, .. } = set else {
            panic!("expected a curve")
        };
        assert!((offset - c(0.0, -1.0)).norm() < 1e-15);
        for q in set.sample_points(2, &[-1.0, 0.5, 3.0], Chart::Standard).unwrap() {
            assert!(fixes_radially(&f, &q));
        }
        let r = classify(&lift_one_dim(OneDimMap::HalfPlaneLinear { c: 2.0 }).unwrap()).unwrap();
        assert_eq!(r.multiplier_at_dw, Some(0.5));
        assert!(lift_one_dim(OneDimMap::BlaschkeDeg2 { a: 0.5 }).is_err());
    }

    #[test]
    fn diagonal_and_ball_product() {
        let d = MapDescriptor::DiagonalLinear {
            alpha: 2.0,
            lambda: vec![c(1.0, 0.0)],
        };
        assert_eq!(known_brfp_set(&d).unwrap(), FixedPointSet::OriginAndInfinity);
        let b = MapDescriptor::BallProduct {
            components: vec![
                OneDimMap::BlaschkeDeg2 { a: 0.5 },
                OneDimMap::DiskScale { lambda: c(0.5, 0.0) },
            ],
        };
        let r = classify(&b).unwrap();
        assert_eq!(r.map_type, Some(MapType::Elliptic));
        assert!((r.brfp_multiplier.unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.brfp, Some(BoundaryPoint::siegel_origin(2)));
    }

    #[test]
    fn conjugation_keeps_multipliers() {
        let f = MapDescriptor::quadratic(3.0, 1.0, 1.0);
        let h = SiegelAutomorphism::translation(0.7, &CVector::new(vec![c(0.2, 0.1)]).unwrap()).unwrap();
        let g = MapDescriptor::conjugated(f.clone(), h.clone());
        let (rf, rg) = (classify(&f).unwrap(), classify(&g).unwrap());
        assert_eq!(rf.brfp_multiplier, rg.brfp_multiplier);
        assert_eq!(rf.multiplier_at_dw, rg.multiplier_at_dw);
        let moved = h.apply_boundary(&BoundaryPoint::siegel_origin(2)).unwrap();
        assert_eq!(rg.brfp, Some(moved));
    }
}
