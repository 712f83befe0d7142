use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::special::SpecialOrbit;
use super::tau::{build_tau, Variant};
use crate::dynamics::BackwardOrbit;
use crate::error::{Error, Result};
use crate::geometry::{dist_siegel, CVector, SiegelAutomorphism, SiegelPoint};
use crate::maps::{expandable_decompose, Expansion, MapDescriptor};

/// Requested variant, resolved against the map into a [`Variant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantKind {
    #[default]
    Basic,
    Expandable,
}

/// `x ∈ {0.1, 0.316, 1, 3.16, 10}` on the axis crossed with first tangential
/// offsets `{0, ±0.1, ±0.1i}`.
pub fn default_grid(dim: usize) -> Vec<SiegelPoint> {
    let xs = [0.1, 10f64.powf(-0.5), 1.0, 10f64.powf(0.5), 10.0];
    let offsets = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.1, 0.0),
        Complex64::new(-0.1, 0.0),
        Complex64::new(0.0, 0.1),
        Complex64::new(0.0, -0.1),
    ];
    let mut grid = Vec::new();
    for &x in &xs {
        for (i, &o) in offsets.iter().enumerate() {
            if dim == 1 && i > 0 {
                break;
            }
            let mut w = vec![Complex64::new(0.0, 0.0); dim - 1];
            if dim > 1 {
                w[0] = o;
            }
            grid.push(SiegelPoint::new(Complex64::new(x, 0.0), w).expect("grid points lie in H^N"));
        }
    }
    grid
}

/// Samples of `ψ_n = f_n ∘ τ_n ∘ p_L` and the residual of `ψ∘η = f∘ψ`, all in
/// the frame where the fixed point is the Siegel origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationRun {
    pub map: MapDescriptor,
    pub recentered: MapDescriptor,
    pub recentering: SiegelAutomorphism,
    pub orbit: BackwardOrbit,
    pub alpha: f64,
    pub variant: Variant,
    pub expansion: Expansion,
    pub grid: Vec<SiegelPoint>,
    /// `ψ_n` on the grid, for `n = 0..orbit.len()`.
    pub psi: Vec<Vec<SiegelPoint>>,
    /// `max_grid d(ψ_n(η Z), f(ψ_n(Z)))`.
    pub residuals: Vec<f64>,
    /// `d(ψ_N(a_k), Z_k)` for `a_k = (α^{-k}, 0)`, `k ≤ N/2`, `N` the last index.
    pub interp_errors: Vec<f64>,
}

impl ConjugationRun {
    pub fn new(map: &MapDescriptor, special: SpecialOrbit, kind: VariantKind, grid: Vec<SiegelPoint>) -> Result<Self> {
        let SpecialOrbit {
            orbit,
            recentering,
            recentered,
            alpha,
            ..
        } = special;
        let dim = recentered.dim();
        if let Some(p) = grid.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        let (variant, expansion) = match kind {
            VariantKind::Basic => (Variant::Basic, Expansion::basic(alpha, dim)?),
            VariantKind::Expandable => {
                let e = expandable_decompose(&recentered)?;
                if (e.alpha - alpha).abs() > 1e-9 * alpha {
                    return Err(Error::InvalidParameter(format!(
                        "multiplier {alpha} differs from the expansion coefficient {}",
                        e.alpha
                    )));
                }
                (
                    Variant::Expandable {
                        omega: e.omega.clone(),
                        l: e.l,
                    },
                    e,
                )
            }
        };
        let mut run = Self {
            map: map.clone(),
            recentered,
            recentering,
            orbit,
            alpha,
            variant,
            expansion,
            grid,
            psi: Vec::new(),
            residuals: Vec::new(),
            interp_errors: Vec::new(),
        };
        for n in 0..run.orbit.len() {
            let samples = psi_approx(&run, n)?;
            run.residuals.push(conjugation_residual(&run, n)?);
            run.psi.push(samples);
        }
        run.interp_errors = psi_interpolation_check(&run)?;
        Ok(run)
    }

    /// Index of the last computed approximation.
    pub fn last_index(&self) -> usize {
        self.orbit.len() - 1
    }

    /// Residuals are non-increasing from index `burn_in` on, up to `slack`.
    pub fn residuals_settle(&self, burn_in: usize, slack: f64) -> bool {
        self.residuals
            .iter()
            .skip(burn_in)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|p| *p[1] <= *p[0] + slack)
    }

    fn eta(&self) -> SiegelAutomorphism {
        self.expansion.eta()
    }

    /// `ψ_n(Z)` at any point.
    pub fn psi_at(&self, n: usize, z: &SiegelPoint) -> Result<SiegelPoint> {
        let tau = build_tau(&self.orbit, n, &self.variant)?;
        let (pz, pw) = self.expansion.project(z.z(), z.w().coords());
        let (mut cz, mut cw) = tau.apply_coords(pz, &pw);
        for _ in 0..n {
            (cz, cw) = self.recentered.eval_coords(cz, &cw);
        }
        SiegelPoint::new(cz, cw).map_err(|e| match e {
            Error::OutsideDomain(m) => Error::OutsideDomain(format!("ψ_{n} left the domain: {m}")),
            other => other,
        })
    }
}

/// `ψ_n` on the run's grid.
pub fn psi_approx(run: &ConjugationRun, n: usize) -> Result<Vec<SiegelPoint>> {
    if n >= run.orbit.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: run.orbit.len(),
        });
    }
    run.grid.iter().map(|z| run.psi_at(n, z)).collect()
}

/// `max_grid d(ψ_n(η Z), f(ψ_n(Z)))`.
pub fn conjugation_residual(run: &ConjugationRun, n: usize) -> Result<f64> {
    let eta = run.eta();
    let mut worst = 0.0f64;
    for z in &run.grid {
        let lhs = run.psi_at(n, &eta.apply(z)?)?;
        let p = run.psi_at(n, z)?;
        let (fz, fw) = run.recentered.eval_coords(p.z(), p.w().coords());
        let rhs = SiegelPoint::new(fz, fw)?;
        worst = worst.max(dist_siegel(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// `d(ψ_N(a_k), Z_k)` with `a_k = (α^{-k}, 0)` for `k ≤ N/2`.
pub fn psi_interpolation_check(run: &ConjugationRun) -> Result<Vec<f64>> {
    let n = run.last_index();
    let dim = run.recentered.dim();
    (0..=n / 2)
        .map(|k| {
            let a = SiegelPoint::axis(run.alpha.powi(-(k as i32)), dim)?;
            dist_siegel(&run.psi_at(n, &a)?, &run.orbit.points[k])
        })
        .collect()
}

/// `g_n = τ_n⁻¹ ∘ ψ ∘ η_n⁻¹` with `ψ ≈ ψ_N` (`N` the last index), compared with
/// `p_L` on the grid, for `n ≤ N/2`. Grid points whose images leave the
/// domain are skipped; `None` marks an index with no usable point.
pub fn g_n_diagnostics(run: &ConjugationRun) -> Result<Vec<Option<f64>>> {
    let big_n = run.last_index();
    let dim = run.recentered.dim();
    let mut out = Vec::new();
    for n in 0..=big_n / 2 {
        let tau_inv = build_tau(&run.orbit, n, &run.variant)?.inverse();
        let eta_n_inv = run.variant.eta_power(run.alpha, dim, -(n as i32))?;
        let mut worst: Option<f64> = None;
        for z in &run.grid {
            let Ok(inner) = SiegelPoint::from_cvector(&apply_vec(&eta_n_inv, z)) else {
                continue;
            };
            let Ok(psi) = run.psi_at(big_n, &inner) else {
                continue;
            };
            let Ok(g) = SiegelPoint::from_cvector(&apply_vec(&tau_inv, &psi)) else {
                continue;
            };
            let (pz, pw) = run.expansion.project(z.z(), z.w().coords());
            let target = SiegelPoint::new(pz, pw)?;
            let d = dist_siegel(&g, &target)?;
            worst = Some(worst.map_or(d, |w| w.max(d)));
        }
        out.push(worst);
    }
    Ok(out)
}

fn apply_vec(a: &SiegelAutomorphism, p: &SiegelPoint) -> CVector {
    let (z, w) = a.apply_coords(p.z(), p.w().coords());
    CVector::from_parts(z, &CVector::new(w).unwrap_or_else(|_| CVector::zeros(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::special_backward_construct;
    use crate::dynamics::SolverPolicy;
    use crate::geometry::BoundaryPoint;
    use crate::maps::fixtures;

    fn run_for(f: &MapDescriptor, q: &BoundaryPoint, alpha: f64, rho: f64, n: usize, kind: VariantKind) -> ConjugationRun {
        let s = special_backward_construct(f, q, alpha, rho, n, &SolverPolicy::default()).unwrap();
        ConjugationRun::new(f, s, kind, default_grid(f.dim())).unwrap()
    }

    #[test]
    fn quadpol_psi_is_p1() {
        let f = fixtures::quadpol();
        let run = run_for(&f, &BoundaryPoint::siegel_origin(2), 2.0, 1.0, 20, VariantKind::Basic);
        for (n, samples) in run.psi.iter().enumerate() {
            for (z, p) in run.grid.iter().zip(samples) {
                assert_eq!(p.z(), z.z(), "n = {n}");
                assert_eq!(p.w()[0], Complex64::new(0.0, 0.0));
            }
        }
        assert!(run.residuals.iter().all(|&r| r <= 1e-12));
        assert!(run.interp_errors.iter().all(|&e| e <= 1e-12));
        assert!(g_n_diagnostics(&run).unwrap().iter().all(|e| e.unwrap() <= 1e-12));
    }

    #[test]
    fn diagonal_runs() {
        let f = fixtures::diagonal_2_1();
        let run = run_for(&f, &BoundaryPoint::siegel_origin(2), 2.0, 1.0, 15, VariantKind::Basic);
        for (z, p) in run.grid.iter().zip(run.psi.last().unwrap()) {
            assert!((p.z() - z.z()).norm() < 1e-15 && p.w()[0].norm() == 0.0);
        }
        let f = fixtures::diagonal_expandable(0.9);
        let run = run_for(&f, &BoundaryPoint::siegel_origin(2), 2.0, 1.0, 15, VariantKind::Expandable);
        assert!(matches!(run.variant, Variant::Expandable { l: 1, .. }));
        for samples in &run.psi {
            for (z, p) in run.grid.iter().zip(samples) {
                assert!(p.to_cvector().max_abs_diff(&z.to_cvector()) < 1e-12);
            }
        }
        assert!(run.residuals.iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn expandable_with_l0_matches_basic() {
        let f = fixtures::diagonal_2_1();
        let basic = run_for(&f, &BoundaryPoint::siegel_origin(2), 2.0, 1.0, 10, VariantKind::Basic);
        let exp = run_for(&f, &BoundaryPoint::siegel_origin(2), 2.0, 1.0, 10, VariantKind::Expandable);
        assert_eq!(basic.psi, exp.psi);
    }

    #[test]
    fn projection_commutes_with_eta_inverse() {
        let e = expandable_decompose(&fixtures::diagonal_expandable(0.3)).unwrap();
        let eta_inv = e.eta().inverse();
        for z in default_grid(2) {
            let (pz, pw) = e.project(z.z(), z.w().coords());
            let a = eta_inv.apply_coords(pz, &pw);
            let (iz, iw) = eta_inv.apply_coords(z.z(), z.w().coords());
            let b = e.project(iz, &iw);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn blaschke_residual_decreases() {
        let f = fixtures::blaschke_product();
        let e1 = BoundaryPoint::ball(CVector::e1(2)).unwrap();
        let run = run_for(&f, &e1, 4.0 / 3.0, 0.5, 30, VariantKind::Basic);
        assert!(run.residuals[30] < 1e-3);
        assert!(run.residuals_settle(5, 1e-12));
    }
}
