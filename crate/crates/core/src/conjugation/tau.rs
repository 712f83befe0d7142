use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::BackwardOrbit;
use crate::error::{Error, Result};
use crate::geometry::{dist_siegel, SiegelAutomorphism, SiegelPoint};

/// Which linear model the construction targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    /// `η(z, w) = (αz, √α w)` and `p_1(z, w) = (z, 0)`.
    Basic,
    /// `η(z, w) = (αz, √α Ω w)` and `p_L` keeping the `L` coordinates with
    /// `|a_jj|² = α`.
    Expandable {
        #[serde(with = "crate::serial::complex_vec")]
        omega: Vec<Complex64>,
        l: usize,
    },
}

impl Variant {
    fn omega(&self) -> Option<&[Complex64]> {
        match self {
            Variant::Basic => None,
            Variant::Expandable { omega, .. } => Some(omega),
        }
    }

    /// `η_k = η^k`.
    pub fn eta_power(&self, alpha: f64, dim: usize, k: i32) -> Result<SiegelAutomorphism> {
        let omega: Vec<Complex64> = match self.omega() {
            Some(o) => o.iter().map(|x| x.powi(k)).collect(),
            None => vec![Complex64::new(1.0, 0.0); dim - 1],
        };
        SiegelAutomorphism::eta(alpha.powi(k), &omega)
    }
}

/// `τ_n = Ω^{-n} ∘ h_n⁻¹ ∘ δ_n⁻¹`, where `h_n` moves `Z_n` to `(t_n, 0)` and
/// `δ_n(z, w) = (z/t_n, w/√t_n)`. In the basic variant `Ω = 1` and
/// `τ_n(1, 0) = Z_n`.
pub fn build_tau(orbit: &BackwardOrbit, n: usize, variant: &Variant) -> Result<SiegelAutomorphism> {
    let zn = orbit.points.get(n).ok_or(Error::IndexOutOfRange {
        index: n,
        len: orbit.len(),
    })?;
    let delta_inv = SiegelAutomorphism::dilation(1.0 / zn.defect())?;
    let h_inv = SiegelAutomorphism::translation_to_axis(zn).inverse();
    let mut tau = SiegelAutomorphism::compose(&h_inv, &delta_inv);
    if let Some(omega) = variant.omega() {
        let rot: Vec<Complex64> = omega.iter().map(|o| o.conj().powi(n as i32)).collect();
        tau = SiegelAutomorphism::compose(&SiegelAutomorphism::rotation(rot)?, &tau);
    }
    Ok(tau)
}

/// Distances to the limits `τ_{n+k}⁻¹ ∘ τ_n → η_k` and
/// `τ_{n+1}⁻¹ ∘ η⁻¹ ∘ τ_n → id`, as suprema over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauReport {
    pub k: usize,
    /// `sup d(τ_{n+k}⁻¹ τ_n Z, η_k Z)` for `n = 0, 1, ..`.
    pub shift_errors: Vec<f64>,
    /// `sup d(τ_{n+1}⁻¹ η⁻¹ τ_n Z, Z)`.
    pub step_errors: Vec<f64>,
    /// Both final errors are within `tol`.
    pub converged: bool,
}

pub fn tau_limit_diagnostics(
    orbit: &BackwardOrbit,
    alpha: f64,
    k: usize,
    grid: &[SiegelPoint],
    variant: &Variant,
    tol: f64,
) -> Result<TauReport> {
    let dim = orbit.points[0].dim();
    let eta_k = variant.eta_power(alpha, dim, k as i32)?;
    let eta_inv = variant.eta_power(alpha, dim, -1)?;
    let mut shift_errors = Vec::new();
    let mut step_errors = Vec::new();
    let taus: Vec<SiegelAutomorphism> = (0..orbit.len())
        .map(|n| build_tau(orbit, n, variant))
        .collect::<Result<_>>()?;
    for n in 0..orbit.len() {
        if n + k.max(1) >= orbit.len() {
            break;
        }
        let shift = SiegelAutomorphism::compose(&taus[n + k].inverse(), &taus[n]);
        let step = taus[n].then(&eta_inv).then(&taus[n + 1].inverse());
        let mut e1 = 0.0f64;
        let mut e2 = 0.0f64;
        for z in grid {
            e1 = e1.max(dist_siegel(&shift.apply(z)?, &eta_k.apply(z)?)?);
            e2 = e2.max(dist_siegel(&step.apply(z)?, z)?);
        }
        shift_errors.push(e1);
        step_errors.push(e2);
    }
    let converged = matches!((shift_errors.last(), step_errors.last()), (Some(a), Some(b)) if *a <= tol && *b <= tol);
    Ok(TauReport {
        k,
        shift_errors,
        step_errors,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{backward_orbit, SolverPolicy};
    use crate::geometry::CVector;
    use crate::maps::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadpol_orbit() -> BackwardOrbit {
        backward_orbit(&fixtures::quadpol(), &SiegelPoint::axis(1.0, 2).unwrap(), 0.34, 30, &SolverPolicy::default())
            .unwrap()
    }

    #[test]
    fn tau_for_the_axis_orbit() {
        let o = quadpol_orbit();
        assert!(build_tau(&o, 0, &Variant::Basic).unwrap().is_identity());
        let p = SiegelPoint::new(c(1.5, 0.3), vec![c(0.2, -0.4)]).unwrap();
        for n in [1usize, 5, 17] {
            let tau = build_tau(&o, n, &Variant::Basic).unwrap();
            let img = tau.apply(&p).unwrap();
            let s = 0.5f64.powi(n as i32);
            let expected = CVector::new(vec![p.z() * s, p.w()[0] * s.sqrt()]).unwrap();
            assert!(img.to_cvector().max_abs_diff(&expected) < 1e-15);
            let base = tau.apply(&SiegelPoint::axis(1.0, 2).unwrap()).unwrap();
            assert_eq!(base, o.points[n]);
        }
        assert!(build_tau(&o, 31, &Variant::Basic).is_err());
    }

    #[test]
    fn expandable_tau_rotates() {
        let o = quadpol_orbit();
        let theta = 0.4;
        let v = Variant::Expandable {
            omega: vec![Complex64::from_polar(1.0, theta)],
            l: 1,
        };
        let p = SiegelPoint::new(c(1.0, 0.0), vec![c(0.3, 0.0)]).unwrap();
        let a = build_tau(&o, 3, &v).unwrap().apply(&p).unwrap();
        let b = build_tau(&o, 3, &Variant::Basic).unwrap().apply(&p).unwrap();
        assert!((a.w()[0] - b.w()[0] * Complex64::from_polar(1.0, -3.0 * theta)).norm() < 1e-15);
    }

    #[test]
    fn limits_exact_on_quadpol() {
        let o = quadpol_orbit();
        let grid = crate::conjugation::default_grid(2);
        let r = tau_limit_diagnostics(&o, 2.0, 3, &grid, &Variant::Basic, 1e-12).unwrap();
        // √(t_n/t_{n+k}) for odd k is irrational, so allow one rounding.
        assert!(r.shift_errors.iter().chain(&r.step_errors).all(|&e| e <= 1e-15));
        assert!(r.converged);
        let r0 = tau_limit_diagnostics(&o, 2.0, 0, &grid, &Variant::Basic, 1e-12).unwrap();
        assert!(r0.shift_errors.iter().all(|&e| e == 0.0));
    }
}
