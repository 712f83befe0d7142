//! Damped Newton iteration for `f(Z) = V` on the `2N` real coordinates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CVector;
use crate::maps::MapDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverPolicy {
    /// Relative step of the central finite differences.
    pub fd_step: f64,
    /// Residual tolerance, relative to `max(1, ||V||)`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Skip closed-form inverses and always use Newton.
    pub force_newton: bool,
}

impl Default for SolverPolicy {
    fn default() -> Self {
        Self {
            fd_step: 1e-6,
            residual_tol: 1e-11,
            max_iter: 100,
            force_newton: false,
        }
    }
}

fn to_reals(v: &CVector) -> DVector<f64> {
    DVector::from_iterator(2 * v.dim(), v.coords().iter().flat_map(|c| [c.re, c.im]))
}

fn from_reals(x: &DVector<f64>) -> CVector {
    CVector::raw(x.as_slice().chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

fn residual(f: &MapDescriptor, x: &DVector<f64>, target: &DVector<f64>) -> DVector<f64> {
    to_reals(&f.eval_cvector(&from_reals(x))) - target
}

/// Solves `f(Z) = v` from `seed`. Returns the root and its residual norm.
pub fn newton_preimage(f: &MapDescriptor, v: &CVector, seed: &CVector, policy: &SolverPolicy) -> Result<(CVector, f64)> {
    let target = to_reals(v);
    let scale = v.norm().max(1.0);
    let tol = policy.residual_tol * scale;
    let mut x = to_reals(seed);
    let mut r = residual(f, &x, &target);
    let mut rn = r.norm();
    let n = x.len();
    for _ in 0..policy.max_iter {
        if rn <= tol {
            return Ok((from_reals(&x), rn));
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let h = policy.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let col = (residual(f, &xp, &target) - residual(f, &xm, &target)) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let Some(dx) = jac.lu().solve(&(-&r)) else {
            return Err(Error::SolverFailure {
                residual: rn,
                iterations: policy.max_iter,
            });
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let xn = &x + &dx * lambda;
            let rnew = residual(f, &xn, &target);
            let nn = rnew.norm();
            if nn.is_finite() && nn < rn {
                x = xn;
                r = rnew;
                rn = nn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if rn <= tol {
        Ok((from_reals(&x), rn))
    } else {
        Err(Error::SolverFailure {
            residual: rn,
            iterations: policy.max_iter,
        })
    }
}
