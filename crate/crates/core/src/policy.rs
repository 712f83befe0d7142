//! Process-wide numeric tolerances.

use serde::{Deserialize, Serialize};
use std::sync::RwLock;

/// Tolerances shared by every module. All computation is in `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    /// Boundary membership (`|norm - 1|` or `|defect|`) and step-bound slack.
    pub validity_tol: f64,
    /// Relative tolerance for the square-modulus self-map bound `|Λ|² ≤ α`.
    pub self_map_tol: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        validity_tol: 1e-12,
        self_map_tol: 1e-12,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static POLICY: RwLock<NumericPolicy> = RwLock::new(NumericPolicy::DEFAULT);

/// Current policy.
pub fn policy() -> NumericPolicy {
    *POLICY.read().unwrap_or_else(|e| e.into_inner())
}

/// Replace the process-wide policy. Intended to be called once at start-up.
pub fn set_policy(p: NumericPolicy) {
    *POLICY.write().unwrap_or_else(|e| e.into_inner()) = p;
}
