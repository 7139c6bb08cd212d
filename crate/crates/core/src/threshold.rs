//! Fidelity-improvement thresholds and the reuse-round results derived from
//! them.

use crate::error::{param, Result};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

/// Threshold `ε` together with the baseline fidelities `F(ρ)` and `F(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    epsilon: f64,
    f_rho: f64,
    f_tau: f64,
    boundary_tol: f64,
}

impl ThresholdConfig {
    pub fn new(epsilon: f64, f_rho: f64, f_tau: f64) -> Result<Self> {
        Self::with_tolerance(epsilon, f_rho, f_tau, DEFAULT_BOUNDARY_TOL)
    }

    pub fn with_tolerance(epsilon: f64, f_rho: f64, f_tau: f64, boundary_tol: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(param("epsilon", format!("{epsilon} not in (0, 1)")));
        }
        for (name, v) in [("f_rho", f_rho), ("f_tau", f_tau)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(param(name, format!("{v} not in [0, 1]")));
            }
        }
        if !(boundary_tol >= 0.0 && boundary_tol.is_finite()) {
            return Err(param("boundary_tol", format!("{boundary_tol} must be finite and >= 0")));
        }
        Ok(Self {
            epsilon,
            f_rho,
            f_tau,
            boundary_tol,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn f_rho(&self) -> f64 {
        self.f_rho
    }
    pub fn f_tau(&self) -> f64 {
        self.f_tau
    }
    pub fn boundary_tol(&self) -> f64 {
        self.boundary_tol
    }

    /// `F(τ) - F(ρ)`.
    pub fn gap(&self) -> f64 {
        self.f_tau - self.f_rho
    }

    /// Same baselines with `ε` replaced. The replacement is not range-checked
    /// (the teleportation threshold `(d+1)ε/d` can exceed one).
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }

    /// Strict `gain > ε`. Gains within `boundary_tol` of `ε` count as equal and
    /// therefore fail.
    pub fn clears(&self, gain: f64) -> bool {
        gain - self.epsilon > self.boundary_tol
    }
}

/// Number of reuse rounds that keep the improvement above threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReuseBound {
    /// Guarded result: every round `1..=rounds` clears the threshold and round
    /// `rounds + 1` does not.
    pub rounds: u64,
    /// Value of the log-ratio expression before flooring, when one exists.
    pub raw_value: Option<f64>,
    /// Floor of `raw_value` (may be negative when `ε ≥ gap`), or the unguarded
    /// scan result for protocols without a closed-form bound.
    pub raw_floor: Option<i64>,
}

impl ReuseBound {
    /// Whether the raw formula and the guarded value disagree.
    pub fn differs(&self) -> bool {
        match self.raw_floor {
            Some(raw) => raw.max(0) as u64 != self.rounds,
            None => false,
        }
    }
}
