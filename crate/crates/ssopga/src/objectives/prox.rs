//! Non-smooth terms and their proximal maps.

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Component-wise soft threshold `sign(v_i)·max(|v_i| − τ, 0)`: the exact
/// minimizer of `½‖z − v‖² + τ‖z‖₁`.
pub fn soft_threshold(v: &[f64], tau: f64) -> Result<Vec<f64>> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "soft threshold requires tau >= 0, got {tau}"
        )));
    }
    Ok(v.iter().map(|&x| shrink(x, tau)).collect())
}

#[inline]
pub(crate) fn shrink(x: f64, tau: f64) -> f64 {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        0.0
    }
}

/// Optional non-smooth term: either absent (identity prox) or a weighted
/// ℓ1 norm `λ‖y‖₁` (soft-threshold prox).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProximalTerm {
    Identity,
    L1 { weight: f64 },
}

impl ProximalTerm {
    /// The weight λ of the non-smooth term (0 when absent).
    pub fn weight(&self) -> f64 {
        match self {
            ProximalTerm::Identity => 0.0,
            ProximalTerm::L1 { weight } => *weight,
        }
    }

    /// Penalty contribution to the reported objective.
    pub fn penalty(&self, y: ArrayView1<f64>) -> f64 {
        match self {
            ProximalTerm::Identity => 0.0,
            ProximalTerm::L1 { weight } => weight * y.iter().map(|v| v.abs()).sum::<f64>(),
        }
    }

    /// Proximal map at threshold `tau ≥ 0`; `tau = 0` is the identity.
    pub fn prox(&self, v: &[f64], tau: f64) -> Result<Vec<f64>> {
        if tau.is_nan() || tau < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "prox threshold must be non-negative, got {tau}"
            )));
        }
        match self {
            ProximalTerm::Identity => Ok(v.to_vec()),
            ProximalTerm::L1 { .. } => soft_threshold(v, tau),
        }
    }

    /// Proximal map with one threshold per coordinate (diagonal step sizes).
    pub(crate) fn prox_per_coordinate(&self, v: &Array1<f64>, taus: &Array1<f64>) -> Array1<f64> {
        match self {
            ProximalTerm::Identity => v.clone(),
            ProximalTerm::L1 { .. } => {
                Array1::from_shape_fn(v.len(), |i| shrink(v[i], taus[i]))
            }
        }
    }
}
