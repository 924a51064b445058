//! The sliding sigmoid multiplier: a bounded, strictly decreasing map
//!
//! ```math
//! S_α(z) = 2σ(−z − α) + 2σ(α) − 1,   σ(c) = 1/(1 + e^{−c}),  α ≥ 0
//! ```
//!
//! used as a multiplicative replacement for the additive gradient step.
//! For every α the curve passes through (0, 1), so a zero gradient leaves
//! the iterate unchanged; positive gradients map below 1 and negative
//! gradients above 1, which turns `y ⊙ S_α(∇E(y))` into a descent update
//! that preserves non-negativity. The output is confined to the open band
//! `(2σ(α) − 1, 2σ(α) + 1)`, so a single step can never scale a coordinate
//! by more than that band allows.
//!
//! Each multiplicative step is exactly an additive step with a per-coordinate
//! step size: `y·S_α(z) = y − ρ·z` with `ρ = y·θ(z)` and
//! `θ(z) = (1 − S_α(z))/z ∈ (0, 1/2]` (continuously extended at `z = 0`).
//! [`SlidingSigmoid::equivalent_step`] reconstructs that `(θ, ρ)` pair.

use crate::error::{Error, Result};

/// Alpha values beyond this are clamped when computing the band endpoints;
/// σ(α) is 1.0 to machine precision long before 700 and exp would overflow
/// further out.
const ALPHA_CAP: f64 = 700.0;

/// Numerically stable logistic function; only ever exponentiates a
/// non-positive argument.
#[inline]
pub fn sigmoid(c: f64) -> f64 {
    if c >= 0.0 {
        1.0 / (1.0 + (-c).exp())
    } else {
        let e = c.exp();
        e / (1.0 + e)
    }
}

/// The sliding multiplier with a fixed sliding parameter `alpha ≥ 0`.
///
/// Values are plain data; all methods are pure, so instances can be shared
/// freely across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlidingSigmoid {
    alpha: f64,
}

/// Additive reconstruction of one multiplicative step: `y·S_α(z) = y − rho·z`
/// with `rho = y·theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepEquivalence {
    /// Per-coordinate factor in (0, 1/2].
    pub theta: f64,
    /// Equivalent additive step size, `y·theta ≥ 0` for `y ≥ 0`.
    pub rho: f64,
}

impl SlidingSigmoid {
    /// Builds the operator. Negative or non-finite `alpha` is rejected:
    /// the descent guarantees assume `alpha ≥ 0`.
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite {
                index: None,
                value: alpha,
            });
        }
        if alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "sliding parameter must be non-negative, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Evaluates the multiplier. `z = 0` returns exactly 1.
    pub fn apply(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::NonFinite {
                index: None,
                value: z,
            });
        }
        Ok(self.apply_raw(z))
    }

    /// Evaluation without the finiteness check; callers validate inputs.
    #[inline]
    pub(crate) fn apply_raw(&self, z: f64) -> f64 {
        if z == 0.0 {
            return 1.0;
        }
        2.0 * sigmoid(-z - self.alpha) + 2.0 * sigmoid(self.alpha) - 1.0
    }

    /// Component-wise evaluation; reports the index of the first non-finite
    /// component.
    pub fn apply_elementwise(&self, g: &[f64]) -> Result<Vec<f64>> {
        for (i, &z) in g.iter().enumerate() {
            if !z.is_finite() {
                return Err(Error::NonFinite {
                    index: Some(i),
                    value: z,
                });
            }
        }
        Ok(g.iter().map(|&z| self.apply_raw(z)).collect())
    }

    /// Open band `(2σ(α) − 1, 2σ(α) + 1)` containing every output.
    /// The lower endpoint equals `tanh(α/2)`, so it lies in [0, 1) and the
    /// upper endpoint in (1, 3].
    pub fn bounds(&self) -> (f64, f64) {
        let a = self.alpha.min(ALPHA_CAP);
        let lower = 2.0 * sigmoid(a) - 1.0;
        (lower, lower + 2.0)
    }

    /// Derivative `−2σ(−z−α)(1 − σ(−z−α))`; negative with magnitude at most
    /// 1/2 (the operator is strictly decreasing). Uses `1 − σ(c) = σ(−c)` so
    /// the value stays strictly negative right up to exp underflow instead of
    /// cancelling to zero near saturation.
    pub fn derivative(&self, z: f64) -> f64 {
        let c = -z - self.alpha;
        -2.0 * sigmoid(c) * sigmoid(-c)
    }

    /// The ratio `(1 − S_α(z))/z`, extended by continuity to `−S_α'(0)` at
    /// `z = 0`; always in (0, 1/2].
    ///
    /// Evaluated in the cancellation-free product form
    /// `2·σ(α)·σ(−z−α)·expm1(z)/z` (mirrored for `z > 0`), which stays
    /// accurate for `|z|` from subnormal up to overflow scale.
    pub fn equivalent_theta(&self, z: f64) -> f64 {
        let a = self.alpha;
        if z == 0.0 {
            // limit −S'(0) = 2σ'(−α)
            return 2.0 * sigmoid(a) * sigmoid(-a);
        }
        if z < 0.0 {
            2.0 * sigmoid(a) * sigmoid(-z - a) * (z.exp_m1() / z)
        } else {
            2.0 * sigmoid(-a) * sigmoid(z + a) * (-(-z).exp_m1() / z)
        }
    }

    /// Reconstructs the additive form of one multiplicative step at state
    /// `y_i ≥ 0` and gradient component `z`: returns `(theta, rho)` with
    /// `y_i·S_α(z) = y_i − rho·z` to machine precision.
    pub fn equivalent_step(&self, y_i: f64, z: f64) -> Result<StepEquivalence> {
        if !z.is_finite() {
            return Err(Error::NonFinite {
                index: None,
                value: z,
            });
        }
        if y_i.is_nan() || y_i < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "equivalent step is defined for non-negative states, got {y_i}"
            )));
        }
        let theta = self.equivalent_theta(z);
        Ok(StepEquivalence {
            theta,
            rho: y_i * theta,
        })
    }

    /// Slack of the linear envelope `|S_α(z) − 1| ≤ η(α)|z|` with
    /// `η(α) = (1 + α)/2`; non-negative for every finite `z`.
    pub fn envelope_slack(&self, z: f64) -> Result<f64> {
        let value = self.apply(z)?;
        let eta = (1.0 + self.alpha) / 2.0;
        Ok(eta * z.abs() - (value - 1.0).abs())
    }
}
