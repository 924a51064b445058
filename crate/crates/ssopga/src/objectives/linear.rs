//! Dense linear inverse problems `E(y) = ‖x − Hy‖²` and the constants the
//! descent theory needs: the spectral norm of H, the gradient Lipschitz
//! constant `L = 2‖H‖²`, and the per-state sliding-parameter bound
//! `2/(κ‖H‖²) − 1` with `κ = ‖y‖∞`.

use std::sync::OnceLock;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SmoothEnergy;
use crate::error::{Error, Result};

/// Desk-scale cap on either matrix dimension.
pub const MAX_DIM: usize = 2000;

/// Squared residual norm `‖x − Hy‖²`.
pub(crate) fn least_squares_energy_view(h: &ArrayView2<f64>, x: &ArrayView1<f64>, y: &ArrayView1<f64>) -> f64 {
    let r = x - &h.dot(y);
    r.dot(&r)
}

/// Gradient `2Hᵀ(Hy − x)`.
///
/// This single code path is shared by every quadratic term in the crate so
/// that decoupled problems reproduce each other's float operations exactly.
pub(crate) fn least_squares_gradient_view(
    h: &ArrayView2<f64>,
    x: &ArrayView1<f64>,
    y: &ArrayView1<f64>,
) -> Array1<f64> {
    let r = &h.dot(y) - x;
    2.0 * h.t().dot(&r)
}

/// Squared residual norm `‖x − Hy‖²` of a dense system.
pub fn least_squares_energy(h: &Array2<f64>, x: &Array1<f64>, y: &Array1<f64>) -> f64 {
    least_squares_energy_view(&h.view(), &x.view(), &y.view())
}

/// Gradient `2Hᵀ(Hy − x)` of a dense system.
pub fn least_squares_gradient(h: &Array2<f64>, x: &Array1<f64>, y: &Array1<f64>) -> Array1<f64> {
    least_squares_gradient_view(&h.view(), &x.view(), &y.view())
}

/// Largest singular value of a dense matrix via power iteration on the Gram
/// matrix of the smaller side, seeded deterministically. Accurate to well
/// under 1e-8 relative for non-degenerate spectra; returns 0 for the zero
/// matrix.
pub fn spectral_norm(h: &ArrayView2<f64>) -> f64 {
    let (n, m) = h.dim();
    if n == 0 || m == 0 || h.iter().all(|&v| v == 0.0) {
        return 0.0;
    }
    // Gram matrix on the smaller dimension keeps the iteration cheap.
    let gram: Array2<f64> = if m <= n {
        h.t().dot(h)
    } else {
        h.dot(&h.t())
    };
    let k = gram.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut v: Array1<f64> = Array1::from_shape_fn(k, |_| rng.gen::<f64>() + 0.5);
    let norm = v.dot(&v).sqrt();
    v /= norm;

    let mut lambda = 0.0_f64;
    for _ in 0..10_000 {
        let w = gram.dot(&v);
        let lambda_new = v.dot(&w);
        let wn = w.dot(&w).sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        v = w / wn;
        if (lambda_new - lambda).abs() <= 1e-10 * lambda_new.abs().max(1.0) {
            lambda = lambda_new;
            break;
        }
        lambda = lambda_new;
    }
    lambda.max(0.0).sqrt()
}

/// Dense degradation operator `H` and observation `x`; the decision variable
/// `y` lives in `R^m` with `H: n×m`.
#[derive(Debug, Clone)]
pub struct LinearInverseProblem {
    h: Array2<f64>,
    x: Array1<f64>,
    spectral: OnceLock<f64>,
}

/// JSON schema: `{"H": [[...], ...], "x": [...]}` with row-major `H`.
#[derive(Serialize, Deserialize)]
struct LinearProblemJson {
    #[serde(rename = "H")]
    h: Vec<Vec<f64>>,
    x: Vec<f64>,
}

impl LinearInverseProblem {
    pub fn new(h: Array2<f64>, x: Array1<f64>) -> Result<Self> {
        let (n, m) = h.dim();
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "degradation operator must be non-empty".into(),
            ));
        }
        if n > MAX_DIM || m > MAX_DIM {
            return Err(Error::InvalidArgument(format!(
                "matrix {n}x{m} exceeds the {MAX_DIM}x{MAX_DIM} desk-scale cap"
            )));
        }
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if let Some(&v) = h.iter().chain(x.iter()).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                index: None,
                value: v,
            });
        }
        Ok(Self {
            h,
            x,
            spectral: OnceLock::new(),
        })
    }

    pub fn operator(&self) -> &Array2<f64> {
        &self.h
    }

    pub fn observation(&self) -> &Array1<f64> {
        &self.x
    }

    pub fn rows(&self) -> usize {
        self.h.nrows()
    }

    /// Residual energy `‖x − Hy‖²`; errors on a length mismatch.
    pub fn energy(&self, y: &[f64]) -> Result<f64> {
        self.check_len(y)?;
        Ok(least_squares_energy_view(
            &self.h.view(),
            &self.x.view(),
            &ArrayView1::from(y),
        ))
    }

    /// Gradient `2Hᵀ(Hy − x)`; errors on a length mismatch.
    pub fn gradient(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y)?;
        Ok(least_squares_gradient_view(
            &self.h.view(),
            &self.x.view(),
            &ArrayView1::from(y),
        )
        .to_vec())
    }

    /// Cached `‖H‖₂`.
    pub fn spectral_norm(&self) -> f64 {
        *self.spectral.get_or_init(|| spectral_norm(&self.h.view()))
    }

    /// Gradient Lipschitz constant `L = 2‖H‖₂²`.
    pub fn lipschitz_constant(&self) -> f64 {
        let s = self.spectral_norm();
        2.0 * s * s
    }

    /// The sufficient sliding-parameter bound `2/(κ‖H‖₂²) − 1` at state `y`,
    /// `κ = ‖y‖∞`. May be negative, meaning no `α ≥ 0` satisfies the
    /// sufficient condition at this state; the caller decides what to do.
    /// A zero state has no defined bound.
    pub fn alpha_upper_bound(&self, y: &[f64]) -> Result<f64> {
        self.check_len(y)?;
        if let Some((i, &v)) = y.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
            return Err(Error::NegativeComponent { index: i, value: v });
        }
        let kappa = y.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        if kappa == 0.0 {
            return Err(Error::InvalidArgument(
                "the sliding-parameter bound is undefined at the zero state".into(),
            ));
        }
        let s = self.spectral_norm();
        Ok(2.0 / (kappa * s * s) - 1.0)
    }

    pub fn to_json(&self) -> String {
        let doc = LinearProblemJson {
            h: self
                .h
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect(),
            x: self.x.to_vec(),
        };
        serde_json::to_string_pretty(&doc).expect("serializing plain floats cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LinearProblemJson = serde_json::from_str(text)?;
        let n = doc.h.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let m = doc.h[0].len();
        if doc.h.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let flat: Vec<f64> = doc.h.into_iter().flatten().collect();
        let h = Array2::from_shape_vec((n, m), flat)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Self::new(h, Array1::from(doc.x))
    }

    fn check_len(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.h.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.h.ncols(),
                got: y.len(),
            });
        }
        Ok(())
    }
}

impl SmoothEnergy for LinearInverseProblem {
    fn dimension(&self) -> usize {
        self.h.ncols()
    }

    fn energy(&self, y: ArrayView1<f64>) -> f64 {
        assert_eq!(y.len(), self.h.ncols(), "state length mismatch");
        least_squares_energy_view(&self.h.view(), &self.x.view(), &y)
    }

    fn gradient(&self, y: ArrayView1<f64>) -> Array1<f64> {
        assert_eq!(y.len(), self.h.ncols(), "state length mismatch");
        least_squares_gradient_view(&self.h.view(), &self.x.view(), &y)
    }
}
