//! Objective definitions: smooth energies with gradients, non-smooth terms
//! with proximal maps, and their composite form.

mod linear;
mod prox;
mod scalar;

pub use linear::{
    least_squares_energy, least_squares_gradient, spectral_norm, LinearInverseProblem,
};
pub use prox::{soft_threshold, ProximalTerm};
pub use scalar::{BenchmarkId, ScalarEnergy, II_PLUS_MINIMIZER, I_PLUS_MINIMIZER};

use ndarray::{Array1, ArrayView1};

/// A smooth energy term: a finite value and a gradient of matching dimension.
///
/// Implementations panic if handed a vector of the wrong length; callers
/// validate dimensions once at the solver boundary.
pub trait SmoothEnergy: Send + Sync {
    fn dimension(&self) -> usize;
    fn energy(&self, y: ArrayView1<f64>) -> f64;
    fn gradient(&self, y: ArrayView1<f64>) -> Array1<f64>;
}

/// Smooth energy plus an optional non-smooth term with a proximal map.
pub struct CompositeObjective {
    smooth: Box<dyn SmoothEnergy>,
    prox: ProximalTerm,
}

impl CompositeObjective {
    pub fn new(smooth: Box<dyn SmoothEnergy>, prox: ProximalTerm) -> Self {
        Self { smooth, prox }
    }

    /// Wraps a linear inverse problem, optionally with a non-smooth term.
    pub fn from_linear(problem: LinearInverseProblem, prox: ProximalTerm) -> Self {
        Self::new(Box::new(problem), prox)
    }

    /// The four scalar benchmark problems, addressed by id.
    pub fn benchmark(id: BenchmarkId) -> Self {
        let (smooth, prox): (ScalarEnergy, ProximalTerm) = match id {
            BenchmarkId::I => (ScalarEnergy::Quadratic { center: 0.5 }, ProximalTerm::Identity),
            BenchmarkId::II => (
                ScalarEnergy::Quadratic { center: 0.5 },
                ProximalTerm::L1 { weight: 0.5 },
            ),
            BenchmarkId::IPlus => (ScalarEnergy::TrigQuadratic, ProximalTerm::Identity),
            BenchmarkId::IIPlus => (ScalarEnergy::TrigQuadratic, ProximalTerm::L1 { weight: 0.5 }),
        };
        Self::new(Box::new(smooth), prox)
    }

    /// One-dimensional quadratic `(y − center)²` with identity prox; used by
    /// the large-optimum oscillation preset.
    pub fn shifted_quadratic(center: f64) -> Self {
        Self::new(
            Box::new(ScalarEnergy::Quadratic { center }),
            ProximalTerm::Identity,
        )
    }

    pub fn smooth(&self) -> &dyn SmoothEnergy {
        self.smooth.as_ref()
    }

    pub fn prox(&self) -> &ProximalTerm {
        &self.prox
    }

    pub fn dimension(&self) -> usize {
        self.smooth.dimension()
    }

    /// Full objective value: smooth energy plus the non-smooth penalty.
    pub fn objective_value(&self, y: ArrayView1<f64>) -> f64 {
        self.smooth.energy(y) + self.prox.penalty(y)
    }
}

impl std::fmt::Debug for CompositeObjective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompositeObjective")
            .field("dimension", &self.dimension())
            .field("prox", &self.prox)
            .finish()
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    /// Central finite differences of a smooth energy, step 1e-6.
    pub fn finite_difference_gradient(e: &dyn SmoothEnergy, y: &Array1<f64>) -> Array1<f64> {
        let h = 1e-6;
        let mut out = Array1::zeros(y.len());
        for i in 0..y.len() {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[i] += h;
            ym[i] -= h;
            out[i] = (e.energy(yp.view()) - e.energy(ym.view())) / (2.0 * h);
        }
        out
    }

    /// Asserts the analytic gradient against finite differences at `y`.
    pub fn assert_gradient_matches(e: &dyn SmoothEnergy, y: &Array1<f64>, rel_tol: f64) {
        let g = e.gradient(y.view());
        let fd = finite_difference_gradient(e, y);
        for i in 0..y.len() {
            let scale = g[i].abs().max(fd[i].abs()).max(1.0);
            assert!(
                (g[i] - fd[i]).abs() <= rel_tol * scale,
                "gradient mismatch at {i}: analytic {} vs fd {}",
                g[i],
                fd[i]
            );
        }
    }
}
