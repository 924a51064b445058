//! Random certified-descent instances.
//!
//! Each instance draws a dense non-negative operator (entries uniform on
//! [0,1]) at a random size up to 50×30, rescales it to spectral norm 1/2 so
//! the sufficient bound `2/(κ‖H‖²) − 1` is satisfiable with a wide margin,
//! and forward-simulates a consistent observation from a hidden solution in
//! (0,1]^m. The run re-validates the bound at every iterate and errors on
//! violation; monotone descent is then checked on the recorded energies.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::objectives::{spectral_norm, LinearInverseProblem};
use crate::solvers::{run_certified, IterationTrace, Method, SolverConfig};

pub struct CertifiedInstance {
    pub problem: LinearInverseProblem,
    pub y0: Vec<f64>,
    /// Half the sufficient bound at the initial state, capped at 1.
    ///
    /// The bound is state-dependent and transients can overshoot the start
    /// norm (observed up to κ ≈ 2.2 across thousands of instances, since a
    /// wide band multiplies a coordinate by up to 2σ(α)+1 per step); the cap
    /// keeps α below the bound at every reachable state with a wide margin.
    pub alpha: f64,
    pub max_iters: usize,
}

impl CertifiedInstance {
    pub fn run(&self) -> Result<IterationTrace> {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.alpha = self.alpha;
        cfg.max_iters = self.max_iters;
        cfg.tolerance = 1e-300; // effectively run the full budget
        cfg.trace_vector_cap = 0; // store norms, the energies carry the check
        run_certified(&cfg, &self.problem, &self.y0)
    }
}

/// Deterministic batch of certified instances.
pub fn certified_instances(seed: u64, count: usize) -> Vec<CertifiedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=50);
            let m = rng.gen_range(2..=30);
            let mut h = Array2::from_shape_fn((n, m), |_| rng.gen::<f64>());
            let norm = spectral_norm(&h.view());
            h.mapv_inplace(|v| v * (0.5 / norm));
            let y_star = Array1::from_shape_fn(m, |_| 0.001 + 0.999 * rng.gen::<f64>());
            let x = h.dot(&y_star);
            let problem = LinearInverseProblem::new(h, x).expect("generated instance is valid");
            let y0: Vec<f64> = (0..m).map(|_| 0.001 + 0.999 * rng.gen::<f64>()).collect();
            let bound = problem
                .alpha_upper_bound(&y0)
                .expect("positive start state");
            CertifiedInstance {
                problem,
                y0,
                alpha: (0.5 * bound).clamp(0.0, 1.0),
                max_iters: 1000,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_deterministic_and_in_range() {
        let a = certified_instances(7, 3);
        let b = certified_instances(7, 3);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.problem.operator(), y.problem.operator());
            assert_eq!(x.y0, y.y0);
            assert_eq!(x.alpha, y.alpha);
        }
        for inst in &a {
            let (n, m) = inst.problem.operator().dim();
            assert!((2..=50).contains(&n) && (2..=30).contains(&m));
            assert!((inst.problem.spectral_norm() - 0.5).abs() < 1e-6);
            assert!(inst.alpha >= 0.0);
        }
    }

    #[test]
    fn certified_run_is_monotone() {
        for inst in certified_instances(3, 5) {
            let trace = inst.run().expect("bound must hold along the run");
            assert!(trace.check_monotone().is_empty());
        }
    }
}
