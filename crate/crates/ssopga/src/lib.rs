//! Multiplicative proximal gradient descent for non-negative inverse
//! problems.
//!
//! The core idea: replace the additive gradient step `y − ρ∇E(y)` with the
//! element-wise multiplicative step `y ⊙ S_α(∇E(y))`, where [`sso::SlidingSigmoid`]
//! is a bounded, strictly decreasing sigmoid-based multiplier that equals 1
//! at zero gradient. Iterates started non-negative stay non-negative, every
//! step is confined to the multiplier band `(2σ(α)−1, 2σ(α)+1)`, and each
//! multiplicative step is provably one additive step with a per-coordinate
//! step size `ρ_i = y_i·θ_i`, `θ_i ∈ (0, 1/2]`.
//!
//! The crate ships:
//!
//! * [`sso`] — the multiplier, its band, derivative, linear envelope, and
//!   the additive-step reconstruction;
//! * [`objectives`] — composite objectives (smooth energy + optional ℓ1
//!   term with its prox), dense linear inverse problems, spectral norm and
//!   Lipschitz constants, the sufficient sliding-parameter bound
//!   `2/(κ‖H‖²) − 1`, and four 1-D benchmark problems;
//! * [`solvers`] — the multiplicative solver, classic PGA, the Lee–Seung
//!   multiplicative baseline (with its division-by-zero hazard observable),
//!   iteration traces with CSV export, monotone-descent certification, and
//!   oscillation detection;
//! * [`multimodal`] — a coupled two-block restoration model solved by
//!   alternating multiplicative updates;
//! * [`bench`] — named experiment presets, grid sweeps, summary tables,
//!   deterministic SVG plots, and the runtime verification suites;
//! * [`cli`] — the `ssopga` command-line entry point built on all of the
//!   above.
//!
//! ```
//! use ssopga::objectives::{BenchmarkId, CompositeObjective};
//! use ssopga::solvers::{run, Method, SolverConfig};
//!
//! // minimize (y − 1/2)² + ½|y| multiplicatively from y0 = 4
//! let objective = CompositeObjective::benchmark(BenchmarkId::II);
//! let mut config = SolverConfig::new(Method::SsoPga);
//! config.alpha = 1.0;
//! config.tolerance = 1e-10;
//! let trace = run(&config, &objective, &[4.0]).unwrap();
//! let y = trace.final_iterate().inf_norm();
//! assert!((y - 0.25).abs() < 1e-3);
//! ```

pub mod bench;
pub mod cli;
mod error;
pub mod multimodal;
pub mod objectives;
pub mod solvers;
pub mod sso;

pub use error::{Error, Result};
