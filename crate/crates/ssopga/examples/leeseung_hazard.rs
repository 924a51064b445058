//! The division-by-zero hazard of the classic multiplicative step size
//! y_i/(HᵀHy)_i: one observation row outside the operator's range zeroes
//! the back-projection, the next denominator is exactly zero, and the run
//! dies — while the sigmoid multiplier never divides at all.
//!
//! Run with: cargo run --example leeseung_hazard

use ssopga::bench::hazard_instance;
use ssopga::objectives::{CompositeObjective, ProximalTerm};
use ssopga::solvers::{run, run_lee_seung, Method, SolverConfig};

fn main() {
    let problem = hazard_instance();

    for epsilon in [0.0, 1e-12] {
        let mut cfg = SolverConfig::new(Method::LeeSeung);
        cfg.epsilon = epsilon;
        cfg.max_iters = 1000;
        cfg.tolerance = 1e-300;
        let trace = run_lee_seung(&cfg, &problem, &[0.7]).unwrap();
        println!(
            "lee-seung eps={epsilon:e}: stopped '{}' after {} iterations, last iterate {}",
            trace.stop_reason,
            trace.records.len() - 1,
            trace.final_iterate().inf_norm()
        );
    }

    let mut cfg = SolverConfig::new(Method::SsoPga);
    cfg.max_iters = 1000;
    cfg.tolerance = 1e-300;
    let objective = CompositeObjective::from_linear(problem, ProximalTerm::Identity);
    let trace = run(&cfg, &objective, &[0.7]).unwrap();
    println!(
        "sigmoid multiplier: stopped '{}' after {} iterations, all finite: {}",
        trace.stop_reason,
        trace.records.len() - 1,
        trace.records.iter().all(|r| r.energy.is_finite())
    );
}
