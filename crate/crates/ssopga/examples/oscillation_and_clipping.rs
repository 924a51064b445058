//! The known failure mode of the multiplicative update: optima well above 1
//! make the equivalent step size y·θ too large, so min (y − 6)² oscillates
//! instead of converging. Gradient clipping to [−0.1, 0.1] tames the wild
//! transient and bounds the orbit near the optimum, but the fixed point
//! itself stays repelling (|f'(6)| = 5), so the clipped run still hovers a
//! few tenths away rather than settling.
//!
//! Run with: cargo run --example oscillation_and_clipping

use ssopga::objectives::CompositeObjective;
use ssopga::solvers::{run, Method, SolverConfig};

fn main() {
    let objective = CompositeObjective::shifted_quadratic(6.0);

    for clip in [None, Some(0.1)] {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.clip = clip;
        cfg.max_iters = 500;
        cfg.oscillation_window = Some(8);
        let trace = run(&cfg, &objective, &[1.0]).unwrap();
        let tail: Vec<String> = trace
            .records
            .iter()
            .rev()
            .take(6)
            .map(|r| format!("{:.3}", r.iterate.inf_norm()))
            .collect();
        println!(
            "clip {:?}: stop '{}' at iteration {}, oscillating: {}, tail: {}",
            clip,
            trace.stop_reason,
            trace.records.len() - 1,
            trace.detect_oscillation(8),
            tail.join(" <- ")
        );
    }

    // the same objective with the optimum inside (0, 1] converges cleanly
    let objective = CompositeObjective::shifted_quadratic(0.8);
    let cfg = SolverConfig::new(Method::SsoPga);
    let trace = run(&cfg, &objective, &[1.0]).unwrap();
    println!(
        "optimum 0.8 for contrast: '{}' after {} iterations at {:.6}",
        trace.stop_reason,
        trace.records.len() - 1,
        trace.final_iterate().inf_norm()
    );
}
