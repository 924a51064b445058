//! Head-to-head on problem I, min (y − 1/2)²: iterations until the iterate
//! is within 1e-3 of the minimizer, across the benchmark grid of starts and
//! step sizes.
//!
//! Run with: cargo run --release --example problem1_comparison

use ssopga::objectives::{BenchmarkId, CompositeObjective};
use ssopga::solvers::{run, IterateSnapshot, Method, SolverConfig};

fn iters_to(trace: &ssopga::solvers::IterationTrace, target: f64) -> Option<usize> {
    trace.records.iter().position(|r| match &r.iterate {
        IterateSnapshot::Full(v) => (v[0] - target).abs() <= 1e-3,
        IterateSnapshot::InfNorm(_) => false,
    })
}

fn main() {
    println!(
        "{:>8} {:>10} {:>14} {:>14}",
        "y0", "rate", "SSO-PGA iters", "PGA iters"
    );
    for &lr in &[0.0005, 0.005] {
        for &y0 in &[1.0, 4.0, 8.0, 16.0] {
            let objective = CompositeObjective::benchmark(BenchmarkId::I);

            let mut sso = SolverConfig::new(Method::SsoPga);
            sso.tolerance = 1e-14;
            let sso_trace = run(&sso, &objective, &[y0]).unwrap();

            let mut pga = SolverConfig::new(Method::Pga);
            pga.learning_rate = lr;
            pga.tolerance = 1e-14;
            let pga_trace = run(&pga, &objective, &[y0]).unwrap();

            let fmt = |n: Option<usize>| n.map(|v| v.to_string()).unwrap_or("DNF".into());
            println!(
                "{y0:>8} {lr:>10} {:>14} {:>14}",
                fmt(iters_to(&sso_trace, 0.5)),
                fmt(iters_to(&pga_trace, 0.5))
            );
        }
    }
    println!("\nthe multiplicative update needs no step size, so its column");
    println!("does not depend on the rate; the additive method slows down");
    println!("linearly as the rate shrinks.");
}
