//! Write a small comparison grid to disk and render the traces into a
//! two-panel SVG (iterate and energy vs iteration).
//!
//! Run with: cargo run --example plot_svg
//! Output lands in ./plot-example/

use std::path::PathBuf;

use ssopga::bench::plot::plot_traces;
use ssopga::objectives::{BenchmarkId, CompositeObjective};
use ssopga::solvers::{run, Method, SolverConfig};

fn main() {
    let dir = PathBuf::from("plot-example");
    std::fs::create_dir_all(&dir).unwrap();

    let mut paths = Vec::new();
    for (name, method, lr) in [
        ("sso", Method::SsoPga, 1.0),
        ("pga-fast", Method::Pga, 0.05),
        ("pga-slow", Method::Pga, 0.005),
    ] {
        let mut cfg = SolverConfig::new(method);
        cfg.learning_rate = lr;
        cfg.max_iters = 400;
        cfg.tolerance = 1e-12;
        let trace = run(&cfg, &CompositeObjective::benchmark(BenchmarkId::I), &[8.0]).unwrap();
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, trace.to_csv()).unwrap();
        paths.push(path);
    }

    let out = dir.join("comparison.svg");
    plot_traces(&paths, &out).unwrap();
    println!("wrote {} traces and {}", paths.len(), out.display());
}
