//! Step-size robustness on problem I: the additive method diverges once the
//! rate crosses 1/L and crawls when it is tiny; the multiplicative update is
//! the same run at every rate because it has none.
//!
//! Run with: cargo run --release --example stability_sweep

use ssopga::objectives::{BenchmarkId, CompositeObjective};
use ssopga::solvers::{run, Method, SolverConfig, StopReason};

fn main() {
    let rates = [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 5e-1, 1.0, 10.0];
    println!("{:>10} {:>26} {:>26}", "rate", "PGA", "SSO-PGA");
    for &lr in &rates {
        let objective = CompositeObjective::benchmark(BenchmarkId::I);

        let mut pga = SolverConfig::new(Method::Pga);
        pga.learning_rate = lr;
        pga.max_iters = 50_000;
        let p = run(&pga, &objective, &[4.0]).unwrap();
        let p_desc = match p.stop_reason {
            StopReason::NonFinite => "diverged (non-finite)".to_string(),
            _ if p.final_energy() > 1e6 => "diverged (energy > 1e6)".to_string(),
            _ => format!("y = {:.6} ({} iters)", p.final_iterate().inf_norm(), p.records.len() - 1),
        };

        let mut sso = SolverConfig::new(Method::SsoPga);
        sso.learning_rate = lr; // recorded only; the update is rate-free
        let s = run(&sso, &objective, &[4.0]).unwrap();
        let s_desc = format!(
            "y = {:.6} ({} iters)",
            s.final_iterate().inf_norm(),
            s.records.len() - 1
        );

        println!("{lr:>10} {p_desc:>26} {s_desc:>26}");
    }
}
