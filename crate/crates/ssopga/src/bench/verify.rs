//! Runtime verification suites behind the `verify` subcommand: randomized
//! checks of the envelope inequality, the additive-step reconstruction, and
//! certified monotone descent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::theorem2;
use crate::error::{Error, Result};
use crate::sso::SlidingSigmoid;

pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Envelope inequality |S_α(z) − 1| ≤ ((1+α)/2)|z| over 1e5 random samples,
/// α ∈ [0,5], z ∈ [−50,50]; slack tolerance −1e-12.
pub fn envelope_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = 100_000;
    let mut failures = Vec::new();
    for _ in 0..cases {
        let alpha = rng.gen_range(0.0..5.0);
        let z = rng.gen_range(-50.0..50.0);
        let op = SlidingSigmoid::new(alpha).expect("alpha in range");
        let slack = op.envelope_slack(z).expect("finite input");
        if slack < -1e-12 {
            failures.push(format!("slack {slack} at alpha={alpha}, z={z}"));
            if failures.len() > 5 {
                break;
            }
        }
    }
    SuiteReport {
        name: "envelope",
        cases,
        failures,
    }
}

/// Additive reconstruction y·S_α(z) = y − ρz to 1e-12·max(1,y), with
/// θ ∈ (0, 1/2 + 1e-12], over 1e4 random samples.
pub fn step_equivalence_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let cases = 10_000;
    let mut failures = Vec::new();
    for _ in 0..cases {
        let alpha = rng.gen_range(0.0..5.0);
        let z = rng.gen_range(-10.0..10.0);
        let y = rng.gen_range(1e-9..10.0);
        let op = SlidingSigmoid::new(alpha).expect("alpha in range");
        let eq = op.equivalent_step(y, z).expect("valid inputs");
        let theta_ok = eq.theta > 0.0 && eq.theta <= 0.5 + 1e-12;
        if !theta_ok {
            failures.push(format!("theta {} out of range at z={z}", eq.theta));
        } else {
            let lhs = y * op.apply(z).expect("finite");
            let rhs = y - eq.rho * z;
            if (lhs - rhs).abs() > 1e-12 * y.max(1.0) {
                failures.push(format!(
                    "reconstruction gap {} at y={y}, z={z}, alpha={alpha}",
                    (lhs - rhs).abs()
                ));
            }
        }
        if failures.len() > 5 {
            break;
        }
    }
    SuiteReport {
        name: "step-equivalence",
        cases,
        failures,
    }
}

/// 100 certified random runs of 1000 iterations each; the bound must hold at
/// every iterate and the recorded energies must be non-increasing.
pub fn certified_descent_suite(seed: u64) -> SuiteReport {
    let instances = theorem2::certified_instances(seed, 100);
    let cases = instances.len();
    let mut failures = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        match inst.run() {
            Ok(trace) => {
                let bad = trace.check_monotone();
                if !bad.is_empty() {
                    failures.push(format!(
                        "instance {i}: energy increased at iterations {bad:?}"
                    ));
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
        if failures.len() > 5 {
            break;
        }
    }
    SuiteReport {
        name: "certified-descent",
        cases,
        failures,
    }
}

/// Runs all suites, printing one line per suite; errors if any failed.
pub fn run_suites(seed: u64) -> Result<()> {
    let reports = [
        envelope_suite(seed),
        step_equivalence_suite(seed),
        certified_descent_suite(seed),
    ];
    let mut failed = Vec::new();
    for r in &reports {
        if r.passed() {
            println!("{}: PASS ({} cases)", r.name, r.cases);
        } else {
            println!("{}: FAIL — {}", r.name, r.failures.join("; "));
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::VerifyFailed(failed.join(", ")))
    }
}
