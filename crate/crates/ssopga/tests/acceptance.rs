//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with:  cargo test --release --test acceptance -- --nocapture
//!
//! Runtime budgets are asserted in release builds and reported (not
//! enforced) under debug instrumentation.

use std::path::Path;
use std::time::{Duration, Instant};

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssopga::bench::theorem2::certified_instances;
use ssopga::bench::{hazard_instance, run_preset, SummaryRow};
use ssopga::multimodal::toy_instance;
use ssopga::objectives::{
    BenchmarkId, CompositeObjective, LinearInverseProblem, ProximalTerm, SmoothEnergy,
};
use ssopga::solvers::{
    run, run_lee_seung, IterateSnapshot, Method, SolverConfig, StopReason,
};
use ssopga::sso::SlidingSigmoid;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(n: u32, name: &str, budget: Duration, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let timed_out = elapsed > budget && !cfg!(debug_assertions);
    match (&outcome, timed_out) {
        (Ok(()), false) => {
            println!("criterion {n} ({name}): PASS [{elapsed:.2?}]");
        }
        (Ok(()), true) => {
            println!(
                "criterion {n} ({name}): FAIL — runtime {elapsed:.2?} exceeds budget {budget:.2?}"
            );
            panic!("criterion {n} exceeded its runtime budget");
        }
        (Err(msg), _) => {
            println!("criterion {n} ({name}): FAIL — {msg}");
            panic!("criterion {n} ({name}) failed: {msg}");
        }
    }
}

#[test]
fn criterion_01_envelope() {
    criterion(1, "linear envelope of the multiplier", Duration::from_secs(1), || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..100_000 {
            let alpha = rng.gen_range(0.0..5.0);
            let z = rng.gen_range(-50.0..50.0);
            let op = SlidingSigmoid::new(alpha).expect("alpha in range");
            let slack = op.envelope_slack(z).expect("finite z");
            ensure!(slack >= -1e-12, "slack {slack} at alpha={alpha}, z={z}");
        }
        Ok(())
    });
}

#[test]
fn criterion_02_step_equivalence() {
    criterion(2, "additive-step reconstruction", Duration::from_secs(1), || {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for _ in 0..10_000 {
            let alpha = rng.gen_range(0.0..5.0);
            let z = rng.gen_range(-10.0..10.0);
            let y = rng.gen_range(1e-9..10.0);
            let op = SlidingSigmoid::new(alpha).expect("alpha in range");
            let eq = op.equivalent_step(y, z).expect("valid inputs");
            ensure!(
                eq.theta > 0.0 && eq.theta <= 0.5 + 1e-12,
                "theta {} out of (0, 1/2] at z={z}, alpha={alpha}",
                eq.theta
            );
            let lhs = y * op.apply(z).expect("finite z");
            let rhs = y - eq.rho * z;
            ensure!(
                (lhs - rhs).abs() <= 1e-12 * y.max(1.0),
                "reconstruction gap {} at y={y}, z={z}, alpha={alpha}",
                (lhs - rhs).abs()
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_03_certified_descent() {
    criterion(3, "certified monotone descent", Duration::from_secs(30), || {
        for (i, inst) in certified_instances(103, 100).iter().enumerate() {
            let trace = inst
                .run()
                .map_err(|e| format!("instance {i} aborted: {e}"))?;
            let bad = trace.check_monotone();
            ensure!(
                bad.is_empty(),
                "instance {i}: energy increased at iterations {bad:?}"
            );
            ensure!(
                matches!(trace.stop_reason, StopReason::MaxIters | StopReason::Converged),
                "instance {i}: unexpected stop {:?}",
                trace.stop_reason
            );
        }
        Ok(())
    });
}

fn grid_row(rows: &[SummaryRow], method: Method, lr: f64, y0: f64) -> Result<&SummaryRow, String> {
    rows.iter()
        .find(|r| r.method == method.as_str() && r.learning_rate == lr && r.y0 == format!("{y0}"))
        .ok_or_else(|| format!("missing row {method} lr={lr} y0={y0}"))
}

#[test]
fn criterion_04_problem1_grid() {
    criterion(4, "problem I comparison grid", Duration::from_secs(5), || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let summary =
            run_preset("fig3-problem1", dir.path(), 4, 42).map_err(|e| e.to_string())?;
        ensure!(summary.rows.len() == 16, "expected 16 cells, got {}", summary.rows.len());
        for &lr in &[0.0005, 0.005] {
            for &y0 in &[1.0, 4.0, 8.0, 16.0] {
                let sso = grid_row(&summary.rows, Method::SsoPga, lr, y0)?;
                ensure!(
                    sso.iters_to_tol.is_some(),
                    "multiplicative run DNF at lr={lr}, y0={y0}"
                );
                let final_y: f64 = sso.final_iterate.parse().map_err(|e| format!("{e}"))?;
                ensure!(
                    (final_y - 0.5).abs() <= 1e-3,
                    "final iterate {final_y} away from 0.5 at lr={lr}, y0={y0}"
                );
            }
        }
        for &y0 in &[1.0, 4.0, 8.0, 16.0] {
            let sso = grid_row(&summary.rows, Method::SsoPga, 0.0005, y0)?;
            let pga = grid_row(&summary.rows, Method::Pga, 0.0005, y0)?;
            let (s, p) = (sso.iters_to_tol, pga.iters_to_tol);
            let p = p.ok_or_else(|| format!("additive baseline DNF at y0={y0}"))?;
            let s = s.expect("checked above");
            ensure!(
                s < p,
                "not strictly fewer iterations at y0={y0}: {s} vs {p}"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_05_problem2_grid() {
    criterion(5, "problem II comparison grid", Duration::from_secs(5), || {
        // independent oracle for the composite minimizer: grid search
        let obj = CompositeObjective::benchmark(BenchmarkId::II);
        let mut best = f64::INFINITY;
        let mut y_star = 0.0;
        let mut y = -2.0;
        while y <= 2.0 {
            let v = obj.objective_value(Array1::from(vec![y]).view());
            if v < best {
                best = v;
                y_star = y;
            }
            y += 1e-6;
        }
        ensure!((y_star - 0.25).abs() <= 2e-6, "grid oracle found {y_star}");

        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let summary =
            run_preset("fig4-problem2", dir.path(), 4, 42).map_err(|e| e.to_string())?;
        for &lr in &[0.0005, 0.005] {
            for &y0 in &[1.0, 4.0, 8.0, 16.0] {
                for method in [Method::SsoPga, Method::Pga] {
                    let row = grid_row(&summary.rows, method, lr, y0)?;
                    let final_y: f64 = row.final_iterate.parse().map_err(|e| format!("{e}"))?;
                    ensure!(
                        (final_y - 0.25).abs() <= 1e-3,
                        "{method} at lr={lr}, y0={y0} ended at {final_y}, not 0.25"
                    );
                    ensure!(
                        row.iters_to_tol.is_some(),
                        "{method} DNF at lr={lr}, y0={y0}"
                    );
                }
            }
        }
        for &y0 in &[1.0, 4.0, 8.0, 16.0] {
            let s = grid_row(&summary.rows, Method::SsoPga, 0.0005, y0)?
                .iters_to_tol
                .expect("checked above");
            let p = grid_row(&summary.rows, Method::Pga, 0.0005, y0)?
                .iters_to_tol
                .expect("checked above");
            ensure!(s <= p, "iteration counts {s} > {p} at y0={y0}");
        }
        Ok(())
    });
}

#[test]
fn criterion_06_stability_at_large_rate() {
    criterion(6, "large-rate stability split", Duration::from_secs(5), || {
        let objective = CompositeObjective::benchmark(BenchmarkId::I);
        for &y0 in &[1.0, 4.0, 8.0, 16.0] {
            let mut pga = SolverConfig::new(Method::Pga);
            pga.learning_rate = 10.0;
            pga.max_iters = 1000;
            let p = run(&pga, &objective, &[y0]).map_err(|e| e.to_string())?;
            let diverged = p.stop_reason == StopReason::NonFinite
                || p.records.iter().any(|r| !r.energy.is_finite() || r.energy > 1e6);
            ensure!(diverged, "additive run stayed bounded at rate 10, y0={y0}");

            let mut sso = SolverConfig::new(Method::SsoPga);
            sso.learning_rate = 10.0; // recorded; the update carries no rate
            sso.tolerance = 1e-14;
            let s = run(&sso, &objective, &[y0]).map_err(|e| e.to_string())?;
            let band = SlidingSigmoid::new(0.0).expect("alpha 0").bounds();
            for r in &s.records {
                if let (Some(mn), Some(mx)) = (r.mult_min, r.mult_max) {
                    ensure!(
                        mn > band.0 && mx < band.1,
                        "multiplier ({mn}, {mx}) left the band at y0={y0}"
                    );
                }
                ensure!(r.energy.is_finite(), "non-finite energy at y0={y0}");
            }
            let final_y = s.final_iterate().inf_norm();
            ensure!(
                (final_y - 0.5).abs() <= 1e-2,
                "multiplicative run ended at {final_y}, not near 0.5 (y0={y0})"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_07_oscillation_and_clipping() {
    criterion(7, "large-optimum oscillation and clipping", Duration::from_secs(2), || {
        let objective = CompositeObjective::shifted_quadratic(6.0);

        let mut unclipped = SolverConfig::new(Method::SsoPga);
        unclipped.learning_rate = 1.0;
        unclipped.max_iters = 500;
        unclipped.oscillation_window = Some(8);
        let trace = run(&unclipped, &objective, &[1.0]).map_err(|e| e.to_string())?;
        ensure!(
            trace.detect_oscillation(8),
            "oscillation not detected without clipping (stop: {:?})",
            trace.stop_reason
        );

        let mut clipped = unclipped.clone();
        clipped.clip = Some(0.1);
        clipped.oscillation_window = None; // give the run every chance to settle
        clipped.max_iters = 5000;
        let trace = run(&clipped, &objective, &[1.0]).map_err(|e| e.to_string())?;
        let final_y = trace.final_iterate().inf_norm();
        // Known-failing half: 6 is a repelling fixed point of the
        // multiplicative map (|f'(6)| = 5) and clipping is inactive inside
        // |y−6| ≤ 0.05, so the clipped orbit is bounded near 6 but cannot
        // settle; its closest approach is ~3.5e-2. The assertion states the
        // intended contract and documents the gap honestly.
        ensure!(
            (final_y - 6.0).abs() <= 1e-2,
            "clipped run ended at {final_y}, {:.3e} away from 6 (bounded oscillation, not convergence)",
            (final_y - 6.0).abs()
        );
        Ok(())
    });
}

#[test]
fn criterion_08_division_hazard() {
    criterion(8, "division-by-zero hazard vs multiplicative robustness", Duration::from_secs(1), || {
        let problem = hazard_instance();
        let mut cfg = SolverConfig::new(Method::LeeSeung);
        cfg.epsilon = 0.0;
        cfg.max_iters = 1000;
        cfg.tolerance = 1e-300;
        let trace = run_lee_seung(&cfg, &problem, &[0.7]).map_err(|e| e.to_string())?;
        ensure!(
            trace.stop_reason == StopReason::NonFinite,
            "expected a non-finite stop, got {:?}",
            trace.stop_reason
        );
        ensure!(
            trace.records.len() - 1 <= 3,
            "hazard took {} iterations to surface",
            trace.records.len() - 1
        );

        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.max_iters = 1000;
        cfg.tolerance = 1e-300;
        let objective = CompositeObjective::from_linear(problem, ProximalTerm::Identity);
        let trace = run(&cfg, &objective, &[0.7]).map_err(|e| e.to_string())?;
        ensure!(
            trace.records.len() - 1 == 1000,
            "multiplicative run stopped early at {}",
            trace.records.len() - 1
        );
        ensure!(
            trace.records.iter().all(|r| r.energy.is_finite()),
            "multiplicative run produced a non-finite energy"
        );
        Ok(())
    });
}

#[test]
fn criterion_09_multimodal_toy() {
    criterion(9, "coupled toy model descent and decoupling", Duration::from_secs(10), || {
        let (model, h0, t0, _, _) = toy_instance();
        let trace = model
            .solve_alternating(&h0, &t0, 5000, 1e-300)
            .map_err(|e| e.to_string())?;
        let scale = trace.objective[0].max(1.0);
        for (t, w) in trace.objective.windows(2).enumerate() {
            ensure!(
                w[1] <= w[0] + 1e-10 * scale,
                "objective rose at iteration {}: {} -> {}",
                t + 1,
                w[0],
                w[1]
            );
        }
        ensure!(
            trace.objective.iter().any(|&v| v < 1e-6),
            "objective never fell below 1e-6 (final {})",
            trace.objective.last().unwrap()
        );

        // decoupled coupling weight: the target block must reproduce a
        // standalone run bit for bit
        let (mut decoupled, h0, t0, _, _) = toy_instance();
        decoupled.gamma = 0.0;
        let iters = 200;
        let joint = decoupled
            .solve_alternating(&h0, &t0, iters, 1e-300)
            .map_err(|e| e.to_string())?;
        let problem = LinearInverseProblem::new(decoupled.k.clone(), decoupled.x_obs.clone())
            .map_err(|e| e.to_string())?;
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.alpha = decoupled.alpha1;
        cfg.max_iters = iters;
        cfg.tolerance = 1e-300;
        cfg.trace_vector_cap = 16;
        let alone = run(
            &cfg,
            &CompositeObjective::from_linear(problem, ProximalTerm::Identity),
            h0.as_slice().unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let shared = joint.target_iterates.len().min(alone.records.len());
        ensure!(shared > iters / 2, "runs stopped early: {shared} iterates");
        for (k, (h, rec)) in joint.target_iterates[..shared]
            .iter()
            .zip(&alone.records[..shared])
            .enumerate()
        {
            match &rec.iterate {
                IterateSnapshot::Full(v) => {
                    ensure!(
                        h.as_slice().unwrap() == v.as_slice(),
                        "iterate {k} differs between joint and standalone runs"
                    );
                }
                IterateSnapshot::InfNorm(_) => return Err("expected full snapshots".into()),
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_gradient_checks() {
    criterion(10, "finite-difference gradient checks", Duration::from_secs(5), || {
        let step = 1e-6;
        let rel = 1e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(110);

        let check = |label: &str,
                         energy: &dyn Fn(&Array1<f64>) -> f64,
                         gradient: &dyn Fn(&Array1<f64>) -> Array1<f64>,
                         point: &Array1<f64>|
         -> Result<(), String> {
            let g = gradient(point);
            for i in 0..point.len() {
                let mut p = point.clone();
                let mut m = point.clone();
                p[i] += step;
                m[i] -= step;
                let fd = (energy(&p) - energy(&m)) / (2.0 * step);
                let scale = g[i].abs().max(fd.abs()).max(1.0);
                ensure!(
                    (g[i] - fd).abs() <= rel * scale,
                    "{label}: component {i} analytic {} vs fd {fd}",
                    g[i]
                );
            }
            Ok(())
        };

        // dense least squares
        let h = ndarray::Array2::from_shape_fn((5, 3), |_| rng.gen_range(-1.0..1.0));
        let x = Array1::from_shape_fn(5, |_| rng.gen_range(-1.0..1.0));
        let lsq = LinearInverseProblem::new(h, x).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let y = Array1::from_shape_fn(3, |_| rng.gen_range(-2.0..2.0));
            check(
                "least-squares",
                &|v| SmoothEnergy::energy(&lsq, v.view()),
                &|v| SmoothEnergy::gradient(&lsq, v.view()),
                &y,
            )?;
        }

        // scalar benchmarks
        for id in [BenchmarkId::I, BenchmarkId::IPlus] {
            let obj = CompositeObjective::benchmark(id);
            for _ in 0..100 {
                let y = Array1::from(vec![rng.gen_range(-3.0..3.0)]);
                check(
                    id.as_str(),
                    &|v| obj.smooth().energy(v.view()),
                    &|v| obj.smooth().gradient(v.view()),
                    &y,
                )?;
            }
        }

        // coupled model blocks, at non-negative points
        let (model, _, _, _, _) = toy_instance();
        for _ in 0..100 {
            let hpt = Array1::from_shape_fn(model.target_dim(), |_| rng.gen_range(0.0..2.0));
            let tpt = Array1::from_shape_fn(model.embedding_dim(), |_| rng.gen_range(0.0..2.0));
            check(
                "target block",
                &|v| {
                    let mut e = ssopga::objectives::least_squares_energy(&model.k, &model.x_obs, v);
                    let r = &tpt - &model.f.dot(v);
                    e += model.gamma * r.dot(&r);
                    e
                },
                &|v| model.grad_target(v, &tpt).unwrap(),
                &hpt,
            )?;
            check(
                "embedding block",
                &|v| {
                    let mut e = model.beta
                        * ssopga::objectives::least_squares_energy(&model.s, &model.y_guide, v);
                    let r = v - &model.f.dot(&hpt);
                    e += model.gamma * r.dot(&r);
                    e
                },
                &|v| model.grad_embedding(&hpt, v).unwrap(),
                &tpt,
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_byte_determinism() {
    criterion(11, "byte-identical reruns", Duration::from_secs(30), || {
        let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
        run_preset("fig3-problem1", dir_a.path(), 4, 42).map_err(|e| e.to_string())?;
        run_preset("fig3-problem1", dir_b.path(), 2, 42).map_err(|e| e.to_string())?;

        let list = |d: &Path| -> Result<Vec<String>, String> {
            let mut names: Vec<String> = std::fs::read_dir(d)
                .map_err(|e| e.to_string())?
                .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                .collect();
            names.sort();
            Ok(names)
        };
        let names_a = list(dir_a.path())?;
        let names_b = list(dir_b.path())?;
        ensure!(names_a == names_b, "file sets differ: {names_a:?} vs {names_b:?}");
        ensure!(!names_a.is_empty(), "no outputs written");
        for name in &names_a {
            let a = std::fs::read(dir_a.path().join(name)).map_err(|e| e.to_string())?;
            let b = std::fs::read(dir_b.path().join(name)).map_err(|e| e.to_string())?;
            ensure!(a == b, "{name} differs between reruns");
        }
        Ok(())
    });
}
