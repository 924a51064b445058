//! Named experiment presets, parameter sweeps, and comparison summaries.
//!
//! Every preset runs a deterministic grid of solver configurations, writes
//! one trace CSV per grid cell plus `summary.csv` and `summary.json`, and
//! returns the summary. Identical inputs produce byte-identical outputs;
//! grid cells are independent and may run on several threads.

pub mod plot;
pub mod theorem2;
pub mod verify;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multimodal;
use crate::objectives::{BenchmarkId, CompositeObjective, LinearInverseProblem, ProximalTerm};
use crate::solvers::{
    fmt_f64, run, run_lee_seung, IterateSnapshot, IterationRecord, IterationTrace, Method,
    SolverConfig, StopReason,
};

/// Summary convergence rule: first iteration with ‖y − y*‖∞ at or below this.
pub const SUMMARY_TOL: f64 = 1e-3;
/// Shared per-cell iteration budget.
pub const CELL_BUDGET: usize = 50_000;
/// Stopping tolerance for grid runs, small enough that no run stops before
/// crossing the summary tolerance.
const RUN_TOL: f64 = 1e-14;

const FIG_LRS: &[f64] = &[0.0005, 0.005];
const APPENDIX_LRS: &[f64] = &[1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 5e-1, 1.0, 10.0];
const INITS: &[f64] = &[1.0, 4.0, 8.0, 16.0];

#[derive(Debug, Clone, Copy)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

/// The built-in presets, in listing order.
pub const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "fig3-problem1",
        description: "problem I comparison grid: inits {1,4,8,16}, rates {0.0005, 0.005}",
    },
    PresetInfo {
        name: "fig4-problem2",
        description: "problem II (l1 composite) comparison grid, same inits and rates",
    },
    PresetInfo {
        name: "appendix-p1",
        description: "problem I wide rate sweep: 1e-5 .. 10",
    },
    PresetInfo {
        name: "appendix-p1plus",
        description: "non-convex problem I+ wide rate sweep",
    },
    PresetInfo {
        name: "appendix-p2",
        description: "problem II wide rate sweep",
    },
    PresetInfo {
        name: "appendix-p2plus",
        description: "non-convex problem II+ wide rate sweep",
    },
    PresetInfo {
        name: "limitation-min6",
        description: "large-optimum instability: (y-6)^2, with and without gradient clipping",
    },
    PresetInfo {
        name: "theorem2-random",
        description: "100 random certified runs with the per-iteration sliding-parameter bound",
    },
    PresetInfo {
        name: "leeseung-hazard",
        description: "division-by-zero hazard instance: Lee-Seung vs the multiplicative solver",
    },
    PresetInfo {
        name: "multimodal-toy",
        description: "coupled two-block toy model solved by alternating updates",
    },
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

/// One grid cell result as reported in `summary.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub alpha: f64,
    pub learning_rate: f64,
    pub clip: Option<f64>,
    pub y0: String,
    /// First iteration within [`SUMMARY_TOL`] of the reference minimizer;
    /// `None` marks a DNF cell.
    pub iters_to_tol: Option<usize>,
    pub final_energy: f64,
    pub final_iterate: String,
    pub stop_reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSummary {
    pub preset: String,
    pub rows: Vec<SummaryRow>,
}

impl ComparisonSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "method,alpha,learning_rate,clip,y0,iters_to_tol,final_energy,final_iterate,stop_reason\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.method,
                r.alpha,
                r.learning_rate,
                r.clip.map(|c| c.to_string()).unwrap_or_default(),
                r.y0,
                r.iters_to_tol
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "DNF".to_string()),
                fmt_f64(r.final_energy),
                r.final_iterate,
                r.stop_reason
            ));
        }
        out
    }

    /// Row lookup by (method, learning rate, y0 label).
    pub fn row(&self, method: Method, lr: f64, y0: &str) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.method == method.as_str() && r.learning_rate == lr && r.y0 == y0)
    }
}

/// Runs a named preset, writing traces and summaries under `out_dir`.
pub fn run_preset(name: &str, out_dir: &Path, jobs: usize, seed: u64) -> Result<ComparisonSummary> {
    let rows = match name {
        "fig3-problem1" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::I),
            0.0,
            FIG_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "fig4-problem2" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::II),
            1.0,
            FIG_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "appendix-p1" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::I),
            0.0,
            APPENDIX_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "appendix-p1plus" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::IPlus),
            0.0,
            APPENDIX_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "appendix-p2" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::II),
            1.0,
            APPENDIX_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "appendix-p2plus" => scalar_grid(
            ScalarProblem::Benchmark(BenchmarkId::IIPlus),
            1.0,
            APPENDIX_LRS,
            INITS,
            out_dir,
            jobs,
        )?,
        "limitation-min6" => limitation_grid(out_dir)?,
        "theorem2-random" => theorem2_grid(out_dir, jobs, seed)?,
        "leeseung-hazard" => hazard_grid(out_dir)?,
        "multimodal-toy" => multimodal_grid(out_dir)?,
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    let summary = ComparisonSummary {
        preset: name.to_string(),
        rows,
    };
    write_atomic(&out_dir.join("summary.csv"), summary.to_csv().as_bytes())?;
    write_atomic(
        &out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;
    Ok(summary)
}

enum ScalarProblem {
    Benchmark(BenchmarkId),
    ShiftedQuadratic(f64),
}

impl ScalarProblem {
    fn build(&self) -> CompositeObjective {
        match self {
            ScalarProblem::Benchmark(id) => CompositeObjective::benchmark(*id),
            ScalarProblem::ShiftedQuadratic(c) => CompositeObjective::shifted_quadratic(*c),
        }
    }

    fn minimizer(&self) -> f64 {
        match self {
            ScalarProblem::Benchmark(id) => id.minimizer(),
            ScalarProblem::ShiftedQuadratic(c) => *c,
        }
    }
}

struct ScalarCell {
    method: Method,
    alpha: f64,
    lr: f64,
    clip: Option<f64>,
    y0: f64,
    oscillation_window: Option<usize>,
}

impl ScalarCell {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::new(self.method);
        cfg.alpha = self.alpha;
        cfg.learning_rate = self.lr;
        cfg.clip = self.clip;
        cfg.max_iters = CELL_BUDGET;
        cfg.tolerance = RUN_TOL;
        cfg.oscillation_window = self.oscillation_window;
        cfg
    }

    fn file_name(&self) -> String {
        let clip = self
            .clip
            .map(|c| format!("-clip{c}"))
            .unwrap_or_default();
        format!("{}-lr{}{}-y0_{}.csv", self.method, self.lr, clip, self.y0)
    }
}

fn scalar_grid(
    problem: ScalarProblem,
    sso_alpha: f64,
    lrs: &[f64],
    inits: &[f64],
    out_dir: &Path,
    jobs: usize,
) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let mut cells = Vec::new();
    for method in [Method::SsoPga, Method::Pga] {
        for &lr in lrs {
            for &y0 in inits {
                cells.push(ScalarCell {
                    method,
                    alpha: if method == Method::SsoPga { sso_alpha } else { 0.0 },
                    lr,
                    clip: None,
                    y0,
                    oscillation_window: None,
                });
            }
        }
    }
    let y_star = problem.minimizer();
    run_scalar_cells(&problem, cells, y_star, out_dir, jobs)
}

fn run_scalar_cells(
    problem: &ScalarProblem,
    cells: Vec<ScalarCell>,
    y_star: f64,
    out_dir: &Path,
    jobs: usize,
) -> Result<Vec<SummaryRow>> {
    run_parallel(cells.len(), jobs, |i| {
        let cell = &cells[i];
        let objective = problem.build();
        let trace = run(&cell.config(), &objective, &[cell.y0])?;
        write_atomic(&out_dir.join(cell.file_name()), trace.to_csv().as_bytes())?;
        Ok(summary_row(
            cell.method,
            cell.alpha,
            cell.lr,
            cell.clip,
            format!("{}", cell.y0),
            &trace,
            Some(y_star),
        ))
    })
}

fn limitation_grid(out_dir: &Path) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let problem = ScalarProblem::ShiftedQuadratic(6.0);
    let cells = vec![
        ScalarCell {
            method: Method::SsoPga,
            alpha: 0.0,
            lr: 1.0,
            clip: None,
            y0: 1.0,
            oscillation_window: Some(8),
        },
        ScalarCell {
            method: Method::SsoPga,
            alpha: 0.0,
            lr: 1.0,
            clip: Some(0.1),
            y0: 1.0,
            oscillation_window: Some(8),
        },
        ScalarCell {
            method: Method::Pga,
            alpha: 0.0,
            lr: 0.005,
            clip: None,
            y0: 1.0,
            oscillation_window: None,
        },
    ];
    run_scalar_cells(&problem, cells, 6.0, out_dir, 1)
}

fn theorem2_grid(out_dir: &Path, jobs: usize, seed: u64) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let instances = theorem2::certified_instances(seed, 100);
    run_parallel(instances.len(), jobs, |i| {
        let inst = &instances[i];
        let trace = inst.run()?;
        let violations = trace.check_monotone();
        write_atomic(
            &out_dir.join(format!("inst_{i:03}.csv")),
            trace.to_csv().as_bytes(),
        )?;
        let mut row = summary_row(
            Method::SsoPga,
            inst.alpha,
            1.0,
            None,
            format!("inst_{i:03}"),
            &trace,
            None,
        );
        if !violations.is_empty() {
            row.stop_reason = format!("{}+monotone_violation", row.stop_reason);
        }
        Ok(row)
    })
}

fn hazard_grid(out_dir: &Path) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let problem = hazard_instance();
    let mut rows = Vec::new();

    for (label, epsilon) in [("eps0", 0.0), ("eps1e-12", 1e-12)] {
        let mut cfg = SolverConfig::new(Method::LeeSeung);
        cfg.epsilon = epsilon;
        cfg.max_iters = 1000;
        cfg.tolerance = 1e-300;
        let trace = run_lee_seung(&cfg, &problem, &[0.7])?;
        write_atomic(
            &out_dir.join(format!("LEE_SEUNG-{label}.csv")),
            trace.to_csv().as_bytes(),
        )?;
        rows.push(summary_row(
            Method::LeeSeung,
            0.0,
            1.0,
            None,
            format!("0.7/{label}"),
            &trace,
            None,
        ));
    }

    let mut cfg = SolverConfig::new(Method::SsoPga);
    cfg.max_iters = 1000;
    cfg.tolerance = 1e-300;
    let objective = CompositeObjective::from_linear(problem, ProximalTerm::Identity);
    let trace = run(&cfg, &objective, &[0.7])?;
    write_atomic(&out_dir.join("SSO_PGA.csv"), trace.to_csv().as_bytes())?;
    rows.push(summary_row(
        Method::SsoPga,
        0.0,
        1.0,
        None,
        "0.7".into(),
        &trace,
        None,
    ));
    Ok(rows)
}

/// The division-by-zero hazard instance: the second observation row is
/// outside the operator's range, so the back-projected numerator vanishes
/// and the next denominator is exactly zero.
pub fn hazard_instance() -> LinearInverseProblem {
    LinearInverseProblem::new(
        Array2::from_shape_vec((2, 1), vec![1.0, 0.0]).expect("static shape"),
        Array1::from(vec![0.0, 1.0]),
    )
    .expect("static instance is valid")
}

fn multimodal_grid(out_dir: &Path) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let (model, h0, t0, h_star, t_star) = multimodal::toy_instance();
    let trace = model.solve_alternating(&h0, &t0, 5000, RUN_TOL)?;

    // render the alternating run in the shared trace schema
    let records: Vec<IterationRecord> = trace
        .objective
        .iter()
        .enumerate()
        .map(|(k, &obj)| {
            let h = &trace.target_iterates[k];
            let t = &trace.embedding_iterates[k];
            let grad_inf = model
                .grad_target(h, t)
                .map(|g| g.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
                .unwrap_or(f64::NAN);
            let norm = h
                .iter()
                .chain(t.iter())
                .fold(0.0_f64, |a, v| a.max(v.abs()));
            IterationRecord {
                iter: k,
                iterate: IterateSnapshot::InfNorm(norm),
                energy: obj,
                grad_inf_norm: grad_inf,
                mult_min: None,
                mult_max: None,
            }
        })
        .collect();
    let as_trace = IterationTrace {
        records,
        stop_reason: trace.stop_reason,
        dimension: model.target_dim() + model.embedding_dim(),
        tolerance: RUN_TOL,
    };
    write_atomic(&out_dir.join("toy.csv"), as_trace.to_csv().as_bytes())?;

    let iters_to_tol = trace
        .target_iterates
        .iter()
        .zip(&trace.embedding_iterates)
        .position(|(h, t)| {
            let dh = h
                .iter()
                .zip(h_star.iter())
                .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
            let dt = t
                .iter()
                .zip(t_star.iter())
                .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
            dh.max(dt) <= SUMMARY_TOL
        });
    Ok(vec![SummaryRow {
        method: Method::SsoPga.as_str().to_string(),
        alpha: model.alpha1,
        learning_rate: 1.0,
        clip: None,
        y0: "toy".into(),
        iters_to_tol,
        final_energy: *trace.objective.last().expect("non-empty"),
        final_iterate: fmt_f64(
            as_trace
                .records
                .last()
                .expect("non-empty")
                .iterate
                .inf_norm(),
        ),
        stop_reason: trace.stop_reason.as_str().to_string(),
    }])
}

fn summary_row(
    method: Method,
    alpha: f64,
    lr: f64,
    clip: Option<f64>,
    y0: String,
    trace: &IterationTrace,
    y_star: Option<f64>,
) -> SummaryRow {
    let iters_to_tol = match y_star {
        Some(target) => trace.records.iter().position(|r| match &r.iterate {
            IterateSnapshot::Full(v) => v
                .iter()
                .fold(0.0_f64, |a, &x| a.max((x - target).abs()))
                <= SUMMARY_TOL,
            IterateSnapshot::InfNorm(_) => false,
        }),
        None => match trace.stop_reason {
            StopReason::Converged => Some(trace.records.len() - 1),
            _ => None,
        },
    };
    let last = trace.records.last().expect("trace holds the initial state");
    let final_iterate = match &last.iterate {
        IterateSnapshot::Full(v) if v.len() <= 8 => v
            .iter()
            .map(|&x| fmt_f64(x))
            .collect::<Vec<_>>()
            .join(";"),
        other => fmt_f64(other.inf_norm()),
    };
    SummaryRow {
        method: method.as_str().to_string(),
        alpha,
        learning_rate: lr,
        clip,
        y0,
        iters_to_tol,
        final_energy: last.energy,
        final_iterate,
        stop_reason: trace.stop_reason.as_str().to_string(),
    }
}

/// Runs `count` independent jobs on up to `jobs` threads, preserving result
/// order by index.
fn run_parallel<T, F>(count: usize, jobs: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let workers = jobs.max(1).min(count.max(1));
    if workers <= 1 {
        return (0..count).map(&job).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> =
        Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = job(i);
                slots.lock().expect("result mutex")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result mutex")
        .into_iter()
        .map(|slot| slot.expect("every index visited"))
        .collect()
}

/// Writes via a sibling temp file and rename so concurrent writers never
/// interleave and readers never observe partial files.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp: PathBuf = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".tmp");
            path.with_file_name(n)
        }
        None => return Err(Error::InvalidArgument(format!("bad path {path:?}"))),
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
