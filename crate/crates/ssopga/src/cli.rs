//! Command-line driver: preset benchmarks, single runs from a JSON config,
//! trace plotting, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification-suite failure, 2 usage error,
//! 3 I/O error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::bench::{self, plot};
use crate::error::{Error, Result};
use crate::objectives::{BenchmarkId, CompositeObjective, LinearInverseProblem, ProximalTerm};
use crate::solvers::{run, run_lee_seung, Method, SolverConfig};

#[derive(Parser)]
#[command(
    name = "ssopga",
    about = "Multiplicative proximal gradient benchmarks and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment preset, writing traces and summaries.
    Bench {
        /// Preset name; see `ssopga presets`.
        preset: String,
        /// Output directory (default: $SSOPGA_OUT/<preset> or ./ssopga-out/<preset>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum concurrent grid cells.
        #[arg(long)]
        jobs: Option<usize>,
        /// Seed for randomized presets.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run one solver configuration from a JSON file.
    Solve {
        /// JSON config mirroring the solver parameters, plus a "problem" key.
        #[arg(long)]
        config: PathBuf,
        /// Initial state as comma-separated decimals.
        #[arg(long)]
        y0: String,
        /// Trace CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render trace CSVs into a two-panel SVG.
    Plot {
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
        /// Trace CSV files.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
    /// List the available presets.
    Presets,
    /// Run the envelope, step-equivalence, and certified-descent suites.
    Verify {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Problem selector inside a solve config: a benchmark id, a linear inverse
/// problem JSON file, or a shifted 1-D quadratic.
#[derive(Deserialize)]
#[serde(untagged)]
enum ProblemSpec {
    Benchmark(String),
    Linear { linear_path: PathBuf },
    Quadratic { center: f64 },
}

#[derive(Deserialize)]
struct SolveSpec {
    problem: ProblemSpec,
    #[serde(flatten)]
    config: SolverConfig,
}

/// Entry point used by the binary and by tests; takes full argv.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VerifyFailed(_) => 1,
        Error::Io(_) | Error::TraceParse { .. } => 3,
        _ => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Bench {
            preset,
            out,
            jobs,
            seed,
        } => {
            if !bench::preset_names().contains(&preset.as_str()) {
                return Err(Error::UnknownPreset(preset));
            }
            let out_dir = out.unwrap_or_else(|| default_out_dir(&preset));
            let jobs = jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
            });
            let summary = bench::run_preset(&preset, &out_dir, jobs, seed)?;
            let dnf = summary.rows.iter().filter(|r| r.iters_to_tol.is_none()).count();
            println!(
                "{}: {} cells ({} DNF) written to {}",
                preset,
                summary.rows.len(),
                dnf,
                out_dir.display()
            );
            Ok(())
        }
        Command::Solve { config, y0, out } => {
            let text = std::fs::read_to_string(&config)?;
            let spec: SolveSpec = serde_json::from_str(&text)?;
            let y0 = parse_y0(&y0)?;
            let trace = match &spec.problem {
                ProblemSpec::Benchmark(id) => {
                    let objective = CompositeObjective::benchmark(BenchmarkId::parse(id)?);
                    if spec.config.method == Method::LeeSeung {
                        return Err(Error::InvalidArgument(
                            "the Lee-Seung baseline needs a linear problem".into(),
                        ));
                    }
                    run(&spec.config, &objective, &y0)?
                }
                ProblemSpec::Linear { linear_path } => {
                    let problem =
                        LinearInverseProblem::from_json(&std::fs::read_to_string(linear_path)?)?;
                    if spec.config.method == Method::LeeSeung {
                        run_lee_seung(&spec.config, &problem, &y0)?
                    } else {
                        let objective =
                            CompositeObjective::from_linear(problem, ProximalTerm::Identity);
                        run(&spec.config, &objective, &y0)?
                    }
                }
                ProblemSpec::Quadratic { center } => {
                    let objective = CompositeObjective::shifted_quadratic(*center);
                    run(&spec.config, &objective, &y0)?
                }
            };
            match out {
                Some(path) => bench_write(&path, trace.to_csv().as_bytes())?,
                None => print!("{}", trace.to_csv()),
            }
            Ok(())
        }
        Command::Plot { out, traces } => plot::plot_traces(&traces, &out),
        Command::Presets => {
            for p in bench::PRESETS {
                println!("{:18} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Verify { seed } => bench::verify::run_suites(seed),
    }
}

fn bench_write(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

fn default_out_dir(preset: &str) -> PathBuf {
    match std::env::var_os("SSOPGA_OUT") {
        Some(base) => PathBuf::from(base).join(preset),
        None => PathBuf::from("ssopga-out").join(preset),
    }
}

fn parse_y0(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad y0 component '{s}': {e}")))
        })
        .collect()
}
