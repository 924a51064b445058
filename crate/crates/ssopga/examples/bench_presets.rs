//! Drive the benchmark presets from code: run one preset into a directory
//! and print its summary table.
//!
//! Run with: cargo run --release --example bench_presets
//! (equivalent to: ssopga bench fig3-problem1 --out bench-example)

use std::path::PathBuf;

use ssopga::bench::{preset_names, run_preset};

fn main() {
    println!("available presets: {}", preset_names().join(", "));

    let out = PathBuf::from("bench-example");
    let summary = run_preset("fig3-problem1", &out, 4, 42).unwrap();
    println!("\n{}", summary.to_csv());
    println!("traces and summary files written to {}", out.display());
}
