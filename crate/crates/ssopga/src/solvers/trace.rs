//! Per-iteration records, CSV export, and the runtime monitors
//! (monotonicity checking and oscillation detection).

use std::path::Path;

use crate::error::{Error, Result};

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIters,
    NonFinite,
    OscillationDetected,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIters => "max_iters",
            StopReason::NonFinite => "nonfinite",
            StopReason::OscillationDetected => "oscillation_detected",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The iterate as stored in a record: the full vector at desk scale, or just
/// its ∞-norm above the configured dimension cap.
#[derive(Debug, Clone, PartialEq)]
pub enum IterateSnapshot {
    Full(Vec<f64>),
    InfNorm(f64),
}

impl IterateSnapshot {
    pub fn inf_norm(&self) -> f64 {
        match self {
            IterateSnapshot::Full(v) => v.iter().fold(0.0_f64, |a, &x| a.max(x.abs())),
            IterateSnapshot::InfNorm(n) => *n,
        }
    }

    /// Components used by the oscillation detector: the vector itself, or the
    /// scalar norm when only that was kept.
    fn components(&self) -> Vec<f64> {
        match self {
            IterateSnapshot::Full(v) => v.clone(),
            IterateSnapshot::InfNorm(n) => vec![*n],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub iterate: IterateSnapshot,
    /// Objective value (smooth energy plus the ℓ1 penalty when present).
    pub energy: f64,
    pub grad_inf_norm: f64,
    /// Smallest multiplier applied this iteration (multiplicative methods only).
    pub mult_min: Option<f64>,
    /// Largest multiplier applied this iteration (multiplicative methods only).
    pub mult_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    pub dimension: usize,
    /// Stopping tolerance of the run that produced this trace; reused by the
    /// oscillation detector's movement test.
    pub tolerance: f64,
}

/// 17 significant digits, enough to round-trip an f64 through text.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl IterationTrace {
    /// Final iterate of the run as stored.
    pub fn final_iterate(&self) -> &IterateSnapshot {
        &self.records.last().expect("trace holds the initial state").iterate
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().expect("trace holds the initial state").energy
    }

    /// Indices `t` with `E_t > E_{t−1}·(1 + 1e-12) + 1e-15`; an empty result
    /// certifies monotone descent.
    pub fn check_monotone(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for t in 1..self.records.len() {
            let prev = self.records[t - 1].energy;
            let cur = self.records[t].energy;
            if cur > prev * (1.0 + 1e-12) + 1e-15 {
                out.push(t);
            }
        }
        out
    }

    /// True iff, over the final `window` steps, the iterate's first
    /// difference reverses direction at least `window/2` times while the
    /// window's overall movement exceeds the run tolerance. Traces shorter
    /// than the window report false. `window` must be at least 4.
    pub fn detect_oscillation(&self, window: usize) -> bool {
        assert!(window >= 4, "oscillation window must be at least 4");
        oscillation_in_tail(&self.records, window, self.tolerance)
    }

    /// Renders the trace in the fixed CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,energy,grad_inf_norm,iterate_inf_norm,mult_min,mult_max,stop_reason\n");
        let last = self.records.len().saturating_sub(1);
        for (k, r) in self.records.iter().enumerate() {
            let iterate = match &r.iterate {
                IterateSnapshot::Full(v) if self.dimension <= 8 => v
                    .iter()
                    .map(|&x| fmt_f64(x))
                    .collect::<Vec<_>>()
                    .join(";"),
                other => fmt_f64(other.inf_norm()),
            };
            let mult_min = r.mult_min.map(fmt_f64).unwrap_or_default();
            let mult_max = r.mult_max.map(fmt_f64).unwrap_or_default();
            let reason = if k == last { self.stop_reason.as_str() } else { "" };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.iter,
                fmt_f64(r.energy),
                fmt_f64(r.grad_inf_norm),
                iterate,
                mult_min,
                mult_max,
                reason
            ));
        }
        out
    }
}

/// Tail-window oscillation rule shared by [`IterationTrace::detect_oscillation`]
/// and the in-run stopping check.
///
/// Movement is measured as the window's diameter relative to its first
/// iterate (a period-2 cycle returns to itself after an even window, so
/// endpoint-to-endpoint displacement alone would miss it).
pub(crate) fn oscillation_in_tail(
    records: &[IterationRecord],
    window: usize,
    tolerance: f64,
) -> bool {
    if records.len() < window + 1 {
        return false;
    }
    let tail: Vec<Vec<f64>> = records[records.len() - window - 1..]
        .iter()
        .map(|r| r.iterate.components())
        .collect();
    let dim = tail[0].len();
    if tail.iter().any(|v| v.len() != dim) {
        return false;
    }
    let mut moved = 0.0_f64;
    for v in &tail[1..] {
        let d = v
            .iter()
            .zip(&tail[0])
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        moved = moved.max(d);
    }
    if moved <= tolerance {
        return false;
    }
    let diffs: Vec<Vec<f64>> = tail
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut reversals = 0usize;
    for pair in diffs.windows(2) {
        let dot: f64 = pair[0].iter().zip(&pair[1]).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            reversals += 1;
        }
    }
    (reversals as f64) >= (window as f64) / 2.0
}

/// One parsed row of a trace CSV.
#[derive(Debug, Clone)]
pub struct ParsedRow {
    pub iter: usize,
    pub energy: f64,
    pub grad_inf_norm: f64,
    /// Components of the iterate column (one entry when the file stored a norm).
    pub iterate: Vec<f64>,
    pub stop_reason: String,
}

/// Reads a trace CSV back; errors name the file and line.
pub fn parse_trace_csv(path: &Path) -> Result<Vec<ParsedRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let fail = |line: usize, message: String| Error::TraceParse {
        file: path.to_path_buf(),
        line,
        message,
    };
    match lines.next() {
        Some((_, "iter,energy,grad_inf_norm,iterate_inf_norm,mult_min,mult_max,stop_reason")) => {}
        Some((_, h)) => return Err(fail(1, format!("unexpected header '{h}'"))),
        None => return Err(fail(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(fail(idx + 1, format!("expected 7 fields, got {}", fields.len())));
        }
        let iter = fields[0]
            .parse()
            .map_err(|e| fail(idx + 1, format!("bad iteration index: {e}")))?;
        let energy = fields[1]
            .parse()
            .map_err(|e| fail(idx + 1, format!("bad energy: {e}")))?;
        let grad_inf_norm = fields[2]
            .parse()
            .map_err(|e| fail(idx + 1, format!("bad gradient norm: {e}")))?;
        let iterate = fields[3]
            .split(';')
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| fail(idx + 1, format!("bad iterate field: {e}")))?;
        rows.push(ParsedRow {
            iter,
            energy,
            grad_inf_norm,
            iterate,
            stop_reason: fields[6].to_string(),
        });
    }
    if rows.is_empty() {
        return Err(fail(1, "no data rows".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_trace(values: &[f64], tolerance: f64) -> IterationTrace {
        let records = values
            .iter()
            .enumerate()
            .map(|(i, &v)| IterationRecord {
                iter: i,
                iterate: IterateSnapshot::Full(vec![v]),
                energy: v * v,
                grad_inf_norm: 2.0 * v.abs(),
                mult_min: None,
                mult_max: None,
            })
            .collect();
        IterationTrace {
            records,
            stop_reason: StopReason::MaxIters,
            dimension: 1,
            tolerance,
        }
    }

    #[test]
    fn monotone_check_flags_increases() {
        let mut t = scalar_trace(&[3.0, 2.0, 1.0, 0.5], 1e-6);
        assert!(t.check_monotone().is_empty());
        // strictly increasing energies: every step flagged
        for (i, r) in t.records.iter_mut().enumerate() {
            r.energy = i as f64 + 1.0;
        }
        assert_eq!(t.check_monotone(), vec![1, 2, 3]);
    }

    #[test]
    fn oscillation_converged_trace_is_false() {
        let t = scalar_trace(&[1.0, 0.6, 0.52, 0.503, 0.5003, 0.50001, 0.5], 1e-6);
        assert!(!t.detect_oscillation(4));
    }

    #[test]
    fn oscillation_period_two_is_true() {
        let t = scalar_trace(&[5.0, 7.0, 5.0, 7.0, 5.0, 7.0, 5.0, 7.0, 5.0], 1e-6);
        assert!(t.detect_oscillation(4));
        assert!(t.detect_oscillation(8));
    }

    #[test]
    fn oscillation_short_trace_is_false() {
        let t = scalar_trace(&[5.0, 7.0, 5.0], 1e-6);
        assert!(!t.detect_oscillation(4));
    }

    #[test]
    fn oscillation_requires_movement() {
        // alternating at sub-tolerance amplitude is numerical noise, not oscillation
        let t = scalar_trace(&[0.5, 0.5 + 1e-9, 0.5, 0.5 + 1e-9, 0.5, 0.5 + 1e-9, 0.5], 1e-6);
        assert!(!t.detect_oscillation(4));
    }

    #[test]
    fn csv_layout() {
        let t = scalar_trace(&[1.0, 0.5], 1e-6);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "iter,energy,grad_inf_norm,iterate_inf_norm,mult_min,mult_max,stop_reason"
        );
        let row0 = lines.next().unwrap();
        assert!(row0.starts_with("0,"));
        assert!(row0.ends_with(",,,")); // no multipliers, no stop reason yet
        let row1 = lines.next().unwrap();
        assert!(row1.ends_with(",,,max_iters"));
        assert!(lines.next().is_none());
    }

    #[test]
    fn csv_round_trips_through_parser() {
        let t = scalar_trace(&[1.0, 0.625, 0.5], 1e-6);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        std::fs::write(&path, t.to_csv()).unwrap();
        let rows = parse_trace_csv(&path).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].iterate, vec![0.625]);
        assert_eq!(rows[2].stop_reason, "max_iters");
        assert_eq!(rows[1].energy, 0.625 * 0.625);
    }

    #[test]
    fn parser_reports_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(
            &path,
            "iter,energy,grad_inf_norm,iterate_inf_norm,mult_min,mult_max,stop_reason\n0,oops,0,0,,,\n",
        )
        .unwrap();
        match parse_trace_csv(&path) {
            Err(Error::TraceParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn vector_traces_store_norm_above_cap() {
        let rec = IterationRecord {
            iter: 0,
            iterate: IterateSnapshot::InfNorm(3.5),
            energy: 1.0,
            grad_inf_norm: 0.1,
            mult_min: Some(0.9),
            mult_max: Some(1.1),
        };
        let t = IterationTrace {
            records: vec![rec],
            stop_reason: StopReason::Converged,
            dimension: 30,
            tolerance: 1e-6,
        };
        let csv = t.to_csv();
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[3], fmt_f64(3.5));
        assert_eq!(fields[4], fmt_f64(0.9));
        assert_eq!(fields[6], "converged");
    }
}
