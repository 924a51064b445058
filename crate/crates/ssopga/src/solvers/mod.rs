//! Iterative solvers: the multiplicative sliding-sigmoid update, the classic
//! additive proximal gradient step, and the Lee–Seung multiplicative
//! baseline, with trace recording and stopping rules.
//!
//! One multiplicative iteration is `y ← Prox(y ⊙ S_α(g))` where `g` is the
//! (optionally clipped) gradient. By the step-equivalence identity this is an
//! additive proximal-gradient step with per-coordinate step sizes
//! `ρ_i = y_i·θ(g_i)`, so the ℓ1 prox uses the matching per-coordinate
//! thresholds `τ_i = λ·ρ_i`; the composite minimizer is then an exact fixed
//! point. The update needs no step size of its own: `learning_rate` in the
//! configuration is the PGA step `ρ` and is recorded, but not applied, for
//! the multiplicative methods.

mod trace;

pub use trace::{
    fmt_f64, parse_trace_csv, IterateSnapshot, IterationRecord, IterationTrace, ParsedRow,
    StopReason,
};

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{CompositeObjective, LinearInverseProblem, ProximalTerm, SmoothEnergy};
use crate::sso::SlidingSigmoid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "SSO_PGA")]
    SsoPga,
    #[serde(rename = "PGA")]
    Pga,
    #[serde(rename = "LEE_SEUNG")]
    LeeSeung,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::SsoPga => "SSO_PGA",
            Method::Pga => "PGA",
            Method::LeeSeung => "LEE_SEUNG",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Run parameters. Mirrored one-to-one by the JSON config format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    /// Sliding parameter (multiplicative methods only).
    #[serde(default)]
    pub alpha: f64,
    /// PGA step size ρ. Recorded but not applied for SSO_PGA, whose update
    /// rule carries no step size; unused by LEE_SEUNG.
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Stop when |E_t − E_{t−1}| ≤ tolerance·max(1, E_{t−1}) or
    /// ‖y_t − y_{t−1}‖∞ ≤ tolerance.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Symmetric gradient clip [−c, c] applied before the sliding multiplier.
    #[serde(default)]
    pub clip: Option<f64>,
    /// Lee–Seung denominator stabilizer ε.
    #[serde(default)]
    pub epsilon: f64,
    /// When set, stop with `oscillation_detected` as soon as the tail-window
    /// oscillation rule fires (window of this many steps, at least 4).
    #[serde(default)]
    pub oscillation_window: Option<usize>,
    /// Store the full iterate per record up to this dimension, the ∞-norm
    /// beyond it.
    #[serde(default = "default_trace_cap")]
    pub trace_vector_cap: usize,
}

fn default_learning_rate() -> f64 {
    1.0
}
fn default_max_iters() -> usize {
    50_000
}
fn default_tolerance() -> f64 {
    1e-6
}
fn default_trace_cap() -> usize {
    8
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            alpha: 0.0,
            learning_rate: default_learning_rate(),
            max_iters: default_max_iters(),
            tolerance: default_tolerance(),
            clip: None,
            epsilon: 0.0,
            oscillation_window: None,
            trace_vector_cap: default_trace_cap(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidArgument("learning_rate must be positive".into()));
        }
        if self.alpha.is_nan() || self.alpha < 0.0 {
            return Err(Error::InvalidArgument("alpha must be non-negative".into()));
        }
        if let Some(c) = self.clip {
            if c.is_nan() || c <= 0.0 {
                return Err(Error::InvalidArgument("clip bound must be positive".into()));
            }
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::InvalidArgument("epsilon must be non-negative".into()));
        }
        if let Some(w) = self.oscillation_window {
            if w < 4 {
                return Err(Error::InvalidArgument(
                    "oscillation window must be at least 4".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One multiplicative core step `y ⊙ S_α(g)` with multiplier statistics.
/// Shared verbatim by the solver and the alternating multi-modal updates so
/// decoupled problems reproduce each other bit for bit.
pub(crate) fn multiplicative_core(
    y: &Array1<f64>,
    g: &Array1<f64>,
    op: &SlidingSigmoid,
) -> (Array1<f64>, f64, f64) {
    let mut mult_min = f64::INFINITY;
    let mut mult_max = f64::NEG_INFINITY;
    let mut next = Array1::zeros(y.len());
    for i in 0..y.len() {
        let m = op.apply_raw(g[i]);
        if m < mult_min {
            mult_min = m;
        }
        if m > mult_max {
            mult_max = m;
        }
        next[i] = y[i] * m;
    }
    (next, mult_min, mult_max)
}

/// Classic proximal gradient step `Prox(y − ρ∇E(y), τ = ρλ)`. With an
/// identity prox this is plain gradient descent. Non-finite inputs propagate
/// into the output for the caller to record.
pub fn pga_step(
    smooth: &dyn SmoothEnergy,
    prox: &ProximalTerm,
    y: &Array1<f64>,
    rho: f64,
) -> Result<Array1<f64>> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step size must be positive, got {rho}"
        )));
    }
    let g = smooth.gradient(y.view());
    let v = y - &(rho * &g);
    Ok(Array1::from(prox.prox(v.as_slice().unwrap(), rho * prox.weight())?))
}

/// Output of one multiplicative proximal step.
#[derive(Debug, Clone)]
pub struct SsoStep {
    pub next: Array1<f64>,
    pub mult_min: f64,
    pub mult_max: f64,
}

/// One multiplicative proximal step: scale the gradient by `lr`, clip it to
/// `[−c, c]` when requested, multiply by the sliding multiplier, then apply
/// the prox at the equivalent per-coordinate thresholds `τ_i = λ·lr·y_i·θ(g_i)`.
///
/// Requires `y ≥ 0` elementwise; the pre-prox intermediate is then
/// non-negative too. A non-finite gradient propagates into the output.
pub fn sso_pga_step(
    smooth: &dyn SmoothEnergy,
    prox: &ProximalTerm,
    y: &Array1<f64>,
    op: &SlidingSigmoid,
    lr: f64,
    clip: Option<f64>,
) -> Result<SsoStep> {
    if lr.is_nan() || lr <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gradient pre-scale must be positive, got {lr}"
        )));
    }
    if let Some((i, &v)) = y.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
        return Err(Error::NegativeComponent { index: i, value: v });
    }
    let mut g = smooth.gradient(y.view());
    if lr != 1.0 {
        g.mapv_inplace(|v| lr * v);
    }
    if let Some(c) = clip {
        g.mapv_inplace(|v| v.clamp(-c, c));
    }
    let (pre_prox, mult_min, mult_max) = multiplicative_core(y, &g, op);
    let next = match prox {
        ProximalTerm::Identity => pre_prox,
        ProximalTerm::L1 { weight } => {
            let taus =
                Array1::from_shape_fn(y.len(), |i| weight * lr * y[i] * op.equivalent_theta(g[i]));
            prox.prox_per_coordinate(&pre_prox, &taus)
        }
    };
    Ok(SsoStep {
        next,
        mult_min,
        mult_max,
    })
}

/// One Lee–Seung multiplicative step `y_i·(Hᵀx)_i / ((HᵀHy)_i + ε)`.
///
/// A zero denominator at ε = 0 produces a non-finite component on purpose:
/// the division-by-zero hazard is an observable outcome, recorded by the run
/// loop rather than masked here.
pub fn lee_seung_step(p: &LinearInverseProblem, y: &Array1<f64>, epsilon: f64) -> Array1<f64> {
    let htx = p.operator().t().dot(p.observation());
    let hthy = p.operator().t().dot(&p.operator().dot(y));
    Array1::from_shape_fn(y.len(), |i| y[i] * htx[i] / (hthy[i] + epsilon))
}

/// Runs the configured method on a composite objective. The trace holds the
/// initial state plus one record per iteration; runs are deterministic
/// functions of their inputs.
pub fn run(
    config: &SolverConfig,
    objective: &CompositeObjective,
    y0: &[f64],
) -> Result<IterationTrace> {
    if config.method == Method::LeeSeung {
        return Err(Error::InvalidArgument(
            "the Lee-Seung baseline needs a linear inverse problem; use run_lee_seung".into(),
        ));
    }
    run_inner(config, objective, y0, |_, _| Ok(()))
}

/// Runs the multiplicative method in certified mode: before every iteration
/// the sufficient sliding-parameter bound `2/(κ‖H‖²) − 1` is re-evaluated at
/// the current state and the run errors out if `alpha` exceeds it.
pub fn run_certified(
    config: &SolverConfig,
    problem: &LinearInverseProblem,
    y0: &[f64],
) -> Result<IterationTrace> {
    if config.method != Method::SsoPga {
        return Err(Error::InvalidArgument(
            "certified descent applies to the multiplicative method".into(),
        ));
    }
    let alpha = config.alpha;
    let check = {
        let p = problem.clone();
        move |t: usize, y: &Array1<f64>| -> Result<()> {
            let bound = p.alpha_upper_bound(y.as_slice().unwrap())?;
            if alpha > bound {
                return Err(Error::InvalidArgument(format!(
                    "certified run aborted at iteration {t}: alpha {alpha} exceeds the bound {bound}"
                )));
            }
            Ok(())
        }
    };
    let objective = CompositeObjective::from_linear(problem.clone(), ProximalTerm::Identity);
    run_inner(config, &objective, y0, check)
}

fn run_inner(
    config: &SolverConfig,
    objective: &CompositeObjective,
    y0: &[f64],
    mut pre_step: impl FnMut(usize, &Array1<f64>) -> Result<()>,
) -> Result<IterationTrace> {
    config.validate()?;
    let dim = objective.dimension();
    if y0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: y0.len(),
        });
    }
    if let Some((i, &v)) = y0.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: Some(i),
            value: v,
        });
    }
    if config.method == Method::SsoPga {
        if let Some((i, &v)) = y0.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
            return Err(Error::NegativeComponent { index: i, value: v });
        }
    }

    let op = SlidingSigmoid::new(config.alpha)?;
    let mut y = Array1::from(y0.to_vec());
    let mut records = Vec::new();
    let mut energy_prev = objective.objective_value(y.view());
    push_record(
        &mut records,
        0,
        &y,
        energy_prev,
        grad_inf(objective, &y),
        None,
        config.trace_vector_cap,
    );

    let mut stop = StopReason::MaxIters;
    for t in 1..=config.max_iters {
        pre_step(t, &y)?;
        let (y_next, mults) = match config.method {
            Method::Pga => (
                pga_step(objective.smooth(), objective.prox(), &y, config.learning_rate)?,
                None,
            ),
            Method::SsoPga => {
                let s = sso_pga_step(objective.smooth(), objective.prox(), &y, &op, 1.0, config.clip)?;
                (s.next, Some((s.mult_min, s.mult_max)))
            }
            Method::LeeSeung => unreachable!("rejected above"),
        };
        let energy = objective.objective_value(y_next.view());
        if y_next.iter().any(|v| !v.is_finite()) || !energy.is_finite() {
            push_record(&mut records, t, &y_next, energy, f64::NAN, mults, config.trace_vector_cap);
            stop = StopReason::NonFinite;
            break;
        }
        push_record(
            &mut records,
            t,
            &y_next,
            energy,
            grad_inf(objective, &y_next),
            mults,
            config.trace_vector_cap,
        );
        let step_inf = y_next
            .iter()
            .zip(y.iter())
            .fold(0.0_f64, |a, (n, o)| a.max((n - o).abs()));
        y = y_next;
        if (energy - energy_prev).abs() <= config.tolerance * energy_prev.abs().max(1.0)
            || step_inf <= config.tolerance
        {
            stop = StopReason::Converged;
            break;
        }
        energy_prev = energy;
        if let Some(w) = config.oscillation_window {
            if trace::oscillation_in_tail(&records, w, config.tolerance) {
                stop = StopReason::OscillationDetected;
                break;
            }
        }
    }

    Ok(IterationTrace {
        records,
        stop_reason: stop,
        dimension: dim,
        tolerance: config.tolerance,
    })
}

/// Runs the Lee–Seung baseline (identity prox) on a linear inverse problem.
pub fn run_lee_seung(
    config: &SolverConfig,
    problem: &LinearInverseProblem,
    y0: &[f64],
) -> Result<IterationTrace> {
    config.validate()?;
    let dim = problem.dimension();
    if y0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: y0.len(),
        });
    }
    if let Some((i, &v)) = y0.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: Some(i),
            value: v,
        });
    }

    let htx = problem.operator().t().dot(problem.observation());
    let mut y = Array1::from(y0.to_vec());
    let mut records = Vec::new();
    let mut energy_prev = SmoothEnergy::energy(problem, y.view());
    push_record(
        &mut records,
        0,
        &y,
        energy_prev,
        SmoothEnergy::gradient(problem, y.view())
            .iter()
            .fold(0.0_f64, |a, v| a.max(v.abs())),
        None,
        config.trace_vector_cap,
    );

    let mut stop = StopReason::MaxIters;
    for t in 1..=config.max_iters {
        let hthy = problem.operator().t().dot(&problem.operator().dot(&y));
        let y_next =
            Array1::from_shape_fn(dim, |i| y[i] * htx[i] / (hthy[i] + config.epsilon));
        let energy = if y_next.iter().all(|v| v.is_finite()) {
            SmoothEnergy::energy(problem, y_next.view())
        } else {
            f64::NAN
        };
        if y_next.iter().any(|v| !v.is_finite()) || !energy.is_finite() {
            push_record(&mut records, t, &y_next, energy, f64::NAN, None, config.trace_vector_cap);
            stop = StopReason::NonFinite;
            break;
        }
        push_record(
            &mut records,
            t,
            &y_next,
            energy,
            SmoothEnergy::gradient(problem, y_next.view())
                .iter()
                .fold(0.0_f64, |a, v| a.max(v.abs())),
            None,
            config.trace_vector_cap,
        );
        let step_inf = y_next
            .iter()
            .zip(y.iter())
            .fold(0.0_f64, |a, (n, o)| a.max((n - o).abs()));
        y = y_next;
        if (energy - energy_prev).abs() <= config.tolerance * energy_prev.abs().max(1.0)
            || step_inf <= config.tolerance
        {
            stop = StopReason::Converged;
            break;
        }
        energy_prev = energy;
    }

    Ok(IterationTrace {
        records,
        stop_reason: stop,
        dimension: dim,
        tolerance: config.tolerance,
    })
}

fn grad_inf(objective: &CompositeObjective, y: &Array1<f64>) -> f64 {
    objective
        .smooth()
        .gradient(y.view())
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()))
}

fn push_record(
    records: &mut Vec<IterationRecord>,
    iter: usize,
    y: &Array1<f64>,
    energy: f64,
    grad_inf_norm: f64,
    mults: Option<(f64, f64)>,
    cap: usize,
) {
    let iterate = if y.len() <= cap {
        IterateSnapshot::Full(y.to_vec())
    } else {
        IterateSnapshot::InfNorm(y.iter().fold(0.0_f64, |a, v| a.max(v.abs())))
    };
    records.push(IterationRecord {
        iter,
        iterate,
        energy,
        grad_inf_norm,
        mult_min: mults.map(|m| m.0),
        mult_max: mults.map(|m| m.1),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::BenchmarkId;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem_i() -> CompositeObjective {
        CompositeObjective::benchmark(BenchmarkId::I)
    }

    fn problem_ii() -> CompositeObjective {
        CompositeObjective::benchmark(BenchmarkId::II)
    }

    fn hazard_problem() -> LinearInverseProblem {
        LinearInverseProblem::new(array![[1.0], [0.0]], array![0.0, 1.0]).unwrap()
    }

    #[test]
    fn pga_step_hand_computed() {
        let obj = problem_i();
        let next = pga_step(obj.smooth(), obj.prox(), &array![1.0], 0.25).unwrap();
        assert!((next[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn pga_step_problem_ii_from_zero() {
        // gradient at 0 is −1; pre-prox 0 + ρ; threshold ρ/2 leaves ρ/2
        let obj = problem_ii();
        for rho in [0.1, 0.25, 0.005] {
            let next = pga_step(obj.smooth(), obj.prox(), &array![0.0], rho).unwrap();
            assert!((next[0] - rho / 2.0).abs() < 1e-15, "rho={rho}");
        }
    }

    #[test]
    fn pga_step_fixed_point_at_stationarity() {
        let p = LinearInverseProblem::new(array![[2.0, 0.0], [0.0, 3.0]], array![4.0, 9.0]).unwrap();
        let obj = CompositeObjective::from_linear(p, ProximalTerm::Identity);
        let y = array![2.0, 3.0]; // exact least-squares solution
        let next = pga_step(obj.smooth(), obj.prox(), &y, 0.05).unwrap();
        assert!((&next - &y).iter().all(|d| d.abs() < 1e-14));
    }

    #[test]
    fn sso_step_hand_computed() {
        // gradient 1 at y=1; multiplier 2σ(−1)
        let obj = problem_i();
        let op = SlidingSigmoid::new(0.0).unwrap();
        let s = sso_pga_step(obj.smooth(), obj.prox(), &array![1.0], &op, 1.0, None).unwrap();
        assert!((s.next[0] - 0.5378828427399902).abs() < 1e-15);
        assert_eq!(s.mult_min, s.mult_max);
    }

    #[test]
    fn sso_step_zero_state_stays_zero() {
        let obj = problem_ii();
        let op = SlidingSigmoid::new(1.0).unwrap();
        let s = sso_pga_step(obj.smooth(), obj.prox(), &array![0.0], &op, 1.0, None).unwrap();
        assert_eq!(s.next[0], 0.0);
    }

    #[test]
    fn sso_step_zero_gradient_is_fixed_point() {
        let obj = problem_i();
        let op = SlidingSigmoid::new(2.0).unwrap();
        let s = sso_pga_step(obj.smooth(), obj.prox(), &array![0.5], &op, 1.0, None).unwrap();
        assert_eq!(s.next[0], 0.5);
    }

    #[test]
    fn sso_step_rejects_negative_state() {
        let obj = problem_i();
        let op = SlidingSigmoid::new(0.0).unwrap();
        match sso_pga_step(obj.smooth(), obj.prox(), &array![-0.1], &op, 1.0, None) {
            Err(Error::NegativeComponent { index: 0, .. }) => {}
            other => panic!("expected negative-component error, got {other:?}"),
        }
    }

    #[test]
    fn sso_step_prescale_contract() {
        // lr scales the gradient fed to the multiplier
        let obj = problem_i();
        let op = SlidingSigmoid::new(0.0).unwrap();
        let s = sso_pga_step(obj.smooth(), obj.prox(), &array![1.0], &op, 0.5, None).unwrap();
        let expected = 1.0 * op.apply(0.5).unwrap();
        assert_eq!(s.next[0], expected);
    }

    #[test]
    fn sso_step_clip_bounds_multipliers() {
        let obj = CompositeObjective::shifted_quadratic(6.0);
        let op = SlidingSigmoid::new(0.0).unwrap();
        let s = sso_pga_step(obj.smooth(), obj.prox(), &array![1.0], &op, 1.0, Some(0.1)).unwrap();
        // raw gradient −10 clips to −0.1; multiplier 2σ(0.1)
        assert!((s.next[0] - 2.0 * crate::sso::sigmoid(0.1)).abs() < 1e-15);
    }

    #[test]
    fn lee_seung_identity_fixed_point() {
        let p = LinearInverseProblem::new(array![[1.0, 0.0], [0.0, 1.0]], array![0.3, 0.9]).unwrap();
        let y = array![0.3, 0.9];
        let next = lee_seung_step(&p, &y, 0.0);
        assert!((&next - &y).iter().all(|d| d.abs() < 1e-15));
    }

    #[test]
    fn lee_seung_hazard_goes_nonfinite() {
        let p = hazard_problem();
        let y = array![0.7];
        let y1 = lee_seung_step(&p, &y, 0.0);
        assert_eq!(y1[0], 0.0);
        let y2 = lee_seung_step(&p, &y1, 0.0);
        assert!(!y2[0].is_finite());
    }

    #[test]
    fn lee_seung_epsilon_keeps_values_finite() {
        let p = hazard_problem();
        let y1 = lee_seung_step(&p, &array![0.7], 1e-12);
        assert!(y1[0].is_finite());
        let y2 = lee_seung_step(&p, &y1, 1e-12);
        assert!(y2[0].is_finite());
    }

    #[test]
    fn run_problem_i_reaches_minimizer() {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.tolerance = 1e-10;
        let trace = run(&cfg, &problem_i(), &[1.0]).unwrap();
        assert_eq!(trace.stop_reason, StopReason::Converged);
        let last = trace.final_iterate().inf_norm();
        assert!((last - 0.5).abs() <= 1e-3, "final iterate {last}");
        // golden prefix of the run, recorded from the first verified build
        let first: Vec<f64> = trace.records[..4]
            .iter()
            .map(|r| r.iterate.inf_norm())
            .collect();
        assert_eq!(first[0], 1.0);
        assert!((first[1] - 0.5378828427399902).abs() < 1e-15);
        assert!((first[2] - 0.5175160535233452).abs() < 1e-12);
        assert!((first[3] - 0.5084521415843924).abs() < 1e-12);
    }

    #[test]
    fn run_pga_monotone_on_quadratic() {
        let mut cfg = SolverConfig::new(Method::Pga);
        cfg.learning_rate = 0.005;
        cfg.tolerance = 1e-12;
        let trace = run(&cfg, &problem_i(), &[1.0]).unwrap();
        assert!(trace.check_monotone().is_empty());
        assert!((trace.final_iterate().inf_norm() - 0.5).abs() < 1e-3);
        // strict decrease until convergence for ρ < 1/L
        for w in trace.records.windows(2).take(100) {
            assert!(w[1].energy < w[0].energy);
        }
    }

    #[test]
    fn run_lee_seung_hazard_records_nonfinite() {
        let mut cfg = SolverConfig::new(Method::LeeSeung);
        cfg.epsilon = 0.0;
        let trace = run_lee_seung(&cfg, &hazard_problem(), &[0.7]).unwrap();
        assert_eq!(trace.stop_reason, StopReason::NonFinite);
        assert!(trace.records.len() <= 4); // initial + at most 3 iterations
    }

    #[test]
    fn run_rejects_bad_preconditions() {
        let cfg = SolverConfig::new(Method::SsoPga);
        assert!(run(&cfg, &problem_i(), &[-1.0]).is_err());
        assert!(run(&cfg, &problem_i(), &[1.0, 2.0]).is_err());
        assert!(run(&cfg, &problem_i(), &[f64::NAN]).is_err());
        let mut bad = SolverConfig::new(Method::Pga);
        bad.tolerance = 0.0;
        assert!(run(&bad, &problem_i(), &[1.0]).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.alpha = 0.7;
        let a = run(&cfg, &problem_i(), &[4.0]).unwrap();
        let b = run(&cfg, &problem_i(), &[4.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn sso_iterates_stay_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..20 {
            let mut cfg = SolverConfig::new(Method::SsoPga);
            cfg.alpha = rng.gen_range(0.0..2.0);
            cfg.max_iters = 200;
            let obj = if rng.gen_bool(0.5) { problem_i() } else { problem_ii() };
            let y0 = rng.gen_range(0.0..16.0);
            let trace = run(&cfg, &obj, &[y0]).unwrap();
            for r in &trace.records {
                if let IterateSnapshot::Full(v) = &r.iterate {
                    assert!(v[0] >= 0.0);
                }
            }
        }
    }

    #[test]
    fn step_equivalence_along_run() {
        // each multiplicative iterate equals the additive reconstruction
        let op = SlidingSigmoid::new(0.8).unwrap();
        let obj = problem_i();
        let mut y = array![3.0];
        for _ in 0..50 {
            let g = obj.smooth().gradient(y.view());
            let s = sso_pga_step(obj.smooth(), obj.prox(), &y, &op, 1.0, None).unwrap();
            let eq = op.equivalent_step(y[0], g[0]).unwrap();
            let additive = y[0] - eq.rho * g[0];
            assert!((s.next[0] - additive).abs() <= 1e-12 * y[0].max(1.0));
            y = s.next;
        }
    }

    #[test]
    fn certified_run_descends_or_aborts() {
        let p = LinearInverseProblem::new(array![[0.5, 0.0], [0.0, 0.4]], array![0.2, 0.1]).unwrap();
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.alpha = 0.5;
        cfg.max_iters = 500;
        cfg.tolerance = 1e-14;
        let trace = run_certified(&cfg, &p, &[0.9, 0.9]).unwrap();
        assert!(trace.check_monotone().is_empty());
        // an alpha far beyond the bound aborts before iterating
        cfg.alpha = 500.0;
        assert!(run_certified(&cfg, &p, &[0.9, 0.9]).is_err());
    }

    #[test]
    fn oscillation_stop_fires_on_unstable_run() {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.oscillation_window = Some(8);
        cfg.max_iters = 500;
        let obj = CompositeObjective::shifted_quadratic(6.0);
        let trace = run(&cfg, &obj, &[1.0]).unwrap();
        assert_eq!(trace.stop_reason, StopReason::OscillationDetected);
        assert!(trace.detect_oscillation(8));
    }

    #[test]
    fn config_json_round_trip() {
        let mut cfg = SolverConfig::new(Method::SsoPga);
        cfg.alpha = 1.5;
        cfg.clip = Some(0.1);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"SSO_PGA\""));
        let back: SolverConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        // defaults fill missing fields
        let minimal: SolverConfig =
            serde_json::from_str(r#"{"method": "PGA", "learning_rate": 0.005}"#).unwrap();
        assert_eq!(minimal.max_iters, 50_000);
        assert_eq!(minimal.tolerance, 1e-6);
    }
}
