//! Coupled two-block restoration model and its alternating multiplicative
//! updates.
//!
//! The objective couples an observation residual, a guide residual, and a
//! cross-domain consistency term over a target block `H` and an embedding
//! block `T`:
//!
//! ```math
//! ‖X − K·H‖² + β‖Y − S·T‖² + γ‖T − f(H)‖²  (+ optional ℓ1 term on H)
//! ```
//!
//! with dense linear operators `K`, `S`, `f`; the reverse map used in the
//! `H` gradient is the exact adjoint `fᵀ`, which makes the stated gradient
//! the true gradient of the smooth part. Each outer iteration updates `H`
//! first (multiplicative step with `alpha1`, then the prox), then `T`
//! (multiplicative step with `alpha2`, no prox) against the freshly updated
//! `H`.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{spectral_norm, ProximalTerm};
use crate::objectives::{least_squares_energy, least_squares_gradient};
use crate::solvers::{multiplicative_core, StopReason};
use crate::sso::SlidingSigmoid;

#[derive(Debug, Clone)]
pub struct MultiModalModel {
    /// Observation-domain degradation, maps target space to observation space.
    pub k: Array2<f64>,
    /// Guide-domain degradation, maps embedding space to guide space.
    pub s: Array2<f64>,
    /// Cross-domain coupling, maps target space to embedding space; its
    /// adjoint is the transpose.
    pub f: Array2<f64>,
    pub beta: f64,
    pub gamma: f64,
    /// Stand-in for the learned prior's proximal map; identity or ℓ1.
    pub prox_phi: ProximalTerm,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Observation.
    pub x_obs: Array1<f64>,
    /// Guide.
    pub y_guide: Array1<f64>,
}

/// JSON schema for toy instances: dense row-major matrices for K, S, f and
/// vectors X, Y plus the four scalars.
#[derive(Serialize, Deserialize)]
struct MultiModalJson {
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
    #[serde(rename = "X")]
    x: Vec<f64>,
    #[serde(rename = "Y")]
    y: Vec<f64>,
    beta: f64,
    gamma: f64,
    alpha1: f64,
    alpha2: f64,
}

/// Alternating-run history: full iterates per block plus the objective curve.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModalTrace {
    pub target_iterates: Vec<Array1<f64>>,
    pub embedding_iterates: Vec<Array1<f64>>,
    pub objective: Vec<f64>,
    pub stop_reason: StopReason,
}

impl MultiModalModel {
    pub fn validate(&self) -> Result<()> {
        let (nx, mh) = self.k.dim();
        let (ny, mt) = self.s.dim();
        let (fm, fn_) = self.f.dim();
        if self.x_obs.len() != nx {
            return Err(Error::DimensionMismatch {
                expected: nx,
                got: self.x_obs.len(),
            });
        }
        if self.y_guide.len() != ny {
            return Err(Error::DimensionMismatch {
                expected: ny,
                got: self.y_guide.len(),
            });
        }
        if fn_ != mh || fm != mt {
            return Err(Error::InvalidArgument(format!(
                "coupling map is {fm}x{fn_}, expected {mt}x{mh} to connect the blocks"
            )));
        }
        if self.beta.is_nan() || self.beta < 0.0 || self.gamma.is_nan() || self.gamma < 0.0 {
            return Err(Error::InvalidArgument(
                "beta and gamma must be non-negative".into(),
            ));
        }
        if self.alpha1.is_nan() || self.alpha1 < 0.0 || self.alpha2.is_nan() || self.alpha2 < 0.0 {
            return Err(Error::InvalidArgument(
                "sliding parameters must be non-negative".into(),
            ));
        }
        for &v in self
            .k
            .iter()
            .chain(self.s.iter())
            .chain(self.f.iter())
            .chain(self.x_obs.iter())
            .chain(self.y_guide.iter())
        {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: None,
                    value: v,
                });
            }
        }
        Ok(())
    }

    pub fn target_dim(&self) -> usize {
        self.k.ncols()
    }

    pub fn embedding_dim(&self) -> usize {
        self.s.ncols()
    }

    /// Full objective: the three quadratic residuals plus the ℓ1 penalty on
    /// the target when the prox stand-in carries one (reporting only).
    pub fn total_objective(&self, target: &Array1<f64>, embedding: &Array1<f64>) -> Result<f64> {
        self.check_shapes(target, embedding)?;
        let mut total = least_squares_energy(&self.k, &self.x_obs, target);
        if self.beta != 0.0 {
            total += self.beta * least_squares_energy(&self.s, &self.y_guide, embedding);
        }
        if self.gamma != 0.0 {
            let r = embedding - &self.f.dot(target);
            total += self.gamma * r.dot(&r);
        }
        total += self.prox_phi.penalty(target.view());
        Ok(total)
    }

    /// Gradient of the smooth part in the target block:
    /// `2Kᵀ(K·H − X) + 2γ·fᵀ(f(H) − T)`. Zero coupling weight skips the
    /// second term entirely, reproducing the standalone least-squares
    /// gradient bit for bit.
    pub fn grad_target(&self, target: &Array1<f64>, embedding: &Array1<f64>) -> Result<Array1<f64>> {
        self.check_shapes(target, embedding)?;
        let mut g = least_squares_gradient(&self.k, &self.x_obs, target);
        if self.gamma != 0.0 {
            let r = &self.f.dot(target) - embedding;
            g = g + (2.0 * self.gamma) * &self.f.t().dot(&r);
        }
        Ok(g)
    }

    /// Gradient of the smooth part in the embedding block:
    /// `2βSᵀ(S·T − Y) + 2γ(T − f(H))`, evaluated against the freshly
    /// updated target.
    pub fn grad_embedding(
        &self,
        target_new: &Array1<f64>,
        embedding: &Array1<f64>,
    ) -> Result<Array1<f64>> {
        self.check_shapes(target_new, embedding)?;
        let mut g = if self.beta != 0.0 {
            let base = least_squares_gradient(&self.s, &self.y_guide, embedding);
            if self.beta == 1.0 {
                base
            } else {
                self.beta * base
            }
        } else {
            Array1::zeros(embedding.len())
        };
        if self.gamma != 0.0 {
            let r = embedding - &self.f.dot(target_new);
            g = g + (2.0 * self.gamma) * &r;
        }
        Ok(g)
    }

    /// Target update: multiplicative step with `alpha1`, then the prox
    /// stand-in at the equivalent per-coordinate thresholds.
    pub fn update_target(
        &self,
        target: &Array1<f64>,
        embedding: &Array1<f64>,
    ) -> Result<(Array1<f64>, f64, f64)> {
        require_nonnegative(target)?;
        let op = SlidingSigmoid::new(self.alpha1)?;
        let g = self.grad_target(target, embedding)?;
        let (pre, mn, mx) = multiplicative_core(target, &g, &op);
        let next = match &self.prox_phi {
            ProximalTerm::Identity => pre,
            ProximalTerm::L1 { weight } => {
                let taus = Array1::from_shape_fn(target.len(), |i| {
                    weight * target[i] * op.equivalent_theta(g[i])
                });
                self.prox_phi.prox_per_coordinate(&pre, &taus)
            }
        };
        Ok((next, mn, mx))
    }

    /// Embedding update: multiplicative step with `alpha2`; no prox.
    pub fn update_embedding(
        &self,
        target_new: &Array1<f64>,
        embedding: &Array1<f64>,
    ) -> Result<(Array1<f64>, f64, f64)> {
        require_nonnegative(embedding)?;
        let op = SlidingSigmoid::new(self.alpha2)?;
        let g = self.grad_embedding(target_new, embedding)?;
        let (next, mn, mx) = multiplicative_core(embedding, &g, &op);
        Ok((next, mn, mx))
    }

    /// Alternates the block updates, recording the total objective each
    /// iteration, under the same stopping rules as the single-block solver.
    pub fn solve_alternating(
        &self,
        target0: &Array1<f64>,
        embedding0: &Array1<f64>,
        max_iters: usize,
        tolerance: f64,
    ) -> Result<MultiModalTrace> {
        self.validate()?;
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        require_nonnegative(target0)?;
        require_nonnegative(embedding0)?;

        let mut h = target0.clone();
        let mut t = embedding0.clone();
        let mut objective = vec![self.total_objective(&h, &t)?];
        let mut target_iterates = vec![h.clone()];
        let mut embedding_iterates = vec![t.clone()];
        let mut stop = StopReason::MaxIters;

        for _ in 1..=max_iters {
            let (h_next, _, _) = self.update_target(&h, &t)?;
            if h_next.iter().any(|v| !v.is_finite()) {
                stop = StopReason::NonFinite;
                target_iterates.push(h_next);
                embedding_iterates.push(t.clone());
                objective.push(f64::NAN);
                break;
            }
            let (t_next, _, _) = self.update_embedding(&h_next, &t)?;
            if t_next.iter().any(|v| !v.is_finite()) {
                stop = StopReason::NonFinite;
                target_iterates.push(h_next);
                embedding_iterates.push(t_next);
                objective.push(f64::NAN);
                break;
            }
            let obj = self.total_objective(&h_next, &t_next)?;
            let step_inf = inf_dist(&h_next, &h).max(inf_dist(&t_next, &t));
            let prev = *objective.last().expect("objective starts non-empty");
            target_iterates.push(h_next.clone());
            embedding_iterates.push(t_next.clone());
            objective.push(obj);
            h = h_next;
            t = t_next;
            if !obj.is_finite() {
                stop = StopReason::NonFinite;
                break;
            }
            if (obj - prev).abs() <= tolerance * prev.abs().max(1.0) || step_inf <= tolerance {
                stop = StopReason::Converged;
                break;
            }
        }

        Ok(MultiModalTrace {
            target_iterates,
            embedding_iterates,
            objective,
            stop_reason: stop,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = MultiModalJson {
            k: rows(&self.k),
            s: rows(&self.s),
            f: rows(&self.f),
            x: self.x_obs.to_vec(),
            y: self.y_guide.to_vec(),
            beta: self.beta,
            gamma: self.gamma,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
        };
        serde_json::to_string_pretty(&doc).expect("serializing plain floats cannot fail")
    }

    /// Loads an instance from the JSON document; the prox stand-in defaults
    /// to identity.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MultiModalJson = serde_json::from_str(text)?;
        let model = Self {
            k: matrix(doc.k)?,
            s: matrix(doc.s)?,
            f: matrix(doc.f)?,
            beta: doc.beta,
            gamma: doc.gamma,
            prox_phi: ProximalTerm::Identity,
            alpha1: doc.alpha1,
            alpha2: doc.alpha2,
            x_obs: Array1::from(doc.x),
            y_guide: Array1::from(doc.y),
        };
        model.validate()?;
        Ok(model)
    }

    fn check_shapes(&self, target: &Array1<f64>, embedding: &Array1<f64>) -> Result<()> {
        if target.len() != self.target_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.target_dim(),
                got: target.len(),
            });
        }
        if embedding.len() != self.embedding_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.embedding_dim(),
                got: embedding.len(),
            });
        }
        Ok(())
    }
}

/// Deterministic consistent 16-dimensional instance used by the toy preset
/// and the acceptance suite, together with its initial point and the exact
/// solution it was forward-simulated from. Operators are scaled so the
/// per-block sliding-parameter bounds hold with a wide margin along the run.
pub fn toy_instance() -> (MultiModalModel, Array1<f64>, Array1<f64>, Array1<f64>, Array1<f64>) {
    let dim = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut near_identity = |scale: f64| -> Array2<f64> {
        let mut m = Array2::eye(dim);
        for v in m.iter_mut() {
            *v += 0.1 * rng.gen::<f64>();
        }
        let norm = spectral_norm(&m.view());
        m * (scale / norm)
    };
    let k = near_identity(0.4);
    let s = near_identity(0.4);
    let f = Array2::eye(dim) * 0.4;
    let h_star = Array1::from_shape_fn(dim, |_| 0.2 + 0.8 * rng.gen::<f64>());
    let t_star = f.dot(&h_star);
    let x_obs = k.dot(&h_star);
    let y_guide = s.dot(&t_star);
    let h0 = Array1::from_shape_fn(dim, |_| 0.2 + 0.8 * rng.gen::<f64>());
    let t0 = Array1::from_shape_fn(dim, |_| 0.2 + 0.8 * rng.gen::<f64>());
    let model = MultiModalModel {
        k,
        s,
        f,
        beta: 0.5,
        gamma: 0.25,
        prox_phi: ProximalTerm::Identity,
        alpha1: 0.0,
        alpha2: 0.0,
        x_obs,
        y_guide,
    };
    (model, h0, t0, h_star, t_star)
}

fn require_nonnegative(v: &Array1<f64>) -> Result<()> {
    if let Some((i, &x)) = v.iter().enumerate().find(|(_, x)| x.is_nan() || **x < 0.0) {
        return Err(Error::NegativeComponent { index: i, value: x });
    }
    Ok(())
}

fn inf_dist(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn rows(m: &Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn matrix(rows: Vec<Vec<f64>>) -> Result<Array2<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let m = rows[0].len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidArgument("ragged matrix rows".into()));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((n, m), flat).map_err(|e| Error::InvalidArgument(e.to_string()))
}
