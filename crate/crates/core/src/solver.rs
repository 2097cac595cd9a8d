//! The alternating-maximization engine, instantiated for all five objective
//! kinds, with full iteration tracing.
//!
//! One iteration performs the double update
//! `p_k = argmax_p F(p, q_{k-1})`, `q_k = argmax_q F(p_k, q)` and the run
//! stops once `|F(k,k) - F(k-1,k-1)| < epsilon`. The reported iteration
//! count is the number of completed double updates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{Nats, ALPHA_ONE_TOL};
use crate::objectives::{eval_objective, optimal_p, optimal_q, ObjectiveKind};
use crate::simplex::{Channel, Distribution, ReverseConditional};

/// How the initial input distribution is chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum InitPolicy {
    Uniform,
    Random { seed: u64 },
    Explicit(Distribution),
}

/// How often `p`/`q` snapshots are stored in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SnapshotPolicy {
    /// Every iteration for alphabets up to 16 symbols, every 10th otherwise.
    Auto,
    /// Every `n`-th iteration (and always iteration 0).
    Every(usize),
    Off,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub alpha: f64,
    /// Stop threshold on `|F(k,k) - F(k-1,k-1)|`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub init: InitPolicy,
    pub snapshots: SnapshotPolicy,
}

impl SolverConfig {
    pub fn new(alpha: f64, epsilon: f64) -> Self {
        Self {
            alpha,
            epsilon,
            max_iter: 10_000,
            init: InitPolicy::Uniform,
            snapshots: SnapshotPolicy::Auto,
        }
    }

    pub fn with_init(mut self, init: InitPolicy) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_snapshots(mut self, snapshots: SnapshotPolicy) -> Self {
        self.snapshots = snapshots;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::NonPositiveAlpha { alpha: self.alpha });
        }
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::NonFiniteResult);
        }
        if self.max_iter == 0 || matches!(self.snapshots, SnapshotPolicy::Every(0)) {
            return Err(Error::ZeroDimension);
        }
        Ok(())
    }

    fn initial(&self, n: usize) -> Result<Distribution> {
        let p0 = match &self.init {
            InitPolicy::Uniform => Distribution::uniform(n)?,
            InitPolicy::Random { seed } => Distribution::random_interior(n, *seed)?,
            InitPolicy::Explicit(p) => {
                if p.len() != n {
                    return Err(Error::DimensionMismatch {
                        left: p.len(),
                        right: n,
                    });
                }
                p.clone()
            }
        };
        if let Some(index) = p0.probs().iter().position(|&v| v == 0.0) {
            return Err(Error::SupportViolation {
                context: "initial distribution",
                index,
            });
        }
        Ok(p0)
    }
}

/// One record of the trace: the objective after the k-th double update, and
/// (once the next iteration ran) the value after the next p-update but before
/// the next q-update.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub k: usize,
    /// `F(k,k)`.
    pub f_kk: Nats,
    /// `F(k+1,k)`; absent on the last recorded step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_next: Option<Nats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Distribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ReverseConditional>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<TraceStep>,
}

impl IterationTrace {
    /// The `F(k,k)` sequence, one value per recorded k starting at 0.
    pub fn f_kk_values(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.f_kk.0).collect()
    }

    /// The `F(k+1,k)` sequence (one shorter than `f_kk_values`).
    pub fn f_next_values(&self) -> Vec<f64> {
        self.steps.iter().filter_map(|s| s.f_next.map(|n| n.0)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    /// The kind actually iterated (Shannon when alpha is within 1e-9 of 1).
    pub kind: ObjectiveKind,
    pub requested_kind: ObjectiveKind,
    pub alpha: f64,
    /// Final `F(k,k)`, the capacity estimate.
    pub capacity: Nats,
    /// Number of completed (p, q) double updates.
    pub iterations: usize,
    /// False when `max_iter` was reached before the stop rule fired.
    pub converged: bool,
    /// True when an alpha-kind was dispatched to the Shannon iteration.
    pub shannon_dispatch: bool,
    pub p_final: Distribution,
    pub q_final: ReverseConditional,
    pub trace: IterationTrace,
}

/// Run the alternating maximization of `F(kind)` on channel `w`.
pub fn solve(kind: ObjectiveKind, w: &Channel, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    let requested = kind;
    let (kind, dispatched) = if kind.is_alpha() && (config.alpha - 1.0).abs() < ALPHA_ONE_TOL {
        (ObjectiveKind::Shannon, true)
    } else {
        (kind, false)
    };
    let alpha = config.alpha;

    let stride = match config.snapshots {
        SnapshotPolicy::Auto => {
            if w.n_in().max(w.n_out()) <= 16 {
                Some(1)
            } else {
                Some(10)
            }
        }
        SnapshotPolicy::Every(n) => Some(n),
        SnapshotPolicy::Off => None,
    };
    let due = |k: usize| stride.is_some_and(|s| k.is_multiple_of(s));

    let mut p = config.initial(w.n_in())?;
    let mut q = optimal_q(kind, &p, w, alpha)?.q;
    let mut f_prev = eval_objective(kind, &p, &q, w, alpha)?.0;

    let mut trace = IterationTrace::default();
    trace.steps.push(TraceStep {
        k: 0,
        f_kk: Nats(f_prev),
        f_next: None,
        p: due(0).then(|| p.clone()),
        q: due(0).then(|| q.clone()),
    });

    let mut k = 0;
    let mut converged = false;
    while k < config.max_iter {
        k += 1;
        p = optimal_p(kind, &q, w, alpha)?;
        let f_mid = eval_objective(kind, &p, &q, w, alpha)?.0;
        if let Some(last) = trace.steps.last_mut() {
            last.f_next = Some(Nats(f_mid));
        }
        q = optimal_q(kind, &p, w, alpha)?.q;
        let f = eval_objective(kind, &p, &q, w, alpha)?.0;
        trace.steps.push(TraceStep {
            k,
            f_kk: Nats(f),
            f_next: None,
            p: due(k).then(|| p.clone()),
            q: due(k).then(|| q.clone()),
        });
        if (f - f_prev).abs() < config.epsilon {
            converged = true;
            f_prev = f;
            break;
        }
        f_prev = f;
    }

    Ok(SolveResult {
        kind,
        requested_kind: requested,
        alpha,
        capacity: Nats(f_prev),
        iterations: k,
        converged,
        shannon_dispatch: dispatched,
        p_final: p,
        q_final: q,
        trace,
    })
}

/// Run the four order-alpha algorithms (plus optionally the Shannon one) with
/// the same configuration. With a uniform init the four alpha runs satisfy
/// the lockstep precondition, since the uniform distribution is tilt-invariant.
pub fn solve_all(
    w: &Channel,
    config: &SolverConfig,
    include_shannon: bool,
) -> Result<BTreeMap<ObjectiveKind, SolveResult>> {
    let mut out = BTreeMap::new();
    if include_shannon {
        out.insert(ObjectiveKind::Shannon, solve(ObjectiveKind::Shannon, w, config)?);
    }
    for kind in ObjectiveKind::ALPHA_KINDS {
        out.insert(kind, solve(kind, w, config)?);
    }
    Ok(out)
}
