//! Independent oracles and the equivalence harness: grid search over the
//! probability simplex as a ground truth for capacities, plus executable
//! checks of the pairwise algorithm equivalences and global convergence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{self, Nats};
use crate::objectives::{eval_objective, optimal_p, optimal_q, ObjectiveKind};
use crate::simplex::{check_alpha, Channel, Distribution, ReverseConditional};
use crate::solver::{solve, InitPolicy, SnapshotPolicy, SolverConfig};

/// Default cap on the simplex dimension a grid may enumerate; composition
/// counts grow combinatorially beyond it.
pub const DEFAULT_MAX_GRID_DIM: usize = 4;

/// A deterministic lattice over the probability simplex: all points whose
/// coordinates are multiples of `step` (i.e. `k_i / m` with `m = round(1/step)`).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub dimension: usize,
    pub step: f64,
    pub max_dim: usize,
}

impl GridSpec {
    pub fn new(dimension: usize, step: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if !step.is_finite() || step <= 0.0 || step > 1.0 {
            return Err(Error::NonFiniteResult);
        }
        Ok(Self {
            dimension,
            step,
            max_dim: DEFAULT_MAX_GRID_DIM,
        })
    }

    /// Raise (or lower) the dimension guard explicitly.
    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    /// Number of subdivisions per axis.
    pub fn divisions(&self) -> usize {
        (1.0 / self.step).round().max(1.0) as usize
    }

    /// Number of lattice points: C(m + n - 1, n - 1).
    pub fn point_count(&self) -> u128 {
        let m = self.divisions() as u128;
        let n = self.dimension as u128;
        let mut c: u128 = 1;
        for i in 0..n - 1 {
            c = c * (m + i + 1) / (i + 1);
        }
        c
    }

    fn ensure_guard(&self) -> Result<()> {
        if self.dimension > self.max_dim {
            return Err(Error::DimensionTooLarge {
                dim: self.dimension,
                max: self.max_dim,
            });
        }
        Ok(())
    }
}

fn fold_tail<F>(coords: &mut [f64], pos: usize, remaining: usize, m: usize, f: &F, acc: f64, combine: fn(f64, f64) -> f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    if pos == coords.len() - 1 {
        coords[pos] = remaining as f64 / m as f64;
        return combine(acc, f(coords));
    }
    let mut acc = acc;
    for k in 0..=remaining {
        coords[pos] = k as f64 / m as f64;
        acc = fold_tail(coords, pos + 1, remaining - k, m, f, acc, combine);
    }
    acc
}

/// Evaluate `f` at every lattice point and combine the results; sharded over
/// the first coordinate since each point is an independent pure evaluation.
fn fold_grid<F>(grid: &GridSpec, f: F, identity: f64, combine: fn(f64, f64) -> f64) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let m = grid.divisions();
    let dim = grid.dimension;
    if dim == 1 {
        return combine(identity, f(&[1.0]));
    }
    (0..=m)
        .into_par_iter()
        .map(|k1| {
            let mut coords = vec![0.0; dim];
            coords[0] = k1 as f64 / m as f64;
            fold_tail(&mut coords, 1, m - k1, m, &f, identity, combine)
        })
        .reduce(|| identity, combine)
}

/// Grid maximum of the Sibson MI over input distributions: a deterministic
/// lower bound on the true capacity, within `O(step^2)` curvature of it.
pub fn capacity_oracle(w: &Channel, alpha: f64, grid: &GridSpec) -> Result<Nats> {
    check_alpha(alpha)?;
    if grid.dimension != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: grid.dimension,
            right: w.n_in(),
        });
    }
    grid.ensure_guard()?;
    let best = fold_grid(
        grid,
        |coords| {
            let p = Distribution::from_weights(coords).expect("lattice point is a valid weight vector");
            measures::sibson_mi(&p, w, alpha).map(|n| n.0).unwrap_or(f64::NEG_INFINITY)
        },
        f64::NEG_INFINITY,
        f64::max,
    );
    if best.is_finite() {
        Ok(Nats(best))
    } else {
        Err(Error::NonFiniteResult)
    }
}

/// Grid minimum over output laws `q` of the Renyi divergence between the
/// joint `p(x) w(y|x)` and the product `p(x) q(y)`, expanded over the product
/// alphabet. This is the minimization that the Sibson closed form solves
/// exactly, evaluated by brute force.
pub fn sibson_min_oracle(
    p: &Distribution,
    w: &Channel,
    alpha: f64,
    grid: &GridSpec,
) -> Result<Nats> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() < measures::ALPHA_ONE_TOL {
        return Err(Error::AlphaNearOne {
            alpha,
            tol: measures::ALPHA_ONE_TOL,
        });
    }
    if p.len() != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: w.n_in(),
        });
    }
    if grid.dimension != w.n_out() {
        return Err(Error::DimensionMismatch {
            left: grid.dimension,
            right: w.n_out(),
        });
    }
    grid.ensure_guard()?;

    // q-independent factor of each product-alphabet term:
    // sum_x (p(x) w(y|x))^alpha p(x)^(1-alpha) = sum_x p(x) w(y|x)^alpha.
    let mut c_y = vec![0.0; w.n_out()];
    for x in 0..w.n_in() {
        let px = p.prob(x);
        if px == 0.0 {
            continue;
        }
        for (y, &wyx) in w.row(x).iter().enumerate() {
            if wyx > 0.0 {
                c_y[y] += px * wyx.powf(alpha);
            }
        }
    }

    let divergence_at = |q: &[f64]| -> f64 {
        let mut s = 0.0;
        for (y, &c) in c_y.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let qy = q[y];
            if qy == 0.0 {
                if alpha > 1.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            s += c * qy.powf(1.0 - alpha);
        }
        if s > 0.0 {
            s.ln() / (alpha - 1.0)
        } else {
            f64::INFINITY
        }
    };
    let best = fold_grid(grid, divergence_at, f64::INFINITY, f64::min);
    if best.is_finite() {
        Ok(Nats(best))
    } else {
        Err(Error::NonFiniteResult)
    }
}

/// Which equivalence clause a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairKind {
    S1S2,
    A1A2,
    S1A1,
    S2A2,
    AllUniform,
}

impl std::fmt::Display for PairKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PairKind::S1S2 => "S1-S2",
            PairKind::A1A2 => "A1-A2",
            PairKind::S1A1 => "S1-A1",
            PairKind::S2A2 => "S2-A2",
            PairKind::AllUniform => "all-uniform",
        };
        f.write_str(s)
    }
}

/// Largest per-iteration gaps observed between two matched runs.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub pair: PairKind,
    /// Largest L-inf distance between matched (or tilt-matched) p iterates.
    pub max_p_gap: f64,
    /// Largest L-inf distance between matched (or tilt-matched) q iterates.
    pub max_q_gap: f64,
    /// Largest objective-value discrepancy across both F sequences.
    pub max_f_gap: f64,
    pub iterations_compared: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl EquivalenceReport {
    fn from_gaps(pair: PairKind, p: f64, q: f64, f: f64, iters: usize, tol: f64) -> Self {
        Self {
            pair,
            max_p_gap: p,
            max_q_gap: q,
            max_f_gap: f,
            iterations_compared: iters,
            tolerance: tol,
            passed: p <= tol && q <= tol && f <= tol,
        }
    }
}

/// All iterates of one run driven for exactly `k_max` double updates.
struct FixedRun {
    ps: Vec<Distribution>,
    qs: Vec<ReverseConditional>,
    f_kk: Vec<f64>,
    f_next: Vec<f64>,
}

fn run_fixed(
    kind: ObjectiveKind,
    w: &Channel,
    alpha: f64,
    p0: &Distribution,
    k_max: usize,
) -> Result<FixedRun> {
    let mut p = p0.clone();
    let mut q = optimal_q(kind, &p, w, alpha)?.q;
    let mut run = FixedRun {
        ps: vec![p.clone()],
        qs: vec![q.clone()],
        f_kk: vec![eval_objective(kind, &p, &q, w, alpha)?.0],
        f_next: Vec::new(),
    };
    for _ in 0..k_max {
        p = optimal_p(kind, &q, w, alpha)?;
        run.f_next.push(eval_objective(kind, &p, &q, w, alpha)?.0);
        q = optimal_q(kind, &p, w, alpha)?.q;
        run.f_kk.push(eval_objective(kind, &p, &q, w, alpha)?.0);
        run.ps.push(p.clone());
        run.qs.push(q.clone());
    }
    Ok(run)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Run a matched pair of algorithms side by side for `k_max` iterations and
/// report the largest per-iteration deviations from the claimed equivalence.
///
/// `init` is the initial distribution of the first-listed algorithm; for the
/// cross-family pairs (S1-A1, S2-A2) the partner starts from
/// `tilt(init, 1/alpha)` so that the tilt of its iterate matches `init`.
/// [`PairKind::AllUniform`] delegates to [`check_uniform_lockstep`].
pub fn check_equivalence(
    pair: PairKind,
    w: &Channel,
    init: &Distribution,
    alpha: f64,
    k_max: usize,
    tol: f64,
) -> Result<EquivalenceReport> {
    if pair == PairKind::AllUniform {
        return check_uniform_lockstep(w, alpha, k_max, tol);
    }
    check_alpha(alpha)?;
    if let Some(index) = init.probs().iter().position(|&v| v == 0.0) {
        return Err(Error::SupportViolation {
            context: "initial distribution",
            index,
        });
    }

    let (first, second, second_init) = match pair {
        PairKind::S1S2 => (ObjectiveKind::S1, ObjectiveKind::S2, init.clone()),
        PairKind::A1A2 => (ObjectiveKind::A1, ObjectiveKind::A2, init.clone()),
        PairKind::S1A1 => (ObjectiveKind::S1, ObjectiveKind::A1, init.tilt(1.0 / alpha)?),
        PairKind::S2A2 => (ObjectiveKind::S2, ObjectiveKind::A2, init.tilt(1.0 / alpha)?),
        PairKind::AllUniform => unreachable!(),
    };
    let r1 = run_fixed(first, w, alpha, init, k_max)?;
    let r2 = run_fixed(second, w, alpha, &second_init, k_max)?;

    let mut p_gap: f64 = 0.0;
    let mut q_gap: f64 = 0.0;
    for k in 0..=k_max {
        match pair {
            // Same-family clauses: equal p, tilt-matched q.
            PairKind::S1S2 | PairKind::A1A2 => {
                p_gap = p_gap.max(r1.ps[k].linf_distance(&r2.ps[k]));
                q_gap = q_gap.max(r1.qs[k].linf_distance(&r2.qs[k].tilt(alpha)?));
            }
            // Cross-family clauses: tilt-matched p, equal q.
            PairKind::S1A1 | PairKind::S2A2 => {
                p_gap = p_gap.max(r1.ps[k].linf_distance(&r2.ps[k].tilt(alpha)?));
                q_gap = q_gap.max(r1.qs[k].linf_distance(&r2.qs[k]));
            }
            PairKind::AllUniform => unreachable!(),
        }
    }
    let f_gap = max_abs_diff(&r1.f_kk, &r2.f_kk).max(max_abs_diff(&r1.f_next, &r2.f_next));
    Ok(EquivalenceReport::from_gaps(pair, p_gap, q_gap, f_gap, k_max, tol))
}

/// Run all four algorithms from the uniform distribution (which is
/// tilt-invariant, so every pairwise precondition holds at once) and check
/// that they move in lockstep.
pub fn check_uniform_lockstep(
    w: &Channel,
    alpha: f64,
    k_max: usize,
    tol: f64,
) -> Result<EquivalenceReport> {
    check_alpha(alpha)?;
    let uniform = Distribution::uniform(w.n_in())?;
    let s1 = run_fixed(ObjectiveKind::S1, w, alpha, &uniform, k_max)?;
    let s2 = run_fixed(ObjectiveKind::S2, w, alpha, &uniform, k_max)?;
    let a1 = run_fixed(ObjectiveKind::A1, w, alpha, &uniform, k_max)?;
    let a2 = run_fixed(ObjectiveKind::A2, w, alpha, &uniform, k_max)?;

    let mut p_gap: f64 = 0.0;
    let mut q_gap: f64 = 0.0;
    for k in 0..=k_max {
        p_gap = p_gap
            .max(s1.ps[k].linf_distance(&s2.ps[k]))
            .max(a1.ps[k].linf_distance(&a2.ps[k]))
            .max(s1.ps[k].linf_distance(&a1.ps[k].tilt(alpha)?))
            .max(s2.ps[k].linf_distance(&a2.ps[k].tilt(alpha)?));
        q_gap = q_gap
            .max(s1.qs[k].linf_distance(&s2.qs[k].tilt(alpha)?))
            .max(a1.qs[k].linf_distance(&a2.qs[k].tilt(alpha)?))
            .max(s1.qs[k].linf_distance(&a1.qs[k]))
            .max(s2.qs[k].linf_distance(&a2.qs[k]));
    }
    let runs = [&s1, &s2, &a1, &a2];
    let mut f_gap: f64 = 0.0;
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            f_gap = f_gap
                .max(max_abs_diff(&runs[i].f_kk, &runs[j].f_kk))
                .max(max_abs_diff(&runs[i].f_next, &runs[j].f_next));
        }
    }
    Ok(EquivalenceReport::from_gaps(
        PairKind::AllUniform,
        p_gap,
        q_gap,
        f_gap,
        k_max,
        tol,
    ))
}

/// Final capacities of `n_inits` independent runs from random interior
/// starting points.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalConvergenceReport {
    pub capacities: Vec<f64>,
    /// max - min of the final capacities.
    pub spread: f64,
    pub mean: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Check global convergence by running the Sibson iteration from `n_inits`
/// seeded random interior inits; passes when the capacity spread stays within
/// `tol`. Each run stops at `min(tol * 1e-3, 1e-9)` so truncation error stays
/// far below the asserted spread.
pub fn check_global_convergence(
    w: &Channel,
    alpha: f64,
    n_inits: usize,
    seed: u64,
    tol: f64,
) -> Result<GlobalConvergenceReport> {
    if n_inits < 2 {
        return Err(Error::TooFewInits { got: n_inits });
    }
    let epsilon = (tol * 1e-3).min(1e-9);
    let mut capacities = Vec::with_capacity(n_inits);
    for i in 0..n_inits {
        let init = Distribution::random_interior(w.n_in(), seed.wrapping_add(i as u64))?;
        let config = SolverConfig::new(alpha, epsilon)
            .with_init(InitPolicy::Explicit(init))
            .with_max_iter(100_000)
            .with_snapshots(SnapshotPolicy::Off);
        capacities.push(solve(ObjectiveKind::S1, w, &config)?.capacity.0);
    }
    let max = capacities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = capacities.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = capacities.iter().sum::<f64>() / capacities.len() as f64;
    let spread = max - min;
    Ok(GlobalConvergenceReport {
        capacities,
        spread,
        mean,
        tolerance: tol,
        passed: spread <= tol,
    })
}

/// A seeded full-support random channel, for reproducible harness runs.
pub fn random_channel(n_in: usize, n_out: usize, seed: u64) -> Channel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n_in)
        .map(|_| {
            let row: Vec<f64> = (0..n_out).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let sum: f64 = row.iter().sum();
            row.into_iter().map(|v| v / sum).collect()
        })
        .collect();
    Channel::from_rows(&rows).expect("normalized random rows form a channel")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;

    #[test]
    fn grid_point_counts() {
        let g = GridSpec::new(2, 1e-3).unwrap();
        assert_eq!(g.divisions(), 1000);
        assert_eq!(g.point_count(), 1001);

        let g = GridSpec::new(3, 0.005).unwrap();
        assert_eq!(g.point_count(), 20301); // C(202, 2)

        let g = GridSpec::new(1, 0.1).unwrap();
        assert_eq!(g.point_count(), 1);
    }

    #[test]
    fn grid_guard() {
        let g = GridSpec::new(5, 0.02).unwrap();
        let w = channels::nakagawa5();
        let u5 = Distribution::uniform(5).unwrap();
        assert!(matches!(
            sibson_min_oracle(&u5, &w, 1.5, &g),
            Err(Error::DimensionTooLarge { dim: 5, max: 4 })
        ));
        assert!(matches!(
            capacity_oracle(&w, 1.5, &g),
            Err(Error::DimensionTooLarge { .. })
        ));
        // Raising the guard explicitly unblocks the computation.
        let g = GridSpec::new(5, 0.1).unwrap().with_max_dim(5);
        assert!(capacity_oracle(&w, 1.5, &g).is_ok());
    }

    #[test]
    fn capacity_oracle_identity_and_useless() {
        let g = GridSpec::new(3, 0.005).unwrap();
        let id3 = channels::identity(3).unwrap();
        let c = capacity_oracle(&id3, 2.0, &g).unwrap().0;
        assert!((c - 3f64.ln()).abs() < 1e-4);

        let useless = channels::useless3();
        let c = capacity_oracle(&useless, 2.0, &g).unwrap().0;
        assert!(c.abs() < 1e-12);
    }

    #[test]
    fn capacity_oracle_matches_solver_on_bsc() {
        let w = channels::bsc(0.1).unwrap();
        let g = GridSpec::new(2, 1e-3).unwrap();
        for alpha in [0.5, 2.0] {
            let oracle = capacity_oracle(&w, alpha, &g).unwrap().0;
            let solved = solve(ObjectiveKind::S1, &w, &SolverConfig::new(alpha, 1e-12))
                .unwrap()
                .capacity
                .0;
            assert!((oracle - solved).abs() <= 1e-4, "alpha {alpha}");
            // The grid value is a true MI at a feasible point.
            assert!(solved >= oracle - 1e-12);
        }

        // The Arimoto iteration reaches the same maximum (the two capacities
        // coincide).
        let a1 = solve(ObjectiveKind::A1, &w, &SolverConfig::new(2.0, 1e-10))
            .unwrap()
            .capacity
            .0;
        let oracle = capacity_oracle(&w, 2.0, &g).unwrap().0;
        assert!((a1 - oracle).abs() <= 1e-4);
    }

    #[test]
    fn grid_max_is_step_stable() {
        // Richardson-style sanity for the O(step^2) tolerance model.
        let w = random_channel(2, 3, 5);
        let coarse = capacity_oracle(&w, 2.0, &GridSpec::new(2, 2e-3).unwrap()).unwrap().0;
        let fine = capacity_oracle(&w, 2.0, &GridSpec::new(2, 1e-3).unwrap()).unwrap().0;
        assert!((coarse - fine).abs() < 1e-4);
    }

    #[test]
    fn min_oracle_agrees_with_closed_form() {
        let u2 = Distribution::uniform(2).unwrap();
        let w = channels::bsc(0.1).unwrap();
        let g = GridSpec::new(2, 1e-3).unwrap();
        let m = sibson_min_oracle(&u2, &w, 2.0, &g).unwrap().0;
        assert!((m - 0.49469624183610716).abs() < 1e-4);
        let closed = measures::sibson_mi(&u2, &w, 2.0).unwrap().0;
        assert!(m >= closed - 1e-12, "grid min cannot undercut the true min");
    }

    #[test]
    fn min_oracle_is_zero_for_useless_channel() {
        // The optimal output law equals the shared row, which lies on the
        // step-0.1 lattice.
        let w = channels::useless3();
        let p = Distribution::from_weights(&[0.3, 0.3, 0.4]).unwrap();
        let g = GridSpec::new(3, 0.1).unwrap();
        let m = sibson_min_oracle(&p, &w, 2.0, &g).unwrap().0;
        assert!(m.abs() < 1e-14);
    }

    #[test]
    fn min_oracle_internal_evaluator_matches_joint_divergence() {
        // The factored per-point evaluation must agree with the direct
        // product-alphabet expansion.
        let p = Distribution::from_weights(&[0.3, 0.7]).unwrap();
        let w = channels::bsc(0.2).unwrap();
        for alpha in [0.5, 2.0] {
            for q in [[0.5, 0.5], [0.137, 0.863], [0.9, 0.1]] {
                let q = Distribution::from_weights(&q).unwrap();
                let direct = measures::renyi_divergence_joint(&p, &w, &q, alpha).unwrap().0;
                // One-point grid pinned at q via a degenerate fold.
                let mut c_y = [0.0; 2];
                for x in 0..2 {
                    for (y, c) in c_y.iter_mut().enumerate() {
                        *c += p.prob(x) * w.prob(x, y).powf(alpha);
                    }
                }
                let s: f64 = (0..2).map(|y| c_y[y] * q.prob(y).powf(1.0 - alpha)).sum();
                let factored = s.ln() / (alpha - 1.0);
                assert!((direct - factored).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn equivalence_pairs_on_the_example_channel() {
        let w = channels::nakagawa5();
        let uniform = Distribution::uniform(5).unwrap();
        for pair in [PairKind::S1S2, PairKind::A1A2, PairKind::S1A1, PairKind::S2A2] {
            let report = check_equivalence(pair, &w, &uniform, 1.5, 50, 1e-9).unwrap();
            assert!(report.passed, "{pair}: {report:?}");
            assert_eq!(report.iterations_compared, 50);
        }
    }

    #[test]
    fn equivalence_cross_family_with_random_init() {
        let w = random_channel(3, 4, 21);
        let init = Distribution::random_interior(3, 5).unwrap();
        let report = check_equivalence(PairKind::S1A1, &w, &init, 0.5, 50, 1e-9).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn mismatched_inits_break_the_equivalence() {
        // Violating the matched-init precondition must show up as large gaps.
        let w = channels::nakagawa5();
        let p_a = Distribution::random_interior(5, 1).unwrap();
        let p_b = Distribution::random_interior(5, 2).unwrap();
        let r1 = run_fixed(ObjectiveKind::S1, &w, 1.5, &p_a, 10).unwrap();
        let r2 = run_fixed(ObjectiveKind::S2, &w, 1.5, &p_b, 10).unwrap();
        let mut p_gap: f64 = 0.0;
        for k in 0..=10 {
            p_gap = p_gap.max(r1.ps[k].linf_distance(&r2.ps[k]));
        }
        assert!(p_gap > 1e-9);
    }

    #[test]
    fn uniform_lockstep_reports() {
        let w = channels::nakagawa5();
        let r = check_uniform_lockstep(&w, 1.5, 50, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");

        let id4 = channels::identity(4).unwrap();
        let r = check_uniform_lockstep(&id4, 3.0, 5, 1e-9).unwrap();
        assert!(r.passed);

        let w = random_channel(5, 3, 17);
        let r = check_uniform_lockstep(&w, 0.7, 50, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");

        // AllUniform routed through check_equivalence hits the same code.
        let via_pair = check_equivalence(
            PairKind::AllUniform,
            &channels::identity(3).unwrap(),
            &Distribution::uniform(3).unwrap(),
            2.0,
            5,
            1e-9,
        )
        .unwrap();
        assert!(via_pair.passed);
    }

    #[test]
    fn global_convergence_identity() {
        let w = channels::identity(4).unwrap();
        let r = check_global_convergence(&w, 2.0, 5, 3, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.mean - 4f64.ln()).abs() < 1e-9);

        assert!(matches!(
            check_global_convergence(&w, 2.0, 1, 3, 1e-9),
            Err(Error::TooFewInits { got: 1 })
        ));
    }

    #[test]
    fn global_convergence_matches_oracle_on_bsc() {
        let w = channels::bsc(0.1).unwrap();
        let r = check_global_convergence(&w, 2.0, 20, 9, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        let oracle = capacity_oracle(&w, 2.0, &GridSpec::new(2, 1e-3).unwrap()).unwrap().0;
        assert!((r.mean - oracle).abs() <= 1e-4);
    }

    #[test]
    fn grid_max_invariant_under_tilt() {
        // max_p F(p) and max_p F(tilt(p)) coincide for continuous F; checked
        // for the Sibson MI on a binary-input grid.
        let w = random_channel(2, 3, 33);
        let grid = GridSpec::new(2, 1e-3).unwrap();
        for alpha in [0.5, 2.0] {
            let direct = capacity_oracle(&w, alpha, &grid).unwrap().0;
            let tilted = fold_grid(
                &grid,
                |coords| {
                    let p = Distribution::from_weights(coords).unwrap();
                    match p.tilt(alpha) {
                        Ok(t) => measures::sibson_mi(&t, &w, alpha).unwrap().0,
                        Err(_) => f64::NEG_INFINITY,
                    }
                },
                f64::NEG_INFINITY,
                f64::max,
            );
            assert!((direct - tilted).abs() <= 2e-4, "alpha {alpha}");
        }
    }
}
