//! The five variational objectives behind the alternating-maximization
//! algorithms, with their closed-form block maximizers.
//!
//! Each objective `F(p, q)` attains the matching mutual information at its
//! optimal reverse conditional:
//!
//! | kind    | F(p, q)                                                    | max over q    |
//! |---------|------------------------------------------------------------|---------------|
//! | Shannon | `E[ln(q(X|Y)/p(X))]`                                       | Shannon MI    |
//! | S1      | `(a/(a-1)) ln sum p(x)^(1/a) w(y|x) q(x|y)^((a-1)/a)`      | Sibson MI     |
//! | S2      | S1 with the tilted conditional `q_a` in place of `q`       | Sibson MI     |
//! | A1      | `H_a(p) - (a/(1-a)) ln sum p(x) w(y|x) q(x|y)^((a-1)/a)`   | Arimoto MI    |
//! | A2      | A1 with the tilted conditional `q_a` in place of `q`       | Arimoto MI    |
//!
//! Skip-zero convention: every term of the double sums carries a `w(y|x)`
//! factor, so `(x, y)` pairs with `w(y|x) = 0` (or `p(x) = 0`) are skipped
//! before any exponentiation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{self, Nats, ALPHA_ONE_TOL};
use crate::simplex::{check_alpha, Channel, Distribution, ReverseConditional};

/// Which variational objective an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveKind {
    Shannon,
    S1,
    S2,
    A1,
    A2,
}

impl ObjectiveKind {
    /// The four order-alpha kinds, in canonical order.
    pub const ALPHA_KINDS: [ObjectiveKind; 4] = [
        ObjectiveKind::S1,
        ObjectiveKind::S2,
        ObjectiveKind::A1,
        ObjectiveKind::A2,
    ];

    pub const ALL: [ObjectiveKind; 5] = [
        ObjectiveKind::Shannon,
        ObjectiveKind::S1,
        ObjectiveKind::S2,
        ObjectiveKind::A1,
        ObjectiveKind::A2,
    ];

    /// True for the kinds parameterized by an order alpha != 1.
    pub fn is_alpha(self) -> bool {
        !matches!(self, ObjectiveKind::Shannon)
    }

    pub fn label(self) -> &'static str {
        match self {
            ObjectiveKind::Shannon => "shannon",
            ObjectiveKind::S1 => "s1",
            ObjectiveKind::S2 => "s2",
            ObjectiveKind::A1 => "a1",
            ObjectiveKind::A2 => "a2",
        }
    }
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Result of a q-update: the maximizing reverse conditional plus the output
/// symbols that were unreachable under `p` (their columns are set uniform and
/// carry zero weight in every objective).
#[derive(Debug, Clone, Serialize)]
pub struct QUpdate {
    pub q: ReverseConditional,
    pub unreachable_outputs: Vec<usize>,
}

fn check_alpha_for(kind: ObjectiveKind, alpha: f64) -> Result<()> {
    if kind.is_alpha() {
        check_alpha(alpha)?;
        if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
            return Err(Error::AlphaNearOne {
                alpha,
                tol: ALPHA_ONE_TOL,
            });
        }
    }
    Ok(())
}

fn check_dims(p: &Distribution, q: &ReverseConditional, w: &Channel) -> Result<()> {
    if p.len() != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: w.n_in(),
        });
    }
    check_q_dims(q, w)
}

fn check_q_dims(q: &ReverseConditional, w: &Channel) -> Result<()> {
    if q.n_in() != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: q.n_in(),
            right: w.n_in(),
        });
    }
    if q.n_out() != w.n_out() {
        return Err(Error::DimensionMismatch {
            left: q.n_out(),
            right: w.n_out(),
        });
    }
    Ok(())
}

/// Core double sum `sum_{x,y} pre(x) w(y|x) q(x|y)^((a-1)/a)` shared by the
/// S1 and A1 objectives, where `pre(x)` is `p(x)^(1/a)` or `p(x)`.
fn weighted_q_sum(
    pre: &[f64],
    q: &ReverseConditional,
    w: &Channel,
    alpha: f64,
) -> Result<f64> {
    let e = (alpha - 1.0) / alpha;
    let mut total = 0.0;
    for (x, &pre_x) in pre.iter().enumerate() {
        if pre_x == 0.0 {
            continue;
        }
        for (y, &wyx) in w.row(x).iter().enumerate() {
            if wyx == 0.0 {
                continue;
            }
            let qxy = q.prob(x, y);
            if qxy == 0.0 {
                if e < 0.0 {
                    return Err(Error::SupportViolation {
                        context: "q(x|y) on a reachable pair",
                        index: x,
                    });
                }
                continue;
            }
            total += pre_x * wyx * qxy.powf(e);
        }
    }
    Ok(total)
}

/// Evaluate the objective `F(kind)` at `(p, q)` for the channel `w`.
pub fn eval_objective(
    kind: ObjectiveKind,
    p: &Distribution,
    q: &ReverseConditional,
    w: &Channel,
    alpha: f64,
) -> Result<Nats> {
    check_alpha_for(kind, alpha)?;
    check_dims(p, q, w)?;
    let value = match kind {
        ObjectiveKind::Shannon => {
            let mut f = 0.0;
            for x in 0..w.n_in() {
                let px = p.prob(x);
                if px == 0.0 {
                    continue;
                }
                let ln_px = px.ln();
                for (y, &wyx) in w.row(x).iter().enumerate() {
                    if wyx == 0.0 {
                        continue;
                    }
                    let qxy = q.prob(x, y);
                    if qxy == 0.0 {
                        return Err(Error::SupportViolation {
                            context: "q(x|y) on a reachable pair",
                            index: x,
                        });
                    }
                    f += px * wyx * (qxy.ln() - ln_px);
                }
            }
            f
        }
        ObjectiveKind::S1 => eval_s1(p, q, w, alpha)?,
        ObjectiveKind::S2 => eval_s1(p, &q.tilt(alpha)?, w, alpha)?,
        ObjectiveKind::A1 => eval_a1(p, q, w, alpha)?,
        ObjectiveKind::A2 => eval_a1(p, &q.tilt(alpha)?, w, alpha)?,
    };
    if value.is_finite() {
        Ok(Nats(value))
    } else {
        Err(Error::NonFiniteResult)
    }
}

fn eval_s1(p: &Distribution, q: &ReverseConditional, w: &Channel, alpha: f64) -> Result<f64> {
    let pre: Vec<f64> = p
        .probs()
        .iter()
        .map(|&v| if v == 0.0 { 0.0 } else { v.powf(1.0 / alpha) })
        .collect();
    let total = weighted_q_sum(&pre, q, w, alpha)?;
    Ok(alpha / (alpha - 1.0) * total.ln())
}

fn eval_a1(p: &Distribution, q: &ReverseConditional, w: &Channel, alpha: f64) -> Result<f64> {
    let h = measures::renyi_entropy(p, alpha)?.0;
    let total = weighted_q_sum(p.probs(), q, w, alpha)?;
    Ok(h - alpha / (1.0 - alpha) * total.ln())
}

/// The reverse conditional maximizing `F(kind)(p, .)`, columnwise:
///
/// - Shannon, A2: `q(x|y) ∝ p(x) w(y|x)` (the posterior)
/// - S1:          `q(x|y) ∝ p(x) w(y|x)^a`
/// - S2:          `q(x|y) ∝ p(x)^(1/a) w(y|x)`
/// - A1:          `q(x|y) ∝ p(x)^a w(y|x)^a`
pub fn optimal_q(
    kind: ObjectiveKind,
    p: &Distribution,
    w: &Channel,
    alpha: f64,
) -> Result<QUpdate> {
    check_alpha_for(kind, alpha)?;
    if p.len() != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: w.n_in(),
        });
    }
    let p_factor: Vec<f64> = match kind {
        ObjectiveKind::Shannon | ObjectiveKind::A2 | ObjectiveKind::S1 => p.probs().to_vec(),
        ObjectiveKind::S2 => p
            .probs()
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v.powf(1.0 / alpha) })
            .collect(),
        ObjectiveKind::A1 => p
            .probs()
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v.powf(alpha) })
            .collect(),
    };
    let w_pow = |wyx: f64| -> f64 {
        match kind {
            ObjectiveKind::Shannon | ObjectiveKind::A2 | ObjectiveKind::S2 => wyx,
            ObjectiveKind::S1 | ObjectiveKind::A1 => {
                if wyx == 0.0 {
                    0.0
                } else {
                    wyx.powf(alpha)
                }
            }
        }
    };

    let mut columns = Vec::with_capacity(w.n_out());
    let mut unreachable = Vec::new();
    let mut weights = vec![0.0; w.n_in()];
    for y in 0..w.n_out() {
        let mut sum = 0.0;
        for x in 0..w.n_in() {
            let v = p_factor[x] * w_pow(w.prob(x, y));
            weights[x] = v;
            sum += v;
        }
        if sum == 0.0 {
            unreachable.push(y);
            columns.push(Distribution::uniform(w.n_in())?);
        } else {
            columns.push(Distribution::from_weights(&weights)?);
        }
    }
    Ok(QUpdate {
        q: ReverseConditional::from_columns(columns)?,
        unreachable_outputs: unreachable,
    })
}

/// The input distribution maximizing `F(kind)(., q)`:
///
/// - Shannon: `p(x) ∝ prod_y q(x|y)^w(y|x)`
/// - S1:      `p(x) ∝ (sum_y w(y|x) q(x|y)^((a-1)/a))^(a/(a-1))`
/// - S2:      as S1 with the tilted conditional inside
/// - A1:      `p(x) ∝ (sum_y w(y|x) q(x|y)^((a-1)/a))^(1/(a-1))`
/// - A2:      as A1 with the tilted conditional inside
///
/// Normalization runs in the log domain (exponents are shifted so the largest
/// term is 1) — the outer exponent grows without bound as alpha approaches 1
/// and flips sign below it.
pub fn optimal_p(
    kind: ObjectiveKind,
    q: &ReverseConditional,
    w: &Channel,
    alpha: f64,
) -> Result<Distribution> {
    check_alpha_for(kind, alpha)?;
    check_q_dims(q, w)?;

    // Per-input log-scores; None marks a vanished inner sum (p(x) = 0).
    let scores: Vec<Option<f64>> = match kind {
        ObjectiveKind::Shannon => {
            let mut out = Vec::with_capacity(w.n_in());
            for x in 0..w.n_in() {
                let mut acc = 0.0;
                for (y, &wyx) in w.row(x).iter().enumerate() {
                    if wyx == 0.0 {
                        continue;
                    }
                    let qxy = q.prob(x, y);
                    if qxy == 0.0 {
                        return Err(Error::SupportViolation {
                            context: "q(x|y) on a reachable pair",
                            index: x,
                        });
                    }
                    acc += wyx * qxy.ln();
                }
                out.push(Some(acc));
            }
            out
        }
        _ => {
            let qq = match kind {
                ObjectiveKind::S2 | ObjectiveKind::A2 => &q.tilt(alpha)?,
                _ => q,
            };
            let e_inner = (alpha - 1.0) / alpha;
            let e_outer = match kind {
                ObjectiveKind::S1 | ObjectiveKind::S2 => alpha / (alpha - 1.0),
                _ => 1.0 / (alpha - 1.0),
            };
            let mut out = Vec::with_capacity(w.n_in());
            for x in 0..w.n_in() {
                let mut inner = 0.0;
                for (y, &wyx) in w.row(x).iter().enumerate() {
                    if wyx == 0.0 {
                        continue;
                    }
                    let qxy = qq.prob(x, y);
                    if qxy == 0.0 {
                        if e_inner < 0.0 {
                            return Err(Error::SupportViolation {
                                context: "q(x|y) on a reachable pair",
                                index: x,
                            });
                        }
                        continue;
                    }
                    inner += wyx * qxy.powf(e_inner);
                }
                // inner = 0 only for alpha > 1, where the outer exponent is
                // positive and the weight is an honest zero.
                out.push(if inner == 0.0 {
                    None
                } else {
                    Some(e_outer * inner.ln())
                });
            }
            out
        }
    };

    let max_score = scores
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |m, &s| m.max(s));
    if !max_score.is_finite() {
        return Err(Error::DegenerateNormalizer);
    }
    let weights: Vec<f64> = scores
        .iter()
        .map(|s| match s {
            Some(v) => (v - max_score).exp(),
            None => 0.0,
        })
        .collect();
    Distribution::from_weights(&weights)
}
