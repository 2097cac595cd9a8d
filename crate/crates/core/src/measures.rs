//! Order-alpha information measures in every closed form the theory provides,
//! so the forms can be cross-checked against each other.
//!
//! All values are in nats (natural logarithm throughout). Each measure returns
//! an error instead of a NaN when its preconditions are violated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{check_alpha, Channel, Distribution};

/// Below this distance from 1, the alpha-measures dispatch to their Shannon
/// counterparts; between this and ~1e-4 the alpha formula is evaluated
/// directly and loses conditioning gracefully.
pub const ALPHA_ONE_TOL: f64 = 1e-9;

/// An information value in natural-log units.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Nats(pub f64);

impl Nats {
    pub fn value(self) -> f64 {
        self.0
    }

    /// Display-only conversion; all computation stays in nats.
    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl std::fmt::Display for Nats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

fn check_alpha_not_one(alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return Err(Error::AlphaNearOne {
            alpha,
            tol: ALPHA_ONE_TOL,
        });
    }
    Ok(())
}

fn check_dims(p: &Distribution, w: &Channel) -> Result<()> {
    if p.len() != w.n_in() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: w.n_in(),
        });
    }
    Ok(())
}

fn finite(v: f64) -> Result<Nats> {
    if v.is_finite() {
        Ok(Nats(v))
    } else {
        Err(Error::NonFiniteResult)
    }
}

/// Renyi entropy of order alpha: `(1/(1-alpha)) ln sum_x p(x)^alpha`.
pub fn renyi_entropy(p: &Distribution, alpha: f64) -> Result<Nats> {
    check_alpha_not_one(alpha)?;
    let sum: f64 = p
        .probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v.powf(alpha))
        .sum();
    finite(sum.ln() / (1.0 - alpha))
}

/// Renyi divergence of order alpha:
/// `(1/(alpha-1)) ln sum_x p(x)^alpha q(x)^(1-alpha)`.
///
/// For `alpha > 1` the support of `p` must be contained in the support of `q`.
pub fn renyi_divergence(p: &Distribution, q: &Distribution, alpha: f64) -> Result<Nats> {
    check_alpha_not_one(alpha)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut sum = 0.0;
    for (index, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            if alpha > 1.0 {
                return Err(Error::SupportViolation { context: "q", index });
            }
            // alpha < 1: q^(1-alpha) = 0 kills the term.
            continue;
        }
        sum += pi.powf(alpha) * qi.powf(1.0 - alpha);
    }
    finite(sum.ln() / (alpha - 1.0))
}

/// Shannon entropy `H(X) = -sum_x p(x) ln p(x)`, with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &Distribution) -> Nats {
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.ln())
        .sum();
    Nats(h)
}

/// Shannon conditional entropy `H(X|Y)` of the joint law `p(x) w(y|x)`.
pub fn shannon_cond_entropy(p: &Distribution, w: &Channel) -> Result<Nats> {
    check_dims(p, w)?;
    // Output marginal first, then H(X|Y) = -sum_{x,y} j(x,y) ln(j(x,y)/p_Y(y)).
    let mut p_y = vec![0.0; w.n_out()];
    for x in 0..w.n_in() {
        let px = p.prob(x);
        if px == 0.0 {
            continue;
        }
        for (y, &wyx) in w.row(x).iter().enumerate() {
            p_y[y] += px * wyx;
        }
    }
    let mut h = 0.0;
    for x in 0..w.n_in() {
        let px = p.prob(x);
        if px == 0.0 {
            continue;
        }
        for (y, &wyx) in w.row(x).iter().enumerate() {
            let joint = px * wyx;
            if joint > 0.0 {
                h -= joint * (joint / p_y[y]).ln();
            }
        }
    }
    finite(h)
}

/// Shannon mutual information `I(X;Y) = H(X) - H(X|Y)`.
pub fn shannon_mi(p: &Distribution, w: &Channel) -> Result<Nats> {
    let h = shannon_entropy(p);
    let hc = shannon_cond_entropy(p, w)?;
    finite(h.0 - hc.0)
}

/// Gallager error exponent:
/// `E0(rho, p) = -ln sum_y (sum_x p(x) w(y|x)^(1/(1+rho)))^(1+rho)`.
pub fn gallager_e0(rho: f64, p: &Distribution, w: &Channel) -> Result<Nats> {
    if !rho.is_finite() || rho <= -1.0 {
        return Err(Error::RhoOutOfRange { rho });
    }
    check_dims(p, w)?;
    let inner_exp = 1.0 / (1.0 + rho);
    let mut outer = 0.0;
    for y in 0..w.n_out() {
        let mut inner = 0.0;
        for x in 0..w.n_in() {
            let px = p.prob(x);
            let wyx = w.prob(x, y);
            if px == 0.0 || wyx == 0.0 {
                continue;
            }
            inner += px * wyx.powf(inner_exp);
        }
        if inner > 0.0 {
            outer += inner.powf(1.0 + rho);
        }
    }
    finite(-outer.ln())
}

/// Arimoto conditional entropy of order alpha:
/// `(alpha/(1-alpha)) ln sum_y (sum_x p(x)^alpha w(y|x)^alpha)^(1/alpha)`.
pub fn arimoto_cond_entropy(p: &Distribution, w: &Channel, alpha: f64) -> Result<Nats> {
    check_alpha_not_one(alpha)?;
    check_dims(p, w)?;
    let p_pow: Vec<f64> = p
        .probs()
        .iter()
        .map(|&v| if v == 0.0 { 0.0 } else { v.powf(alpha) })
        .collect();
    let mut outer = 0.0;
    for y in 0..w.n_out() {
        let mut inner = 0.0;
        for (x, &pp) in p_pow.iter().enumerate() {
            let wyx = w.prob(x, y);
            if pp == 0.0 || wyx == 0.0 {
                continue;
            }
            inner += pp * wyx.powf(alpha);
        }
        if inner > 0.0 {
            outer += inner.powf(1.0 / alpha);
        }
    }
    finite(alpha / (1.0 - alpha) * outer.ln())
}

/// Sibson mutual information of order alpha, closed form:
/// `(alpha/(alpha-1)) ln sum_y (sum_x p(x) w(y|x)^alpha)^(1/alpha)`.
///
/// Dispatches to [`shannon_mi`] within [`ALPHA_ONE_TOL`] of `alpha = 1`.
/// Unreachable outputs (inner sum zero) contribute nothing.
pub fn sibson_mi(p: &Distribution, w: &Channel, alpha: f64) -> Result<Nats> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return shannon_mi(p, w);
    }
    check_dims(p, w)?;
    let mut outer = 0.0;
    for y in 0..w.n_out() {
        let mut inner = 0.0;
        for x in 0..w.n_in() {
            let px = p.prob(x);
            let wyx = w.prob(x, y);
            if px == 0.0 || wyx == 0.0 {
                continue;
            }
            inner += px * wyx.powf(alpha);
        }
        if inner > 0.0 {
            outer += inner.powf(1.0 / alpha);
        }
    }
    finite(alpha / (alpha - 1.0) * outer.ln())
}

/// Arimoto mutual information of order alpha:
/// `H_alpha(X) - H_alpha^A(X|Y)`.
///
/// Dispatches to [`shannon_mi`] within [`ALPHA_ONE_TOL`] of `alpha = 1`.
pub fn arimoto_mi(p: &Distribution, w: &Channel, alpha: f64) -> Result<Nats> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return shannon_mi(p, w);
    }
    let h = renyi_entropy(p, alpha)?;
    let hc = arimoto_cond_entropy(p, w, alpha)?;
    finite(h.0 - hc.0)
}

/// Renyi divergence between the joint law `p(x) w(y|x)` and the product law
/// `p(x) q_out(y)`, expanded directly over the product alphabet X x Y.
///
/// Terms with `p(x) w(y|x) = 0` are skipped before any exponentiation.
pub fn renyi_divergence_joint(
    p: &Distribution,
    w: &Channel,
    q_out: &Distribution,
    alpha: f64,
) -> Result<Nats> {
    check_alpha_not_one(alpha)?;
    check_dims(p, w)?;
    if q_out.len() != w.n_out() {
        return Err(Error::DimensionMismatch {
            left: q_out.len(),
            right: w.n_out(),
        });
    }
    let mut sum = 0.0;
    for x in 0..w.n_in() {
        let px = p.prob(x);
        if px == 0.0 {
            continue;
        }
        for (y, &wyx) in w.row(x).iter().enumerate() {
            if wyx == 0.0 {
                continue;
            }
            let qy = q_out.prob(y);
            if qy == 0.0 {
                if alpha > 1.0 {
                    return Err(Error::SupportViolation {
                        context: "output law",
                        index: y,
                    });
                }
                continue;
            }
            let joint = px * wyx;
            sum += joint.powf(alpha) * (px * qy).powf(1.0 - alpha);
        }
    }
    finite(sum.ln() / (alpha - 1.0))
}
