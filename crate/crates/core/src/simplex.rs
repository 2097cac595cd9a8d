//! Probability vectors on finite alphabets, row-stochastic channels, and the
//! tilt algebra that links the Sibson and Arimoto quantities.
//!
//! Everything here is immutable after construction and safe to share across
//! threads; all operations are pure functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for accepting a channel row sum away from 1.
pub const DEFAULT_ROW_TOL: f64 = 1e-3;

/// Minimum entry guaranteed by [`Distribution::random_interior`].
pub const INTERIOR_FLOOR: f64 = 1e-6;

fn check_weights(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::ZeroDimension);
    }
    let mut sum = 0.0;
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
        sum += value;
    }
    if sum <= 0.0 {
        return Err(Error::AllZero);
    }
    Ok(sum)
}

/// A probability vector over a finite alphabet `0..n-1`.
///
/// Entries are non-negative and sum to 1 (within 1e-12) after construction.
/// Probabilities are stored in the linear domain as `f64`; orders alpha up to
/// roughly 50 stay in range on realistic inputs, beyond that powers of small
/// entries may underflow to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Normalize non-negative `weights` to a probability vector.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let sum = check_weights(weights)?;
        Ok(Self {
            probs: weights.iter().map(|w| w / sum).collect(),
        })
    }

    /// The uniform distribution on `n` symbols.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// A full-support random point of the simplex, deterministic in `seed`.
    ///
    /// Every entry is at least [`INTERIOR_FLOOR`], so downstream negative
    /// exponents never hit an exact zero.
    pub fn random_interior(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let sum: f64 = w.iter().sum();
        // Floor at twice the guaranteed minimum, then renormalize once; the
        // renormalization can shrink entries by at most a factor 1/(1+2n*floor).
        for v in w.iter_mut() {
            *v = (*v / sum).max(2.0 * INTERIOR_FLOOR);
        }
        let sum: f64 = w.iter().sum();
        for v in w.iter_mut() {
            *v /= sum;
        }
        Ok(Self { probs: w })
    }

    /// Number of symbols in the alphabet.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The probability vector as a slice.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p(x)`.
    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// The alpha-tilted distribution: `p(x)^alpha / sum_x p(x)^alpha`.
    ///
    /// Zero entries stay zero (`0^t = 0` for `t > 0`), so the support is
    /// preserved for every positive order.
    pub fn tilt(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let powered: Vec<f64> = self
            .probs
            .iter()
            .map(|&p| if p == 0.0 { 0.0 } else { p.powf(alpha) })
            .collect();
        Self::from_weights(&powered)
    }

    /// Largest absolute componentwise difference.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Sum of absolute componentwise differences.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::NonPositiveAlpha { alpha });
    }
    Ok(())
}

/// A discrete memoryless channel: a row-stochastic matrix with entry
/// `(x, y) = w(y|x)`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    entries: Vec<f64>,
    n_in: usize,
    n_out: usize,
    renormalized: bool,
}

impl Channel {
    /// Validate and build a channel, renormalizing each row to sum exactly
    /// to 1. Rows whose sum is further than [`DEFAULT_ROW_TOL`] from 1 are
    /// rejected.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows_with_tol(rows, DEFAULT_ROW_TOL)
    }

    /// As [`Channel::from_rows`] with an explicit row-sum tolerance.
    pub fn from_rows_with_tol(rows: &[Vec<f64>], row_tol: f64) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let n_out = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * n_out);
        let mut renormalized = false;
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n_out {
                return Err(Error::DimensionMismatch {
                    left: r.len(),
                    right: n_out,
                });
            }
            let mut sum = 0.0;
            for (col, &value) in r.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite { index: col, value });
                }
                if value < 0.0 {
                    return Err(Error::NegativeEntry { row, col, value });
                }
                sum += value;
            }
            // Inclusive boundary: rows printed to the tolerance's own number
            // of decimals (e.g. a 0.999 sum at tol 1e-3) must stay accepted.
            if (sum - 1.0).abs() > row_tol + 1e-12 {
                return Err(Error::RowSumOutOfTolerance { row, sum, tol: row_tol });
            }
            if (sum - 1.0).abs() > 1e-9 {
                renormalized = true;
            }
            // Already-normalized rows pass through bit-exactly, so an
            // exported channel reloads to an identical matrix.
            if (sum - 1.0).abs() <= 1e-15 {
                entries.extend_from_slice(r);
            } else {
                entries.extend(r.iter().map(|v| v / sum));
            }
        }
        Ok(Self {
            entries,
            n_in: rows.len(),
            n_out,
            renormalized,
        })
    }

    /// Fixture path: keep the given entries verbatim, without row
    /// renormalization. Only used for bundled matrices whose published
    /// decimals must be preserved exactly.
    pub(crate) fn from_rows_verbatim(rows: &[&[f64]]) -> Self {
        let n_out = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * n_out);
        for r in rows {
            debug_assert_eq!(r.len(), n_out);
            debug_assert!(r.iter().all(|&v| v >= 0.0 && v.is_finite()));
            entries.extend_from_slice(r);
        }
        Self {
            entries,
            n_in: rows.len(),
            n_out,
            renormalized: false,
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Row `x` of the matrix: the output law given input `x`.
    pub fn row(&self, x: usize) -> &[f64] {
        &self.entries[x * self.n_out..(x + 1) * self.n_out]
    }

    /// `w(y|x)`.
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.entries[x * self.n_out + y]
    }

    /// All entries, row-major.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Whether any row needed renormalization by more than 1e-9.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }
}

/// A reverse conditional `q(x|y)`: one distribution over inputs per output
/// symbol. This is the free block variable of all the variational objectives.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ReverseConditional {
    columns: Vec<Distribution>,
}

impl ReverseConditional {
    /// Build from per-output distributions over the input alphabet.
    pub fn from_columns(columns: Vec<Distribution>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let n_in = columns[0].len();
        for c in &columns {
            if c.len() != n_in {
                return Err(Error::DimensionMismatch {
                    left: c.len(),
                    right: n_in,
                });
            }
        }
        Ok(Self { columns })
    }

    pub fn n_out(&self) -> usize {
        self.columns.len()
    }

    pub fn n_in(&self) -> usize {
        self.columns[0].len()
    }

    /// The distribution over inputs for output `y`.
    pub fn column(&self, y: usize) -> &Distribution {
        &self.columns[y]
    }

    pub fn columns(&self) -> &[Distribution] {
        &self.columns
    }

    /// `q(x|y)`.
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.columns[y].prob(x)
    }

    /// Tilt every column: column `y` becomes the alpha-tilt of `q(.|y)`.
    pub fn tilt(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let columns = self
            .columns
            .iter()
            .map(|c| c.tilt(alpha))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { columns })
    }

    /// Largest absolute entry difference over all columns.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.n_out(), other.n_out());
        self.columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.linf_distance(b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_weights_normalizes() {
        let d = Distribution::from_weights(&[2.0, 2.0]).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);

        let d = Distribution::from_weights(&[1.0, 0.0, 3.0]).unwrap();
        assert_eq!(d.probs(), &[0.25, 0.0, 0.75]);

        let d = Distribution::from_weights(&[0.3, 0.3, 0.3]).unwrap();
        for &p in d.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn from_weights_rejects_bad_input() {
        assert!(matches!(
            Distribution::from_weights(&[0.5, -0.1]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            Distribution::from_weights(&[0.0, 0.0]),
            Err(Error::AllZero)
        ));
        assert!(matches!(
            Distribution::from_weights(&[f64::NAN, 1.0]),
            Err(Error::NonFinite { index: 0, .. })
        ));
        assert!(matches!(
            Distribution::from_weights(&[1.0, f64::INFINITY]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(matches!(
            Distribution::from_weights(&[]),
            Err(Error::ZeroDimension)
        ));
    }

    #[test]
    fn uniform_basics() {
        let d = Distribution::uniform(5).unwrap();
        assert_eq!(d.probs(), &[0.2; 5]);
        assert_eq!(Distribution::uniform(1).unwrap().probs(), &[1.0]);
        assert_eq!(Distribution::uniform(2).unwrap().probs(), &[0.5, 0.5]);
        assert!(matches!(Distribution::uniform(0), Err(Error::ZeroDimension)));
    }

    #[test]
    fn random_interior_contract() {
        let d = Distribution::random_interior(3, 7).unwrap();
        let sum: f64 = d.probs().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(d.probs().iter().all(|&p| p >= INTERIOR_FLOOR));

        let again = Distribution::random_interior(3, 7).unwrap();
        assert_eq!(d, again, "same seed must give identical output");

        let other = Distribution::random_interior(3, 8).unwrap();
        assert_ne!(d, other);

        assert_eq!(Distribution::random_interior(1, 0).unwrap().probs(), &[1.0]);
    }

    #[test]
    fn tilt_hand_values() {
        let u = Distribution::uniform(2).unwrap();
        assert_eq!(u.tilt(2.0).unwrap().probs(), &[0.5, 0.5]);

        // (0.8, 0.2) at alpha=2: (0.64, 0.04) / 0.68
        let d = Distribution::from_weights(&[0.8, 0.2]).unwrap();
        let t = d.tilt(2.0).unwrap();
        assert!((t.prob(0) - 0.9411764705882353).abs() < 1e-15);
        assert!((t.prob(1) - 0.0588235294117647).abs() < 1e-15);

        assert!(matches!(
            d.tilt(0.0),
            Err(Error::NonPositiveAlpha { .. })
        ));
        assert!(matches!(
            d.tilt(-1.5),
            Err(Error::NonPositiveAlpha { .. })
        ));
    }

    #[test]
    fn tilt_keeps_zeros() {
        let d = Distribution::from_weights(&[0.5, 0.0, 0.5]).unwrap();
        let t = d.tilt(0.5).unwrap();
        assert_eq!(t.prob(1), 0.0);
        assert!(t.prob(0) > 0.0 && t.prob(2) > 0.0);
    }

    #[test]
    fn channel_construction() {
        let id = Channel::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(id.entries(), &[1.0, 0.0, 0.0, 1.0]);
        assert!(!id.was_renormalized());

        // Row sum 0.999 is inside the default tolerance and gets renormalized.
        let c = Channel::from_rows(&[vec![0.5, 0.499], vec![0.5, 0.5]]).unwrap();
        let sum: f64 = c.row(0).iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(c.was_renormalized());

        // The published 5x5 example matrix (third row sums to 0.999) is
        // accepted by the tolerant constructor and renormalized.
        let printed: Vec<Vec<f64>> = vec![
            vec![0.600, 0.100, 0.100, 0.100, 0.100],
            vec![0.100, 0.600, 0.100, 0.100, 0.100],
            vec![0.231, 0.231, 0.066, 0.179, 0.292],
            vec![0.161, 0.341, 0.226, 0.226, 0.046],
            vec![0.341, 0.161, 0.226, 0.046, 0.226],
        ];
        let c = Channel::from_rows(&printed).unwrap();
        assert!(c.was_renormalized());
        for x in 0..5 {
            let s: f64 = c.row(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }

        assert!(matches!(
            Channel::from_rows(&[vec![0.5, 0.4], vec![0.5, 0.5]]),
            Err(Error::RowSumOutOfTolerance { row: 0, .. })
        ));
        assert!(matches!(
            Channel::from_rows(&[vec![1.1, -0.1]]),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(Channel::from_rows(&[]), Err(Error::EmptyMatrix)));
        assert!(matches!(
            Channel::from_rows(&[vec![1.0], vec![0.5, 0.5]]),
            Err(Error::DimensionMismatch { .. })
        ));
        // An all-zero row is far outside any sane tolerance.
        assert!(matches!(
            Channel::from_rows(&[vec![0.0, 0.0], vec![0.5, 0.5]]),
            Err(Error::RowSumOutOfTolerance { row: 0, .. })
        ));
    }

    #[test]
    fn reverse_conditional_tilt_matches_columnwise_tilt() {
        let c0 = Distribution::from_weights(&[0.8, 0.2]).unwrap();
        let c1 = Distribution::from_weights(&[0.3, 0.7]).unwrap();
        let q = ReverseConditional::from_columns(vec![c0.clone(), c1.clone()]).unwrap();
        let t = q.tilt(2.0).unwrap();
        assert_eq!(t.column(0), &c0.tilt(2.0).unwrap());
        assert_eq!(t.column(1), &c1.tilt(2.0).unwrap());

        // Uniform columns are fixed points.
        let u = Distribution::uniform(3).unwrap();
        let q = ReverseConditional::from_columns(vec![u.clone(), u.clone()]).unwrap();
        let t = q.tilt(2.0).unwrap();
        for y in 0..2 {
            assert!(t.column(y).linf_distance(&u) < 1e-15);
        }
    }

    fn simplex_strategy(n: usize) -> impl Strategy<Value = Distribution> {
        prop::collection::vec(1e-3f64..1.0, n)
            .prop_map(|w| Distribution::from_weights(&w).unwrap())
    }

    fn alpha_strategy() -> impl Strategy<Value = f64> {
        prop::sample::select(vec![0.3, 0.5, 2.0, 5.0])
    }

    proptest! {
        #[test]
        fn tilt_composes(p in simplex_strategy(4), a in alpha_strategy(), b in alpha_strategy()) {
            let lhs = p.tilt(a).unwrap().tilt(b).unwrap();
            let rhs = p.tilt(a * b).unwrap();
            prop_assert!(lhs.linf_distance(&rhs) < 1e-12);
        }

        #[test]
        fn tilt_inverts(p in simplex_strategy(5), a in alpha_strategy()) {
            let back = p.tilt(a).unwrap().tilt(1.0 / a).unwrap();
            prop_assert!(back.linf_distance(&p) < 1e-12);
        }

        #[test]
        fn tilt_preserves_support(a in alpha_strategy()) {
            let p = Distribution::from_weights(&[0.4, 0.0, 0.6, 0.0]).unwrap();
            let t = p.tilt(a).unwrap();
            for x in 0..4 {
                prop_assert_eq!(t.prob(x) == 0.0, p.prob(x) == 0.0);
            }
        }

        #[test]
        fn non_uniform_is_not_a_tilt_fixed_point(seed in 0u64..100, a in alpha_strategy()) {
            let p = Distribution::random_interior(4, seed).unwrap();
            let spread = p.probs().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - p.probs().iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assume!(spread > 0.01);
            prop_assume!((a - 1.0).abs() > 1e-6);
            let t = p.tilt(a).unwrap();
            prop_assert!(t.linf_distance(&p) > 1e-9, "tilt fixed point must be uniform");
        }

        #[test]
        fn uniform_is_a_tilt_fixed_point(n in 1usize..8, a in alpha_strategy()) {
            let u = Distribution::uniform(n).unwrap();
            prop_assert!(u.tilt(a).unwrap().linf_distance(&u) < 1e-12);
        }

        #[test]
        fn construction_is_idempotent(p in simplex_strategy(6)) {
            let again = Distribution::from_weights(p.probs()).unwrap();
            prop_assert!(again.linf_distance(&p) < 1e-15);
        }
    }
}
