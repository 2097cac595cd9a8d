//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors for distribution/channel construction and capacity computations.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("negative weight at index {index}: {value}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("all weights are zero")]
    AllZero,

    #[error("non-finite value at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("alphabet must have at least one symbol")]
    ZeroDimension,

    #[error("order alpha must be positive and finite, got {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("alpha = {alpha} is within {tol} of 1; use the Shannon form instead")]
    AlphaNearOne { alpha: f64, tol: f64 },

    #[error("negative entry at row {row}, column {col}: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, more than {tol} away from 1")]
    RowSumOutOfTolerance { row: usize, sum: f64, tol: f64 },

    #[error("channel matrix has no rows or no columns")]
    EmptyMatrix,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("support violation: {context} vanishes at index {index} where positive mass remains")]
    SupportViolation { context: &'static str, index: usize },

    #[error("rho must be a finite value greater than -1, got {rho}")]
    RhoOutOfRange { rho: f64 },

    #[error("degenerate normalizer: every candidate weight vanished")]
    DegenerateNormalizer,

    #[error("grid dimension {dim} exceeds the guard {max}; raise the guard explicitly to override")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("need at least two initial distributions, got {got}")]
    TooFewInits { got: usize },

    #[error("computation produced a non-finite value")]
    NonFiniteResult,
}

pub type Result<T> = std::result::Result<T, Error>;
