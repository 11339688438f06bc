use thiserror::Error;

use crate::germ::CurveId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("SingularMatrix: zero pivot in column {column} with no row exchange available")]
    SingularMatrix { column: usize },
    #[error("DimensionMismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ParseRational: cannot parse {0:?} as a rational (expected \"p\" or \"p/q\")")]
    ParseRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("InvalidStep at steps[{index}]: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("InvalidDynkin: {0}")]
    InvalidDynkin(String),
    #[error("UnknownCurve: curve {curve} does not exist (cluster has {count} curves)")]
    UnknownCurve { curve: CurveId, count: usize },
    #[error("InvalidClusterJson: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("NotAntinef: divisor has positive intersection {value} with curve {curve}")]
    NotAntinef { curve: CurveId, value: String },
    #[error("NotFound: no finite-generation degree up to {limit} for curve {curve}")]
    NotFound { curve: CurveId, limit: String },
    #[error("InvalidDivisor: {0}")]
    InvalidDivisor(String),
    #[error(transparent)]
    Germ(#[from] GermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("NotAnLctComputer: curve {curve} does not compute the asymptotic lct (gap {gap})")]
    NotAnLctComputer { curve: CurveId, gap: String },
    #[error("MldMinusInfinity: the pair is not log canonical, so no divisor computes its mld")]
    MldMinusInfinity,
    #[error("InvalidPair: {0}")]
    InvalidPair(String),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Germ(#[from] GermError),
}
