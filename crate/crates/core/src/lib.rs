//! Divisorial valuations over two-dimensional germs.
//!
//! A divisor over a smooth surface point or a du Val singularity is modelled
//! as an exceptional curve on a [`Cluster`] of point blowups. From the
//! intersection form of the cluster this crate computes, in exact rational
//! arithmetic, the graded sequence of valuation ideals of each curve, its
//! asymptotic log canonical threshold, minimal log discrepancies of pairs,
//! and whether the curve computes a log canonical threshold or is kept from
//! computing a minimal log discrepancy by another curve.
//!
//! ```
//! use surfval::{classify, BaseGerm, BlowupStep::*, Cluster, Verdict};
//!
//! let c = Cluster::build(
//!     BaseGerm::Smooth,
//!     vec![Free(None), Free(Some(0)), Satellite(0, 1)],
//! )
//! .unwrap();
//! let cl = classify(&c, 2).unwrap();
//! assert_eq!(cl.lct.to_string(), "5");
//! assert_eq!(cl.verdict, Verdict::ComputesLct);
//! ```

pub mod error;
pub mod exact;
pub mod explorer;
pub mod fixtures;
pub mod germ;
pub mod thresholds;
pub mod valuation;

pub use error::{ExactError, GermError, ThresholdError, ValuationError};
pub use exact::{is_negative_definite, solve_symmetric, QMatrix, QVector, Rational};
pub use germ::{BaseGerm, BlowupStep, Cluster, ClusterSpec, CurveId, DualGraph, DynkinType};
pub use thresholds::{
    asymptotic_lct, classify, computes_lct, computes_mld, lct_gap, lct_ideal, lct_witness_ideal,
    log_discrepancy, mld_at_origin, mld_obstruction, plt_check, unique_lc_place, Classification,
    CompleteIdeal, LctReport, LctValue, Mld, PairSpec, Verdict,
};
pub use valuation::{
    asymptotic_multiplicities, fingen_degree, rees_valuations, unload, valuation_ideal, ExcDivisor,
    ValuationProfile,
};
