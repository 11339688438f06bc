//! Log discrepancies, log canonical thresholds, minimal log discrepancies,
//! and the lct/mld classification of exceptional curves.
//!
//! All pairs live on a cluster model, which is a log resolution of every
//! complete ideal whose divisor is antinef on it: the ideal pulls back to
//! `O(-D)` and the exceptional locus is SNC. Log discrepancies of model
//! curves are therefore `a_F = k_F + 1 - λ d_F`.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{ThresholdError, ValuationError};
use crate::exact::{QVector, Rational};
use crate::germ::{Cluster, CurveId};
use crate::valuation::{
    asymptotic_multiplicities, fingen_degree_from, valuation_ideal, ExcDivisor,
};

/// An integrally closed ideal cosupported at the germ, given by its
/// antinef divisor. The zero divisor is the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CompleteIdeal(ExcDivisor);

impl CompleteIdeal {
    pub fn new(c: &Cluster, divisor: ExcDivisor) -> Result<Self, ValuationError> {
        if divisor.len() != c.num_curves() {
            return Err(ValuationError::InvalidDivisor(format!(
                "ideal has {} coefficients but the cluster has {} curves",
                divisor.len(),
                c.num_curves()
            )));
        }
        if !divisor.is_integral() {
            return Err(ValuationError::InvalidDivisor(format!(
                "ideal divisor must be integral, got {divisor}"
            )));
        }
        let dots = c.intersect_divisor(divisor.coeffs());
        if let Some((j, v)) = dots.iter().enumerate().find(|(_, v)| v.is_positive()) {
            return Err(ValuationError::NotAntinef {
                curve: j,
                value: v.to_string(),
            });
        }
        Ok(CompleteIdeal(divisor))
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(
        c: &Cluster,
        xs: I,
    ) -> Result<Self, ValuationError> {
        Self::new(c, ExcDivisor::from_ints(xs)?)
    }

    /// The unit ideal.
    pub fn trivial(c: &Cluster) -> Self {
        CompleteIdeal(ExcDivisor::zero(c.num_curves()))
    }

    /// Skips validation; callers guarantee the divisor is antinef.
    pub(crate) fn new_unchecked(divisor: ExcDivisor) -> Self {
        CompleteIdeal(divisor)
    }

    pub fn divisor(&self) -> &ExcDivisor {
        &self.0
    }

    pub fn coeffs(&self) -> &QVector {
        self.0.coeffs()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }
}

/// The pair `(X, a^λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PairSpec {
    pub ideal: CompleteIdeal,
    pub lambda: Rational,
}

/// `{"ideal": ["2", "3", "6"], "lambda": "5/6"}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub ideal: QVector,
    pub lambda: Rational,
}

impl PairSpec {
    pub fn new(ideal: CompleteIdeal, lambda: Rational) -> Result<Self, ThresholdError> {
        if lambda.is_negative() {
            return Err(ThresholdError::InvalidPair(format!(
                "lambda must be nonnegative, got {lambda}"
            )));
        }
        Ok(PairSpec { ideal, lambda })
    }

    pub fn from_json(c: &Cluster, s: &str) -> Result<Self, ThresholdError> {
        let raw: PairJson = serde_json::from_str(s)
            .map_err(|e| ThresholdError::InvalidPair(format!("pair JSON: {e}")))?;
        let ideal = CompleteIdeal::new(c, ExcDivisor::new(raw.ideal)?)?;
        PairSpec::new(ideal, raw.lambda)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PairJson {
            ideal: self.ideal.coeffs().clone(),
            lambda: self.lambda.clone(),
        })
        .expect("pairs always serialize")
    }

    /// `λ · d_F`, the order of the pair's ideal part along `F`.
    fn weighted(&self, f: CurveId) -> Rational {
        &self.lambda * &self.ideal.coeffs()[f]
    }
}

/// A log canonical threshold; the unit ideal has threshold `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LctValue {
    Finite(Rational),
    Infinite,
}

impl LctValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LctValue::Finite(v) => Some(v),
            LctValue::Infinite => None,
        }
    }
}

impl fmt::Display for LctValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LctValue::Finite(v) => v.fmt(f),
            LctValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for LctValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A minimal log discrepancy at the germ; `-∞` when the pair is not log
/// canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Mld {
    Finite(Rational),
    NegInfinity,
}

impl Mld {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Mld::Finite(v) => Some(v),
            Mld::NegInfinity => None,
        }
    }
}

impl fmt::Display for Mld {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mld::Finite(v) => v.fmt(f),
            Mld::NegInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for Mld {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LctReport {
    pub value: LctValue,
    /// Curves attaining the minimum.
    pub argmin: Vec<CurveId>,
    /// For asymptotic reports: the lct of the prime blowup pair, `value - k_E`.
    pub prime_blowup_lct: Option<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ComputesLct,
    MldObstructed { witness: CurveId },
    Indeterminate,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::ComputesLct => "ComputesLct",
            Verdict::MldObstructed { .. } => "MldObstructed",
            Verdict::Indeterminate => "Indeterminate",
        }
    }

    pub fn witness(&self) -> Option<CurveId> {
        match self {
            Verdict::MldObstructed { witness } => Some(*witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::MldObstructed { witness } => write!(f, "MldObstructed(E{witness})"),
            v => f.write_str(v.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub curve: CurveId,
    pub verdict: Verdict,
    pub k: i64,
    pub lct: Rational,
    pub gap: Rational,
    pub fingen_degree: u64,
    /// Curves of the pruned model the verdict was decided on.
    pub pruned_curves: Vec<CurveId>,
}

/// `a_F(X, a^λ) = k_F + 1 - λ · ord_F(a)`.
pub fn log_discrepancy(c: &Cluster, p: &PairSpec, f: CurveId) -> Rational {
    Rational::from_int(c.k(f) + 1) - p.weighted(f)
}

fn min_ratio<I>(ratios: I) -> (Option<Rational>, Vec<CurveId>)
where
    I: IntoIterator<Item = (CurveId, Rational)>,
{
    let mut best: Option<Rational> = None;
    let mut argmin = Vec::new();
    for (j, r) in ratios {
        match &best {
            Some(b) if &r > b => {}
            Some(b) if &r == b => argmin.push(j),
            _ => {
                best = Some(r);
                argmin = vec![j];
            }
        }
    }
    (best, argmin)
}

/// `(k_j + 1) / x_j` for every curve with `x_j > 0`.
fn ratios<'a>(c: &'a Cluster, x: &'a QVector) -> impl Iterator<Item = (CurveId, Rational)> + 'a {
    c.curves()
        .filter(|&j| x[j].is_positive())
        .map(move |j| (j, Rational::from_int(c.k(j) + 1) / &x[j]))
}

/// Log canonical threshold of a complete ideal: the minimum over the
/// divisor's support of `(k_j + 1) / d_j`.
pub fn lct_ideal(c: &Cluster, a: &CompleteIdeal) -> LctReport {
    let (best, argmin) = min_ratio(ratios(c, a.coeffs()));
    LctReport {
        value: best.map_or(LctValue::Infinite, LctValue::Finite),
        argmin,
        prime_blowup_lct: None,
    }
}

pub(crate) fn asymptotic_lct_from(c: &Cluster, e: CurveId, dstar: &QVector) -> LctReport {
    let (best, argmin) = min_ratio(ratios(c, dstar));
    let value = best.expect("dstar is positive on E");
    LctReport {
        prime_blowup_lct: Some(&value - Rational::from_int(c.k(e))),
        value: LctValue::Finite(value),
        argmin,
    }
}

/// Asymptotic lct of `a_•^E`, computed on the model from the asymptotic
/// multiplicities.
pub fn asymptotic_lct(c: &Cluster, e: CurveId) -> Result<LctReport, ThresholdError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    Ok(asymptotic_lct_from(c, e, &dstar))
}

fn asymptotic_value(c: &Cluster, e: CurveId, dstar: &QVector) -> Rational {
    match asymptotic_lct_from(c, e, dstar).value {
        LctValue::Finite(v) => v,
        LctValue::Infinite => unreachable!("asymptotic lct is always finite"),
    }
}

/// `k_E + 1 - lct(a_•^E)`.
pub fn lct_gap(c: &Cluster, e: CurveId) -> Result<Rational, ThresholdError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    Ok(Rational::from_int(c.k(e) + 1) - asymptotic_value(c, e, &dstar))
}

/// Whether `E` computes the asymptotic lct of its own graded sequence,
/// i.e. `lct(a_•^E) = k_E + 1`.
pub fn computes_lct(c: &Cluster, e: CurveId) -> Result<bool, ThresholdError> {
    Ok(lct_gap(c, e)?.is_zero())
}

/// The ideal `a_{m0}^E`, whose lct `E` computes whenever `E` computes an lct
/// at all.
pub fn lct_witness_ideal(c: &Cluster, e: CurveId) -> Result<CompleteIdeal, ThresholdError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    let gap = Rational::from_int(c.k(e) + 1) - asymptotic_value(c, e, &dstar);
    if !gap.is_zero() {
        return Err(ThresholdError::NotAnLctComputer {
            curve: e,
            gap: gap.to_string(),
        });
    }
    let m0 = fingen_degree_from(c, e, &dstar)?;
    Ok(CompleteIdeal::new_unchecked(valuation_ideal(c, e, m0)?))
}

/// Strict inequality `k_E + 1 < (k_F + 1) / x_F` for every model curve
/// `F != E`. Certified over the curves of this model only.
pub fn plt_check(c: &Cluster, e: CurveId) -> Result<bool, ThresholdError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    let bound = Rational::from_int(c.k(e) + 1);
    let strict = ratios(c, &dstar).all(|(j, r)| j == e || r > bound);
    Ok(strict)
}

/// The unique curve computing the lct of `a`, if exactly one does.
pub fn unique_lc_place(c: &Cluster, a: &CompleteIdeal) -> Option<CurveId> {
    match lct_ideal(c, a).argmin[..] {
        [e] => Some(e),
        _ => None,
    }
}

/// Minimal log discrepancy over the germ's closed point: the minimum of
/// `a_j` over model curves when all are nonnegative, else `-∞`.
///
/// Further blowups of a point on one curve `C` give `a_C + 1`, and of the
/// intersection of `C` and `C'` give `a_C + a_C'`, so no off-model divisor
/// can go lower once every model value is nonnegative.
pub fn mld_at_origin(c: &Cluster, p: &PairSpec) -> Result<Mld, ThresholdError> {
    if c.num_curves() == 0 {
        return Err(ThresholdError::InvalidPair(
            "the cluster has no exceptional curves over the germ".to_string(),
        ));
    }
    check_pair(c, p)?;
    let min = c
        .curves()
        .map(|j| log_discrepancy(c, p, j))
        .min()
        .expect("nonempty");
    Ok(if min.is_negative() {
        Mld::NegInfinity
    } else {
        Mld::Finite(min)
    })
}

fn check_pair(c: &Cluster, p: &PairSpec) -> Result<(), ThresholdError> {
    if p.ideal.coeffs().len() != c.num_curves() {
        return Err(ThresholdError::InvalidPair(format!(
            "ideal has {} coefficients but the cluster has {} curves",
            p.ideal.coeffs().len(),
            c.num_curves()
        )));
    }
    Ok(())
}

/// Whether `E` attains the mld of a log canonical pair.
pub fn computes_mld(c: &Cluster, e: CurveId, p: &PairSpec) -> Result<bool, ThresholdError> {
    c.check_curve(e)?;
    match mld_at_origin(c, p)? {
        Mld::Finite(m) => Ok(log_discrepancy(c, p, e) == m),
        Mld::NegInfinity => Err(ThresholdError::MldMinusInfinity),
    }
}

pub(crate) fn obstruction_from(c: &Cluster, e: CurveId, dstar: &QVector) -> Option<CurveId> {
    let ke = c.k(e);
    let bound = Rational::from_int(ke + 1);
    c.curves()
        .filter(|&f| f != e && c.k(f) <= ke)
        .map(|f| (Rational::from_int(c.k(f) + 1) / &dstar[f], c.k(f), f))
        .filter(|(r, _, _)| r < &bound)
        .min()
        .map(|(_, _, f)| f)
}

/// A model curve `F` with `k_F <= k_E` and `(k_F + 1) / x_F < k_E + 1`.
/// Such an `F` has strictly smaller log discrepancy than `E` for every log
/// canonical pair with nonzero ideal and positive exponent, so `E` computes
/// no mld. Ties go to the smallest ratio, then the smallest `k_F`, then the
/// smallest id.
pub fn mld_obstruction(c: &Cluster, e: CurveId) -> Result<Option<CurveId>, ThresholdError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    Ok(obstruction_from(c, e, &dstar))
}

/// Classifies `E` after pruning the cluster to `E`'s ancestors. The witness
/// is reported in the original cluster's curve ids.
pub fn classify(c: &Cluster, e: CurveId) -> Result<Classification, ThresholdError> {
    c.check_curve(e)?;
    let (pruned, map) = c.prune_to(e);
    let pe = map
        .iter()
        .position(|&j| j == e)
        .expect("E survives pruning");
    let dstar = asymptotic_multiplicities(&pruned, pe)?;
    let lct = asymptotic_value(&pruned, pe, &dstar);
    let gap = Rational::from_int(c.k(e) + 1) - &lct;
    let verdict = if gap.is_zero() {
        Verdict::ComputesLct
    } else if let Some(f) = obstruction_from(&pruned, pe, &dstar) {
        Verdict::MldObstructed { witness: map[f] }
    } else {
        Verdict::Indeterminate
    };
    let full_dstar = asymptotic_multiplicities(c, e)?;
    Ok(Classification {
        curve: e,
        verdict,
        k: c.k(e),
        lct,
        gap,
        fingen_degree: fingen_degree_from(c, e, &full_dstar)?,
        pruned_curves: map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{BaseGerm, BlowupStep::*, DynkinType};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn single() -> Cluster {
        Cluster::build(BaseGerm::Smooth, vec![Free(None)]).unwrap()
    }

    fn chain() -> Cluster {
        Cluster::build(BaseGerm::Smooth, vec![Free(None), Free(Some(0))]).unwrap()
    }

    fn example_two(r: usize) -> Cluster {
        let mut steps = vec![Free(None), Free(Some(0)), Satellite(0, 1)];
        steps.extend((3..r).map(|i| Free(Some(i - 1))));
        Cluster::build(BaseGerm::Smooth, steps).unwrap()
    }

    fn e7() -> Cluster {
        Cluster::build(BaseGerm::DuVal(DynkinType::E7), vec![]).unwrap()
    }

    fn pair(c: &Cluster, d: &[i64], lambda: &str) -> PairSpec {
        PairSpec::new(
            CompleteIdeal::from_ints(c, d.iter().copied()).unwrap(),
            q(lambda),
        )
        .unwrap()
    }

    #[test]
    fn log_discrepancies() {
        assert_eq!(
            log_discrepancy(&single(), &pair(&single(), &[1], "1"), 0),
            q("1")
        );
        assert_eq!(
            log_discrepancy(&single(), &pair(&single(), &[1], "2"), 0),
            q("0")
        );
        let c = example_two(3);
        assert_eq!(log_discrepancy(&c, &pair(&c, &[2, 3, 6], "5/6"), 2), q("0"));
    }

    #[test]
    fn ideal_thresholds() {
        let r = lct_ideal(
            &single(),
            &CompleteIdeal::from_ints(&single(), [1]).unwrap(),
        );
        assert_eq!(r.value, LctValue::Finite(q("2")));
        assert_eq!(r.argmin, vec![0]);
        let r = lct_ideal(&single(), &CompleteIdeal::trivial(&single()));
        assert_eq!(r.value, LctValue::Infinite);
        assert!(r.argmin.is_empty());
        let c = example_two(3);
        let r = lct_ideal(&c, &CompleteIdeal::from_ints(&c, [2, 3, 6]).unwrap());
        assert_eq!(r.value, LctValue::Finite(q("5/6")));
        assert_eq!(r.argmin, vec![2]);
    }

    #[test]
    fn non_antinef_ideal_rejected() {
        assert!(matches!(
            CompleteIdeal::from_ints(&chain(), [0, 1]),
            Err(ValuationError::NotAntinef { curve: 0, .. })
        ));
        assert!(CompleteIdeal::from_ints(&chain(), [1]).is_err());
        assert!(PairSpec::new(CompleteIdeal::trivial(&chain()), q("-1")).is_err());
    }

    #[test]
    fn asymptotic_thresholds() {
        let r = asymptotic_lct(&single(), 0).unwrap();
        assert_eq!(r.value, LctValue::Finite(q("2")));
        assert_eq!(r.prime_blowup_lct, Some(q("1")));

        let r = asymptotic_lct(&example_two(3), 2).unwrap();
        assert_eq!(r.value, LctValue::Finite(q("5")));
        assert_eq!(r.argmin, vec![2]);

        let r = asymptotic_lct(&example_two(4), 3).unwrap();
        assert_eq!(r.value, LctValue::Finite(q("35/6")));
        assert_eq!(r.argmin, vec![2]);
        assert_eq!(r.prime_blowup_lct, Some(q("5/6")));
    }

    #[test]
    fn lct_computers() {
        assert!(computes_lct(&single(), 0).unwrap());
        assert!(computes_lct(&example_two(3), 2).unwrap());
        for r in 4..=8 {
            assert!(!computes_lct(&example_two(r), r - 1).unwrap());
        }
        let a2 = Cluster::build(BaseGerm::DuVal(DynkinType::A(2)), vec![]).unwrap();
        assert!(computes_lct(&a2, 0).unwrap());
    }

    #[test]
    fn gaps() {
        assert_eq!(lct_gap(&single(), 0).unwrap(), q("0"));
        assert_eq!(lct_gap(&example_two(3), 2).unwrap(), q("0"));
        // k_{E4} + 1 = 6 and the minimum ratio sits on E3.
        assert_eq!(lct_gap(&example_two(4), 3).unwrap(), q("1/6"));
    }

    #[test]
    fn witness_ideals() {
        let w = lct_witness_ideal(&single(), 0).unwrap();
        assert_eq!(w.coeffs(), &QVector::from_ints([1]));

        let c = example_two(3);
        let w = lct_witness_ideal(&c, 2).unwrap();
        assert_eq!(w.coeffs(), &QVector::from_ints([2, 3, 6]));
        let r = lct_ideal(&c, &w);
        assert_eq!(r.value, LctValue::Finite(q("5/6")));
        assert_eq!(r.argmin, vec![2]);

        let w = lct_witness_ideal(&chain(), 1).unwrap();
        assert_eq!(w.coeffs(), &QVector::from_ints([1, 2]));
        let r = lct_ideal(&chain(), &w);
        assert_eq!(r.value, LctValue::Finite(q("3/2")));
        assert_eq!(r.argmin, vec![1]);

        assert!(matches!(
            lct_witness_ideal(&example_two(4), 3),
            Err(ThresholdError::NotAnLctComputer { curve: 3, .. })
        ));
    }

    #[test]
    fn plt() {
        assert!(plt_check(&single(), 0).unwrap());
        assert!(plt_check(&example_two(3), 2).unwrap());
        assert!(!plt_check(&example_two(4), 3).unwrap());
    }

    #[test]
    fn lc_places() {
        let s = single();
        assert_eq!(
            unique_lc_place(&s, &CompleteIdeal::from_ints(&s, [1]).unwrap()),
            Some(0)
        );
        let c = example_two(3);
        let a = CompleteIdeal::from_ints(&c, [2, 3, 6]).unwrap();
        assert_eq!(unique_lc_place(&c, &a), Some(2));
        let ch = chain();
        assert_eq!(
            unique_lc_place(&ch, &CompleteIdeal::from_ints(&ch, [1, 1]).unwrap()),
            Some(0)
        );
        // [1, 2]: ratios 2 and 3/2.
        assert_eq!(
            unique_lc_place(&ch, &CompleteIdeal::from_ints(&ch, [1, 2]).unwrap()),
            Some(1)
        );
    }

    #[test]
    fn mld_values() {
        let s = single();
        assert_eq!(
            mld_at_origin(
                &s,
                &PairSpec::new(CompleteIdeal::trivial(&s), q("7")).unwrap()
            )
            .unwrap(),
            Mld::Finite(q("2"))
        );
        assert_eq!(
            mld_at_origin(
                &e7(),
                &PairSpec::new(CompleteIdeal::trivial(&e7()), q("0")).unwrap()
            )
            .unwrap(),
            Mld::Finite(q("1"))
        );
        assert_eq!(
            mld_at_origin(&s, &pair(&s, &[1], "3")).unwrap(),
            Mld::NegInfinity
        );
        let empty = Cluster::build(BaseGerm::Smooth, vec![]).unwrap();
        assert!(mld_at_origin(
            &empty,
            &PairSpec::new(CompleteIdeal::trivial(&empty), q("1")).unwrap()
        )
        .is_err());
    }

    #[test]
    fn mld_computers() {
        let s = single();
        assert!(computes_mld(&s, 0, &pair(&s, &[1], "2")).unwrap());
        assert!(matches!(
            computes_mld(&s, 0, &pair(&s, &[1], "3")),
            Err(ThresholdError::MldMinusInfinity)
        ));

        let c = example_two(4);
        let a = CompleteIdeal::from_ints(&c, [2, 3, 6, 7]).unwrap();
        let lambda = lct_ideal(&c, &a).value.finite().unwrap().clone();
        assert_eq!(lambda, q("5/6"));
        let p = PairSpec::new(a, lambda).unwrap();
        assert!(!computes_mld(&c, 3, &p).unwrap());
        assert!(computes_mld(&c, 2, &p).unwrap());

        let e = e7();
        let p = PairSpec::new(CompleteIdeal::trivial(&e), q("1")).unwrap();
        for j in e.curves() {
            assert!(computes_mld(&e, j, &p).unwrap());
        }
    }

    #[test]
    fn obstructions() {
        for r in 4..=8 {
            assert_eq!(
                mld_obstruction(&example_two(r), r - 1).unwrap(),
                Some(2),
                "r={r}"
            );
        }
        assert_eq!(mld_obstruction(&single(), 0).unwrap(), None);
        assert_eq!(mld_obstruction(&example_two(3), 2).unwrap(), None);
    }

    #[test]
    fn classifications() {
        let c = classify(&example_two(3), 2).unwrap();
        assert_eq!(c.verdict, Verdict::ComputesLct);
        assert_eq!(c.fingen_degree, 6);
        assert_eq!(c.lct, q("5"));
        let c = classify(&example_two(6), 5).unwrap();
        assert_eq!(c.verdict, Verdict::MldObstructed { witness: 2 });
        assert_eq!(c.verdict.to_string(), "MldObstructed(E2)");
        let a2 = Cluster::build(BaseGerm::DuVal(DynkinType::A(2)), vec![]).unwrap();
        assert_eq!(classify(&a2, 0).unwrap().verdict, Verdict::ComputesLct);
    }

    #[test]
    fn classify_prunes_siblings() {
        // E0 <- E1 (free on 0), E2 (free on 0), E3 = E0 ∩ E1: E2 is not an
        // ancestor of E3, and the witness ids refer back to the full model.
        let c = Cluster::build(
            BaseGerm::Smooth,
            vec![
                Free(None),
                Free(Some(0)),
                Free(Some(0)),
                Satellite(0, 1),
                Free(Some(3)),
            ],
        )
        .unwrap();
        let cl = classify(&c, 4).unwrap();
        assert_eq!(cl.pruned_curves, vec![0, 1, 3, 4]);
        assert_eq!(cl.verdict, Verdict::MldObstructed { witness: 3 });
    }

    #[test]
    fn pair_json() {
        let c = example_two(3);
        let p = PairSpec::from_json(&c, r#"{"ideal":["2","3","6"],"lambda":"5/6"}"#).unwrap();
        assert_eq!(p.lambda, q("5/6"));
        assert_eq!(p.to_json(), r#"{"ideal":["2","3","6"],"lambda":"5/6"}"#);
        assert!(PairSpec::from_json(&c, r#"{"ideal":["0","0","1"],"lambda":"1"}"#).is_err());
        assert!(PairSpec::from_json(&c, r#"{"ideal":["2","3","6"],"lambda":"-1"}"#).is_err());
    }
}
