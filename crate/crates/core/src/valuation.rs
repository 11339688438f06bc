//! The graded sequence of valuation ideals of an exceptional curve.
//!
//! For a curve `E` on a cluster, the ideals `a_m = { f : ord_E(f) >= m }`
//! are complete ideals cosupported at the germ, so each is described by an
//! antinef divisor on the model. Two independent routes are provided:
//! linear algebra ([`asymptotic_multiplicities`], the numerical pullback of
//! `E` from the model contracting every other curve) and classical
//! unloading ([`unload`], [`valuation_ideal`]).

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::ValuationError;
use crate::exact::{solve_symmetric, QVector, Rational};
use crate::germ::{Cluster, CurveId};

/// An effective divisor supported on the exceptional curves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ExcDivisor(QVector);

impl ExcDivisor {
    pub fn new(coeffs: QVector) -> Result<Self, ValuationError> {
        if let Some(x) = coeffs.iter().find(|x| x.is_negative()) {
            return Err(ValuationError::InvalidDivisor(format!(
                "coefficients must be nonnegative, found {x}"
            )));
        }
        Ok(ExcDivisor(coeffs))
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(xs: I) -> Result<Self, ValuationError> {
        Self::new(QVector::from_ints(xs))
    }

    pub fn zero(n: usize) -> Self {
        ExcDivisor(QVector::zeros(n))
    }

    pub fn coeffs(&self) -> &QVector {
        &self.0
    }

    pub fn into_coeffs(self) -> QVector {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.is_integral()
    }

    pub fn scale(&self, s: &Rational) -> ExcDivisor {
        ExcDivisor(self.0.scale(s))
    }

    /// Integer coefficients, when every coefficient is an integer fitting
    /// in an `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Rational::to_i64).collect()
    }

    fn check_len(&self, c: &Cluster) -> Result<(), ValuationError> {
        if self.len() == c.num_curves() {
            Ok(())
        } else {
            Err(ValuationError::InvalidDivisor(format!(
                "divisor has {} coefficients but the cluster has {} curves",
                self.len(),
                c.num_curves()
            )))
        }
    }
}

impl std::fmt::Display for ExcDivisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `D · E_j ≤ 0` for every curve.
pub fn is_antinef(c: &Cluster, d: &ExcDivisor) -> bool {
    c.intersect_divisor(d.coeffs())
        .iter()
        .all(|x| !x.is_positive())
}

/// Asymptotic multiplicities `x_j = ord_{E_j}(a_•^E)`: the unique `x` with
/// `x_E = 1` and `(M x)_j = 0` for every `j != E`.
pub fn asymptotic_multiplicities(c: &Cluster, e: CurveId) -> Result<QVector, ValuationError> {
    c.check_curve(e)?;
    let m = c.intersection_matrix();
    let others: Vec<CurveId> = c.curves().filter(|&j| j != e).collect();
    let mut x = QVector::basis(c.num_curves(), e, 1);
    if others.is_empty() {
        return Ok(x);
    }
    let sub = m.principal_submatrix(&others);
    let rhs = QVector(others.iter().map(|&j| -&m[(j, e)]).collect());
    let y = solve_symmetric(&sub, &rhs)
        .expect("principal submatrices of a negative definite form are nonsingular");
    for (&j, v) in others.iter().zip(y.0) {
        x[j] = v;
    }
    Ok(x)
}

/// Unloading on integer coefficients, in place.
pub(crate) fn unload_in_place(c: &Cluster, z: &mut [i64]) {
    let rows = c.intersection_rows();
    loop {
        let hit = rows.iter().enumerate().find_map(|(j, row)| {
            let dot: i64 = row.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
            (dot > 0).then_some((j, dot))
        });
        let Some((j, dot)) = hit else { break };
        let self_int = -rows[j][j];
        z[j] += (dot + self_int - 1) / self_int;
    }
}

/// The antinef closure of an integral effective divisor: the least integral
/// `D >= Z` with `D · E_j <= 0` for all `j`.
pub fn unload(c: &Cluster, z: &ExcDivisor) -> Result<ExcDivisor, ValuationError> {
    z.check_len(c)?;
    let mut ints = z.to_ints().ok_or_else(|| {
        ValuationError::InvalidDivisor(format!("unloading needs an integral divisor, got {z}"))
    })?;
    unload_in_place(c, &mut ints);
    Ok(ExcDivisor(QVector::from_ints(ints)))
}

/// The divisor of `a_m^E = { f : ord_E(f) >= m }` on the model.
pub fn valuation_ideal(c: &Cluster, e: CurveId, m: u64) -> Result<ExcDivisor, ValuationError> {
    c.check_curve(e)?;
    if m == 0 {
        return Err(ValuationError::InvalidDivisor(
            "valuation ideals are indexed by m >= 1".to_string(),
        ));
    }
    let mut z = vec![0i64; c.num_curves()];
    z[e] = m as i64;
    unload_in_place(c, &mut z);
    Ok(ExcDivisor(QVector::from_ints(z)))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Least `m` such that `m · dstar` is integral and equals the unloaded
/// valuation ideal `a_m^E`.
pub fn fingen_degree(c: &Cluster, e: CurveId) -> Result<u64, ValuationError> {
    let dstar = asymptotic_multiplicities(c, e)?;
    fingen_degree_from(c, e, &dstar)
}

pub(crate) fn fingen_degree_from(
    c: &Cluster,
    e: CurveId,
    dstar: &QVector,
) -> Result<u64, ValuationError> {
    let lcm = dstar.denominator_lcm();
    let not_found = || ValuationError::NotFound {
        curve: e,
        limit: lcm.to_string(),
    };
    let limit = lcm.to_u64().ok_or_else(not_found)?;
    for m in divisors(limit) {
        let scaled = dstar.scale(&Rational::from_int(m));
        if !scaled.is_integral() {
            continue;
        }
        if valuation_ideal(c, e, m)?.coeffs() == &scaled {
            return Ok(m);
        }
    }
    Err(not_found())
}

/// Curves with strictly negative intersection against `D`: the Rees
/// valuations of the complete ideal whose divisor is `D`.
pub fn rees_valuations(c: &Cluster, d: &ExcDivisor) -> Result<Vec<CurveId>, ValuationError> {
    d.check_len(c)?;
    if d.is_zero() {
        return Err(ValuationError::InvalidDivisor(
            "the zero divisor has no Rees valuations".to_string(),
        ));
    }
    let dots = c.intersect_divisor(d.coeffs());
    if let Some((j, v)) = dots.iter().enumerate().find(|(_, v)| v.is_positive()) {
        return Err(ValuationError::NotAntinef {
            curve: j,
            value: v.to_string(),
        });
    }
    Ok(dots
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_negative())
        .map(|(j, _)| j)
        .collect())
}

/// Everything about the graded sequence of one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationProfile {
    pub curve: CurveId,
    pub k: i64,
    pub dstar: QVector,
    pub fingen_degree: u64,
}

impl ValuationProfile {
    pub fn compute(c: &Cluster, e: CurveId) -> Result<Self, ValuationError> {
        let dstar = asymptotic_multiplicities(c, e)?;
        let fingen_degree = fingen_degree_from(c, e, &dstar)?;
        Ok(ValuationProfile {
            curve: e,
            k: c.k(e),
            dstar,
            fingen_degree,
        })
    }

    /// `m0 · dstar`, the divisor of `a_{m0}^E`.
    pub fn generator_divisor(&self) -> ExcDivisor {
        ExcDivisor(self.dstar.scale(&Rational::from_int(self.fingen_degree)))
    }
}
