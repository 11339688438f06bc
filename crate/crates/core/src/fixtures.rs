//! Worked examples with known answers, run as a self-check.

use std::fmt;

use serde::Serialize;

use crate::exact::{QVector, Rational};
use crate::germ::{BaseGerm, BlowupStep, Cluster, DynkinType};
use crate::thresholds::{
    classify, computes_lct, computes_mld, mld_at_origin, CompleteIdeal, Mld, PairSpec, Verdict,
};
use crate::valuation::{fingen_degree, valuation_ideal};

/// One blowup of a smooth point.
pub fn example_one() -> Cluster {
    Cluster::build(BaseGerm::Smooth, vec![BlowupStep::Free(None)]).expect("valid")
}

/// `r >= 3` blowups: two free points, a satellite at `E0 ∩ E1`, then a
/// chain of free points each on the previous curve. The last curve is
/// `r - 1`.
pub fn example_two(r: usize) -> Cluster {
    assert!(r >= 3, "example two needs at least three blowups");
    let mut steps = vec![
        BlowupStep::Free(None),
        BlowupStep::Free(Some(0)),
        BlowupStep::Satellite(0, 1),
    ];
    steps.extend((3..r).map(|i| BlowupStep::Free(Some(i - 1))));
    Cluster::build(BaseGerm::Smooth, steps).expect("valid")
}

/// Minimal resolution of an E7 singularity.
pub fn e7_resolution() -> Cluster {
    Cluster::build(BaseGerm::DuVal(DynkinType::E7), vec![]).expect("valid")
}

/// The coefficients `(2, 3, 6, 7, ..., r + 3)` of the degree `r + 3` ideal.
pub fn example_two_ideal(r: usize) -> QVector {
    let mut v = vec![2, 3, 6];
    v.extend((4..=r as i64).map(|i| i + 3));
    QVector::from_ints(v)
}

/// The closed form printed alongside the second example, kept for
/// comparison: `6 (r + 2) / (r + 3)`.
pub fn example_two_printed_lct(r: usize) -> Rational {
    let r = r as i64;
    Rational::new(6 * (r + 2), r + 3)
}

/// The lct attained at `E2`: `(k + 1) / x = 5 / (6 / (r + 3))`.
pub fn example_two_lct(r: usize) -> Rational {
    let r = r as i64;
    Rational::new(5 * (r + 3), 6)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub quantity: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureRow {
    pub name: String,
    pub checks: Vec<FixtureCheck>,
    pub note: Option<String>,
}

impl FixtureRow {
    fn new(name: impl Into<String>) -> Self {
        FixtureRow {
            name: name.into(),
            checks: Vec::new(),
            note: None,
        }
    }

    fn check(&mut self, quantity: &str, expected: impl ToString, observed: impl ToString) {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        self.checks.push(FixtureCheck {
            quantity: quantity.to_string(),
            pass: expected == observed,
            expected,
            observed,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub rows: Vec<FixtureRow>,
}

impl FixtureReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(FixtureRow::pass)
    }

    pub fn row(&self, name: &str) -> Option<&FixtureRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let status = if row.pass() { "PASS" } else { "FAIL" };
            writeln!(f, "{status}  {}", row.name)?;
            for c in &row.checks {
                let mark = if c.pass { "ok" } else { "MISMATCH" };
                writeln!(
                    f,
                    "      {:<16} expected {:<24} observed {:<24} {mark}",
                    c.quantity, c.expected, c.observed
                )?;
            }
            if let Some(note) = &row.note {
                writeln!(f, "      note: {note}")?;
            }
        }
        Ok(())
    }
}

fn example_one_row() -> FixtureRow {
    let c = example_one();
    let mut row = FixtureRow::new("example 1 (single blowup)");
    let cl = classify(&c, 0).expect("valid");
    row.check(
        "ideal (m=1)",
        "[1]",
        valuation_ideal(&c, 0, 1).expect("m>0"),
    );
    row.check("lct", "2", &cl.lct);
    row.check("k_E + 1", "2", cl.k + 1);
    row.check("verdict", "ComputesLct", cl.verdict);
    row
}

fn example_two_row(r: usize) -> FixtureRow {
    let c = example_two(r);
    let e = r - 1;
    let m = r as u64 + 3;
    let cl = classify(&c, e).expect("valid");
    let mut row = FixtureRow::new(format!("example 2 (r={r})"));
    row.check(
        &format!("ideal (m={m})"),
        example_two_ideal(r),
        valuation_ideal(&c, e, m).expect("m>0"),
    );
    row.check("fingen_degree", m, fingen_degree(&c, e).expect("valid"));
    row.check("lct", example_two_lct(r), &cl.lct);
    let verdict = if r == 3 {
        Verdict::ComputesLct
    } else {
        Verdict::MldObstructed { witness: 2 }
    };
    row.check("verdict", verdict, cl.verdict);
    if r > 3 {
        row.note = Some(format!(
            "closed form 6(r+2)/(r+3) = {} disagrees with the computed lct {}; \
             the computed value 5(r+3)/6 is used",
            example_two_printed_lct(r),
            cl.lct
        ));
    }
    row
}

fn e7_row() -> FixtureRow {
    let c = e7_resolution();
    let n = c.num_curves();
    let trivial = PairSpec {
        ideal: CompleteIdeal::trivial(&c),
        lambda: Rational::zero(),
    };
    let mut row = FixtureRow::new("E7 minimal resolution, trivial pair");
    row.check("curves", 7, n);
    let mld = mld_at_origin(&c, &trivial).expect("valid pair");
    row.check("mld", Mld::Finite(Rational::one()), mld);
    let mld_count = c
        .curves()
        .filter(|&e| computes_mld(&c, e, &trivial).expect("lc pair"))
        .count();
    row.check(
        "computes_mld",
        format!("{n} of {n}"),
        format!("{mld_count} of {n}"),
    );
    let lct: Vec<_> = c
        .curves()
        .filter(|&e| computes_lct(&c, e).expect("valid"))
        .collect();
    let proper = !lct.is_empty() && lct.len() < n;
    row.check(
        "computes_lct",
        "proper nonempty subset",
        if proper {
            "proper nonempty subset".to_string()
        } else {
            format!("{} of {n}", lct.len())
        },
    );
    row.note = Some(format!(
        "curves computing an lct: {}",
        lct.iter()
            .map(|e| format!("E{e}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    row
}

/// Runs every worked example and compares against its known answer.
pub fn paper_examples() -> FixtureReport {
    let mut rows = vec![example_one_row()];
    rows.extend((3..=8).map(example_two_row));
    rows.push(e7_row());
    FixtureReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let report = paper_examples();
        assert!(report.all_pass(), "{report}");
        assert_eq!(report.rows.len(), 8);
        assert!(report.row("example 2 (r=3)").unwrap().note.is_none());
        assert!(report.row("example 2 (r=6)").unwrap().note.is_some());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(example_two_lct(3), Rational::from_int(5));
        assert_eq!(example_two_lct(4), Rational::new(35, 6));
        assert_eq!(example_two_printed_lct(4), Rational::new(36, 7));
        assert_eq!(example_two_ideal(5), QVector::from_ints([2, 3, 6, 7, 8]));
    }

    #[test]
    fn report_is_deterministic() {
        assert_eq!(paper_examples(), paper_examples());
        assert_eq!(paper_examples().to_string(), paper_examples().to_string());
    }
}
