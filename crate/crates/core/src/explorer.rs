//! Bounded exhaustive enumeration of clusters and pairs, and the property
//! sweeps run over it.
//!
//! Clusters are enumerated up to a canonical form: the blowup sequence is
//! read as a forest of infinitely near points, free points on the same curve
//! are interchangeable, and the steps are re-emitted in a fixed preorder.
//! No further isomorphism reduction is attempted (in particular, symmetries
//! of a Dynkin diagram are not quotiented out).

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{QVector, Rational};
use crate::germ::{BaseGerm, BlowupStep, Cluster, CurveId};
use crate::thresholds::{
    asymptotic_lct_from, classify, lct_ideal, log_discrepancy, obstruction_from, plt_check,
    unique_lc_place, CompleteIdeal, LctValue, PairSpec, Verdict,
};
use crate::valuation::{
    asymptotic_multiplicities, fingen_degree_from, rees_valuations, unload_in_place,
    valuation_ideal, ExcDivisor,
};

/// Seed for the reproducibility spot check; recorded in every report.
pub const SAMPLE_SEED: u64 = 0x5EED_0001;
/// Fraction of atlas rows recomputed through the public API.
pub const SAMPLE_PERCENT: usize = 5;
/// Multiples `n · m0` checked for finite generation and Rees valuations.
pub const MULTIPLE_BUDGET: u64 = 4;
/// Range of `m, n` used for the graded-sequence containment checks.
pub const GRADED_BUDGET: u64 = 6;
/// At most this many counterexamples are kept per suite.
const MAX_EXAMPLES_PER_SUITE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_steps: usize,
    pub bases: Vec<BaseGerm>,
    pub ideal_coeff_bound: u32,
    pub lambda_denominator_bound: u32,
    pub extension_depth: usize,
}

impl EnumBudget {
    pub fn smooth(max_steps: usize) -> Self {
        EnumBudget {
            max_steps,
            bases: vec![BaseGerm::Smooth],
            ideal_coeff_bound: 0,
            lambda_denominator_bound: 1,
            extension_depth: 0,
        }
    }

    pub fn with_bases(mut self, bases: Vec<BaseGerm>) -> Self {
        self.bases = bases;
        self
    }

    pub fn with_pairs(mut self, ideal_coeff_bound: u32, lambda_denominator_bound: u32) -> Self {
        self.ideal_coeff_bound = ideal_coeff_bound;
        self.lambda_denominator_bound = lambda_denominator_bound;
        self
    }

    pub fn with_extension_depth(mut self, depth: usize) -> Self {
        self.extension_depth = depth;
        self
    }
}

// Canonical form.

/// Canonical key of a cluster: equal keys iff the clusters agree up to
/// reordering of steps and permutation of free points on a common curve.
pub fn canonical_key(c: &Cluster) -> String {
    PointForest::new(c).key()
}

/// The cluster's steps re-emitted in canonical order.
pub fn canonicalize(c: &Cluster) -> Cluster {
    let forest = PointForest::new(c);
    let order = forest.preorder();
    let r = c.base_germ().rank();
    let mut new_id: Vec<CurveId> = (0..c.num_curves()).collect();
    for (pos, &curve) in order.iter().enumerate() {
        new_id[curve] = r + pos;
    }
    let steps = order
        .iter()
        .map(|&curve| match c.steps()[curve - r] {
            BlowupStep::Free(on) => BlowupStep::Free(on.map(|p| new_id[p])),
            BlowupStep::Satellite(i, j) => {
                let (a, b) = (new_id[i], new_id[j]);
                BlowupStep::Satellite(a.min(b), a.max(b))
            }
        })
        .collect();
    Cluster::build(c.base_germ(), steps).expect("reordering steps along the point forest is valid")
}

struct PointForest<'a> {
    c: &'a Cluster,
    free_children: Vec<Vec<CurveId>>,
    /// Satellite child at the crossing of two curves, keyed by (min, max).
    satellite_at: BTreeMap<(CurveId, CurveId), CurveId>,
    root: Option<CurveId>,
}

impl<'a> PointForest<'a> {
    fn new(c: &'a Cluster) -> Self {
        let n = c.num_curves();
        let r = c.base_germ().rank();
        let mut free_children = vec![Vec::new(); n];
        let mut satellite_at = BTreeMap::new();
        let mut root = None;
        for (s, step) in c.steps().iter().enumerate() {
            let curve = r + s;
            match *step {
                BlowupStep::Free(None) => root = Some(curve),
                BlowupStep::Free(Some(p)) => free_children[p].push(curve),
                BlowupStep::Satellite(i, j) => {
                    satellite_at.insert((i.min(j), i.max(j)), curve);
                }
            }
        }
        PointForest {
            c,
            free_children,
            satellite_at,
            root,
        }
    }

    /// Crossing slots owned by a step curve: its centres, newer step curves
    /// first, then minimal-resolution curves in label order.
    fn slots(&self, curve: CurveId) -> Vec<CurveId> {
        let r = self.c.base_germ().rank();
        let mut centers = self.c.centers(curve).to_vec();
        centers.sort_by_key(|&x| if x >= r { (0, usize::MAX - x) } else { (1, x) });
        centers
    }

    fn satellite(&self, a: CurveId, b: CurveId) -> Option<CurveId> {
        self.satellite_at.get(&(a.min(b), a.max(b))).copied()
    }

    fn sorted_free(&self, curve: CurveId) -> Vec<(String, CurveId)> {
        let mut kids: Vec<_> = self.free_children[curve]
            .iter()
            .map(|&k| (self.node_key(k), k))
            .collect();
        kids.sort();
        kids
    }

    fn node_key(&self, curve: CurveId) -> String {
        let free: Vec<String> = self
            .sorted_free(curve)
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        let slots: Vec<String> = self
            .slots(curve)
            .into_iter()
            .map(|s| {
                self.satellite(curve, s)
                    .map_or_else(|| "_".to_string(), |k| self.node_key(k))
            })
            .collect();
        format!("({}|{})", free.join(","), slots.join(","))
    }

    fn base_edges(&self) -> Vec<(CurveId, CurveId)> {
        match self.c.base_germ() {
            BaseGerm::Smooth => Vec::new(),
            BaseGerm::DuVal(t) => t.edges(),
        }
    }

    fn key(&self) -> String {
        let mut out = format!("{}:", self.c.base_germ());
        if let Some(root) = self.root {
            out.push_str(&self.node_key(root));
        }
        for b in 0..self.c.base_germ().rank() {
            let free: Vec<String> = self.sorted_free(b).into_iter().map(|(k, _)| k).collect();
            out.push_str(&format!("[{}]", free.join(",")));
        }
        for (a, b) in self.base_edges() {
            match self.satellite(a, b) {
                Some(k) => out.push_str(&format!("<{}>", self.node_key(k))),
                None => out.push_str("<_>"),
            }
        }
        out
    }

    fn visit(&self, curve: CurveId, out: &mut Vec<CurveId>) {
        out.push(curve);
        self.visit_children(curve, out);
    }

    fn visit_children(&self, curve: CurveId, out: &mut Vec<CurveId>) {
        for (_, k) in self.sorted_free(curve) {
            self.visit(k, out);
        }
        if curve >= self.c.base_germ().rank() {
            for s in self.slots(curve) {
                if let Some(k) = self.satellite(curve, s) {
                    self.visit(k, out);
                }
            }
        }
    }

    /// Step curves in canonical order (parents before children).
    fn preorder(&self) -> Vec<CurveId> {
        let mut out = Vec::new();
        if let Some(root) = self.root {
            self.visit(root, &mut out);
        }
        for b in 0..self.c.base_germ().rank() {
            self.visit_children(b, &mut out);
        }
        for (a, b) in self.base_edges() {
            if let Some(k) = self.satellite(a, b) {
                self.visit(k, &mut out);
            }
        }
        out
    }
}

/// Every cluster within the budget, once per canonical form, ordered by
/// base (in budget order), then step count, then canonical key.
///
/// Smooth bases start at one step (the blowup of the point itself); du Val
/// bases include the bare minimal resolution.
pub fn enumerate_clusters(b: &EnumBudget) -> Vec<Cluster> {
    let mut out = Vec::new();
    for &base in &b.bases {
        let Ok(start) = Cluster::base(base) else {
            continue;
        };
        let mut level: BTreeMap<String, Cluster> = BTreeMap::new();
        level.insert(canonical_key(&start), start);
        for depth in 0..=b.max_steps {
            if depth > 0 {
                let mut next = BTreeMap::new();
                for c in level.values() {
                    for step in c.possible_steps() {
                        let ext = c.extend(step).expect("possible steps are legal");
                        next.entry(canonical_key(&ext))
                            .or_insert_with(|| canonicalize(&ext));
                    }
                }
                level = next;
            }
            if depth > 0 || base != BaseGerm::Smooth {
                out.extend(level.values().cloned());
            }
        }
    }
    out
}

// Pairs.

/// Antinef closures of every integral vector with coefficients in
/// `0..=bound`, deduplicated, in lexicographic order.
pub fn enumerate_ideals(c: &Cluster, bound: u32) -> Vec<CompleteIdeal> {
    let n = c.num_curves();
    let mut seen = BTreeSet::new();
    let mut v = vec![0i64; n];
    loop {
        let mut z = v.clone();
        unload_in_place(c, &mut z);
        seen.insert(z);
        // odometer increment
        let mut i = 0;
        while i < n && v[i] == i64::from(bound) {
            v[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        v[i] += 1;
    }
    seen.into_iter()
        .map(|z| {
            CompleteIdeal::new_unchecked(
                ExcDivisor::from_ints(z).expect("unloading keeps coefficients nonnegative"),
            )
        })
        .collect()
}

/// The exponents paired with one ideal: every `p/q` in `(0, lct]` with
/// `q <= denominator_bound`, the lct itself, and every `λ` in that range
/// where two curves' log discrepancies cross. The unit ideal gets `λ = 0`.
pub fn lambda_grid(c: &Cluster, a: &CompleteIdeal, denominator_bound: u32) -> Vec<Rational> {
    let LctValue::Finite(lct) = lct_ideal(c, a).value else {
        return vec![Rational::zero()];
    };
    let mut grid = BTreeSet::new();
    for q in 1..=i64::from(denominator_bound.max(1)) {
        let top = (&lct * &Rational::from_int(q)).floor();
        let top: i64 = num_traits::ToPrimitive::to_i64(&top).expect("small lct");
        for p in 1..=top {
            grid.insert(Rational::new(p, q));
        }
    }
    grid.insert(lct.clone());
    let d = a.coeffs();
    for i in c.curves() {
        for j in (i + 1)..c.num_curves() {
            if d[i] == d[j] {
                continue;
            }
            let lambda = Rational::from_int(c.k(i) - c.k(j)) / (&d[i] - &d[j]);
            if lambda.is_positive() && lambda <= lct {
                grid.insert(lambda);
            }
        }
    }
    grid.into_iter().collect()
}

/// All pairs for a cluster: each enumerated ideal with its exponent grid.
pub fn enumerate_pairs(c: &Cluster, b: &EnumBudget) -> Vec<PairSpec> {
    enumerate_ideals(c, b.ideal_coeff_bound)
        .into_iter()
        .flat_map(|a| {
            lambda_grid(c, &a, b.lambda_denominator_bound)
                .into_iter()
                .map(move |lambda| PairSpec {
                    ideal: a.clone(),
                    lambda,
                })
        })
        .collect()
}

// Extensions for the mld guard.

/// Curves reachable by up to `depth` further blowups, as
/// `(k, weights)` with `ord(new curve) = Σ weights_j · d_j` for any ideal
/// pulled back from `c`.
pub fn extension_curves(c: &Cluster, depth: usize) -> BTreeSet<(i64, Vec<i64>)> {
    let n = c.num_curves();
    let mut out = BTreeSet::new();
    let mut frontier = vec![c.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for ext in &frontier {
            for step in ext.possible_steps() {
                let grown = ext.extend(step).expect("possible steps are legal");
                next.push(grown);
            }
        }
        frontier = next;
        for ext in &frontier {
            let new = ext.num_curves() - 1;
            let weights = (0..n)
                .map(|j| {
                    let pulled = c.pullback_to(ext, &QVector::basis(n, j, 1));
                    pulled[new].to_i64().expect("small weights")
                })
                .collect();
            out.insert((ext.k(new), weights));
        }
    }
    out
}

// Atlas.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasRow {
    pub base: String,
    pub steps: String,
    pub curve: CurveId,
    pub k: i64,
    pub lct: Rational,
    pub gap: Rational,
    pub fingen_degree: u64,
    pub verdict: String,
    pub witness: Option<CurveId>,
    #[serde(skip)]
    pub num_curves: usize,
    #[serde(skip)]
    pub cluster_index: usize,
}

fn atlas_rows_for(index: usize, c: &Cluster) -> Vec<AtlasRow> {
    c.curves()
        .map(|e| {
            let cl = classify(c, e).expect("valid curve");
            AtlasRow {
                base: c.base_germ().to_string(),
                steps: serde_json::to_string(&c.to_spec().steps).expect("steps serialize"),
                curve: e,
                k: cl.k,
                lct: cl.lct,
                gap: cl.gap,
                fingen_degree: cl.fingen_degree,
                verdict: cl.verdict.name().to_string(),
                witness: cl.verdict.witness(),
                num_curves: c.num_curves(),
                cluster_index: index,
            }
        })
        .collect()
}

/// One row per (cluster, curve) in enumeration order.
pub fn atlas(b: &EnumBudget) -> Vec<AtlasRow> {
    let clusters = enumerate_clusters(b);
    clusters
        .par_iter()
        .enumerate()
        .map(|(i, c)| atlas_rows_for(i, c))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Atlas rows sorted by gap descending, then curve count ascending, then
/// enumeration order.
pub fn extremal_gaps(b: &EnumBudget) -> Vec<AtlasRow> {
    let mut rows = atlas(b);
    rows.sort_by(|x, y| {
        y.gap
            .cmp(&x.gap)
            .then(x.num_curves.cmp(&y.num_curves))
            .then(x.cluster_index.cmp(&y.cluster_index))
            .then(x.curve.cmp(&y.curve))
    });
    rows
}

pub const ATLAS_COLUMNS: [&str; 9] = [
    "base",
    "steps",
    "curve",
    "k",
    "lct",
    "gap",
    "fingen_degree",
    "verdict",
    "witness",
];

pub fn write_atlas_csv<W: Write>(rows: &[AtlasRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ATLAS_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.base.clone(),
            r.steps.clone(),
            r.curve.to_string(),
            r.k.to_string(),
            r.lct.to_string(),
            r.gap.to_string(),
            r.fingen_degree.to_string(),
            r.verdict.clone(),
            r.witness.map_or_else(String::new, |w| w.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// Verification.

pub mod suites {
    pub const DSTAR_NORMALIZED: &str = "dstar_normalized";
    pub const DSTAR_POSITIVE: &str = "dstar_positive";
    pub const ASYMPTOTIC_LCT_UPPER_BOUND: &str = "asymptotic_lct_upper_bound";
    pub const UNLOADING_MATCHES_LINEAR_ALGEBRA: &str = "unloading_matches_linear_algebra";
    pub const FINGEN_MULTIPLES: &str = "fingen_multiples";
    pub const REES_SINGLETON: &str = "rees_singleton";
    pub const REES_CONTAINS_CURVE: &str = "rees_contains_curve";
    pub const IDEALS_MONOTONE: &str = "ideals_monotone";
    pub const GRADED_CONTAINMENT: &str = "graded_containment";
    pub const MODEL_STABILITY: &str = "model_stability";
    pub const PULLBACK_LCT_STABLE: &str = "pullback_lct_stable";
    pub const LCT_SCALING: &str = "lct_scaling";
    pub const LCT_CONTAINMENT: &str = "lct_containment";
    pub const PRIME_BLOWUP_LCT: &str = "prime_blowup_lct";
    pub const LC_PLACE_IMPLIES_PLT: &str = "lc_place_implies_plt";
    pub const PRUNED_DICHOTOMY: &str = "pruned_dichotomy";
    pub const MLD_IMPLIES_LCT: &str = "mld_implies_lct";
    pub const MLD_IMPLIES_LCT_DU_VAL: &str = "mld_implies_lct_du_val";
    pub const OBSTRUCTION_STRICT: &str = "obstruction_strict";
    pub const GAP_LOWER_BOUND: &str = "gap_lower_bound";
    pub const GAP_ATTAINED: &str = "gap_attained";
    pub const MLD_EXTENSION_GUARD: &str = "mld_extension_guard";
    pub const ATLAS_REPRODUCIBLE: &str = "atlas_reproducible";
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteStats {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub suite: String,
    pub cluster: String,
    pub curve: Option<CurveId>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub clusters: u64,
    pub curves: u64,
    pub ideals: u64,
    pub pairs: u64,
    pub suites: BTreeMap<String, SuiteStats>,
    pub counterexamples: Vec<Counterexample>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty() && self.suites.values().all(|s| s.failed == 0)
    }

    pub fn suite(&self, name: &str) -> SuiteStats {
        self.suites.get(name).cloned().unwrap_or_default()
    }

    fn merge(&mut self, other: VerificationReport) {
        self.clusters += other.clusters;
        self.curves += other.curves;
        self.ideals += other.ideals;
        self.pairs += other.pairs;
        for (name, s) in other.suites {
            let e = self.suites.entry(name).or_default();
            e.checked += s.checked;
            e.failed += s.failed;
        }
        for cx in other.counterexamples {
            let kept = self
                .counterexamples
                .iter()
                .filter(|c| c.suite == cx.suite)
                .count();
            if kept < MAX_EXAMPLES_PER_SUITE {
                self.counterexamples.push(cx);
            }
        }
    }
}

/// Per-cluster check recorder.
struct Recorder<'a> {
    cluster: &'a Cluster,
    report: VerificationReport,
}

impl<'a> Recorder<'a> {
    fn new(cluster: &'a Cluster) -> Self {
        Recorder {
            cluster,
            report: VerificationReport::default(),
        }
    }

    fn check(
        &mut self,
        suite: &str,
        ok: bool,
        curve: Option<CurveId>,
        detail: impl FnOnce() -> String,
    ) {
        let s = self.report.suites.entry(suite.to_string()).or_default();
        s.checked += 1;
        if !ok {
            s.failed += 1;
            if s.failed as usize <= MAX_EXAMPLES_PER_SUITE {
                self.report.counterexamples.push(Counterexample {
                    suite: suite.to_string(),
                    cluster: self.cluster.to_json(),
                    curve,
                    detail: detail(),
                });
            }
        }
    }
}

/// Per-curve data shared by the sweeps.
struct CurveData {
    dstar: QVector,
    m0: u64,
    lct: Rational,
    computes_lct: bool,
    witnesses: Vec<CurveId>,
}

fn verify_cluster(c: &Cluster, b: &EnumBudget) -> VerificationReport {
    use suites::*;
    let mut rec = Recorder::new(c);
    rec.report.clusters = 1;
    rec.report.curves = c.num_curves() as u64;
    let n = c.num_curves();
    let zero = Rational::zero();

    // Valuation-level suites.
    let mut curves = Vec::with_capacity(n);
    for e in c.curves() {
        let dstar = asymptotic_multiplicities(c, e).expect("valid curve");
        rec.check(
            DSTAR_NORMALIZED,
            dstar[e] == Rational::one(),
            Some(e),
            || format!("dstar = {dstar}"),
        );
        rec.check(
            DSTAR_POSITIVE,
            dstar.iter().all(Rational::is_positive),
            Some(e),
            || format!("dstar = {dstar}"),
        );
        let m0 = match fingen_degree_from(c, e, &dstar) {
            Ok(m0) => m0,
            Err(err) => {
                rec.check(UNLOADING_MATCHES_LINEAR_ALGEBRA, false, Some(e), || {
                    err.to_string()
                });
                continue;
            }
        };
        let generator = dstar.scale(&Rational::from_int(m0));
        let unloaded = valuation_ideal(c, e, m0).expect("m0 >= 1");
        rec.check(
            UNLOADING_MATCHES_LINEAR_ALGEBRA,
            unloaded.coeffs() == &generator,
            Some(e),
            || format!("unload(m0 e_E) = {unloaded}, m0 dstar = {generator}"),
        );
        for mult in 1..=MULTIPLE_BUDGET {
            let m = mult * m0;
            let d = valuation_ideal(c, e, m).expect("m >= 1");
            let expect = generator.scale(&Rational::from_int(mult));
            rec.check(FINGEN_MULTIPLES, d.coeffs() == &expect, Some(e), || {
                format!("a_{m} = {d}, expected {expect}")
            });
            let rees = rees_valuations(c, &d);
            rec.check(
                REES_SINGLETON,
                rees.as_deref() == Ok(&[e][..]),
                Some(e),
                || format!("Rees valuations of a_{m}: {rees:?}"),
            );
            rec.check(
                REES_CONTAINS_CURVE,
                rees.as_ref().is_ok_and(|r| r.contains(&e)),
                Some(e),
                || format!("Rees valuations of a_{m}: {rees:?}"),
            );
        }
        let ideals: Vec<ExcDivisor> = (1..=2 * GRADED_BUDGET)
            .map(|m| valuation_ideal(c, e, m).expect("m >= 1"))
            .collect();
        for m in 1..(2 * GRADED_BUDGET as usize) {
            let (lo, hi) = (&ideals[m - 1], &ideals[m]);
            rec.check(
                IDEALS_MONOTONE,
                lo.coeffs().le(hi.coeffs()),
                Some(e),
                || format!("a_{m} = {lo} is not below a_{} = {hi}", m + 1),
            );
        }
        for m in 1..=GRADED_BUDGET as usize {
            for k in 1..=GRADED_BUDGET as usize {
                let sum = QVector(
                    ideals[m - 1]
                        .coeffs()
                        .iter()
                        .zip(ideals[k - 1].coeffs().iter())
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                let joint = &ideals[m + k - 1];
                rec.check(GRADED_CONTAINMENT, joint.coeffs().le(&sum), Some(e), || {
                    format!("a_{} = {joint} exceeds a_{m} + a_{k} = {sum}", m + k)
                });
            }
        }

        let report = asymptotic_lct_from(c, e, &dstar);
        let LctValue::Finite(lct) = report.value.clone() else {
            unreachable!("asymptotic lct is finite")
        };
        let bound = Rational::from_int(c.k(e) + 1);
        let gap = &bound - &lct;
        rec.check(
            ASYMPTOTIC_LCT_UPPER_BOUND,
            !gap.is_negative(),
            Some(e),
            || format!("lct = {lct} > k_E + 1 = {bound}"),
        );
        let pbl = report.prime_blowup_lct.clone().expect("asymptotic report");
        rec.check(
            PRIME_BLOWUP_LCT,
            pbl == &lct - Rational::from_int(c.k(e))
                && (gap >= Rational::one() || pbl.is_positive()),
            Some(e),
            || format!("prime blowup lct {pbl}, lct {lct}, gap {gap}"),
        );

        let verdict = classify(c, e).expect("valid curve").verdict;
        rec.check(
            PRUNED_DICHOTOMY,
            verdict != Verdict::Indeterminate,
            Some(e),
            || "classification is Indeterminate after pruning".to_string(),
        );
        let mut witnesses: Vec<CurveId> = verdict.witness().into_iter().collect();
        if let Some(f) = obstruction_from(c, e, &dstar) {
            if !witnesses.contains(&f) {
                witnesses.push(f);
            }
        }

        curves.push(CurveData {
            computes_lct: gap.is_zero(),
            dstar,
            m0,
            lct,
            witnesses,
        });
    }
    if curves.len() != n {
        return rec.report;
    }

    // Gap attainment by the witness ideal.
    for (e, data) in curves.iter().enumerate() {
        if !data.computes_lct {
            continue;
        }
        let a = CompleteIdeal::new_unchecked(valuation_ideal(c, e, data.m0).expect("m0 >= 1"));
        let lambda = lct_ideal(c, &a)
            .value
            .finite()
            .cloned()
            .expect("nonzero ideal");
        let p = PairSpec { ideal: a, lambda };
        let ld = log_discrepancy(c, &p, e);
        rec.check(GAP_ATTAINED, ld.is_zero(), Some(e), || {
            format!("witness pair gives a_E = {ld}")
        });
    }

    // Model stability under one further blowup.
    for step in c.possible_steps() {
        let ext = c.extend(step).expect("legal");
        for (e, data) in curves.iter().enumerate() {
            let x = asymptotic_multiplicities(&ext, e).expect("valid");
            let same = (0..n).all(|j| x[j] == data.dstar[j]);
            let lct_same =
                asymptotic_lct_from(&ext, e, &x).value == LctValue::Finite(data.lct.clone());
            rec.check(MODEL_STABILITY, same && lct_same, Some(e), || {
                format!("after {step:?}: dstar {x} vs {}", data.dstar)
            });
        }
    }

    // Pair-level suites.
    let ideals = enumerate_ideals(c, b.ideal_coeff_bound);
    rec.report.ideals = ideals.len() as u64;
    let extensions: Vec<(i64, Vec<i64>)> =
        extension_curves(c, b.extension_depth).into_iter().collect();
    let exts: Vec<Cluster> = c
        .possible_steps()
        .into_iter()
        .map(|s| c.extend(s).expect("legal"))
        .collect();
    let ks: Vec<Rational> = c.curves().map(|j| Rational::from_int(c.k(j) + 1)).collect();
    let lcts: Vec<LctValue> = ideals.iter().map(|a| lct_ideal(c, a).value).collect();

    for (ai, a) in ideals.iter().enumerate() {
        let d = a.coeffs();
        let lct = &lcts[ai];

        // Scaling and containment of ideal thresholds.
        for m in 2..=3i64 {
            let scaled = CompleteIdeal::new_unchecked(a.divisor().scale(&Rational::from_int(m)));
            let got = lct_ideal(c, &scaled).value;
            let want = match lct {
                LctValue::Finite(v) => LctValue::Finite(v / &Rational::from_int(m)),
                LctValue::Infinite => LctValue::Infinite,
            };
            rec.check(LCT_SCALING, got == want, None, || {
                format!("lct({m} * {}) = {got}, expected {want}", a.divisor())
            });
        }
        for (bi, other) in ideals.iter().enumerate() {
            if bi == ai || !other.coeffs().le(d) {
                continue;
            }
            let ok = match (&lcts[ai], &lcts[bi]) {
                (LctValue::Finite(x), LctValue::Finite(y)) => x <= y,
                (_, LctValue::Infinite) => true,
                (LctValue::Infinite, LctValue::Finite(_)) => false,
            };
            rec.check(LCT_CONTAINMENT, ok, None, || {
                format!(
                    "{} >= {} but lct {} > {}",
                    a.divisor(),
                    other.divisor(),
                    lcts[ai],
                    lcts[bi]
                )
            });
        }

        if let Some(e) = unique_lc_place(c, a) {
            let plt = plt_check(c, e).expect("valid");
            rec.check(LC_PLACE_IMPLIES_PLT, plt, Some(e), || {
                format!("unique lc place of {} fails the plt check", a.divisor())
            });
        }

        for ext in &exts {
            let pulled = c.pullback_to(ext, d);
            let got = lct_ideal(
                ext,
                &CompleteIdeal::new_unchecked(ExcDivisor::new(pulled).expect("nonneg")),
            )
            .value;
            rec.check(PULLBACK_LCT_STABLE, &got == lct, None, || {
                format!(
                    "lct of {} changes to {got} on {}",
                    a.divisor(),
                    ext.to_json()
                )
            });
        }

        if a.is_trivial() {
            continue;
        }
        // Envelope of extension curves for this ideal: min k per weight.
        let mut envelope: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (k, w) in &extensions {
            let weight: Rational = w
                .iter()
                .zip(d.iter())
                .map(|(&wj, dj)| Rational::from_int(wj) * dj)
                .sum();
            let kk = Rational::from_int(k + 1);
            envelope
                .entry(weight)
                .and_modify(|v| {
                    if kk < *v {
                        *v = kk.clone()
                    }
                })
                .or_insert(kk);
        }

        for lambda in lambda_grid(c, a, b.lambda_denominator_bound) {
            rec.report.pairs += 1;
            let ld: Vec<Rational> = (0..n).map(|j| &ks[j] - &(&lambda * &d[j])).collect();
            let mld = ld.iter().min().expect("nonempty").clone();
            if mld.is_negative() {
                continue;
            }
            for e in 0..n {
                let data = &curves[e];
                if ld[e] == mld {
                    let suite = if c.base_germ() == BaseGerm::Smooth {
                        MLD_IMPLIES_LCT
                    } else {
                        MLD_IMPLIES_LCT_DU_VAL
                    };
                    rec.check(suite, data.computes_lct, Some(e), || {
                        format!(
                            "E computes mld {mld} of ({}, λ = {lambda}) but not an lct",
                            a.divisor()
                        )
                    });
                }
                let gap = &ks[e] - &data.lct;
                rec.check(GAP_LOWER_BOUND, ld[e] >= gap, Some(e), || {
                    format!(
                        "a_E = {} < gap {gap} at ({}, λ = {lambda})",
                        ld[e],
                        a.divisor()
                    )
                });
                for &f in &data.witnesses {
                    rec.check(OBSTRUCTION_STRICT, ld[f] < ld[e], Some(e), || {
                        format!(
                            "witness E{f}: a_F = {} not below a_E = {} at ({}, λ = {lambda})",
                            ld[f],
                            ld[e],
                            a.divisor()
                        )
                    });
                }
            }
            if !envelope.is_empty() {
                let lowest = envelope
                    .iter()
                    .map(|(w, k)| k - &(&lambda * w))
                    .min()
                    .expect("nonempty");
                rec.check(MLD_EXTENSION_GUARD, lowest >= mld, None, || {
                    format!(
                        "extended curve reaches {lowest} < mld {mld} at ({}, λ = {lambda})",
                        a.divisor()
                    )
                });
            }
        }
    }
    let _ = zero;
    rec.report
}

/// Runs every property suite over the enumeration. Failures are recorded
/// in the report, never raised.
pub fn verify_theorems(b: &EnumBudget) -> VerificationReport {
    let clusters = enumerate_clusters(b);
    let parts: Vec<VerificationReport> =
        clusters.par_iter().map(|c| verify_cluster(c, b)).collect();
    let mut report = VerificationReport {
        seed: SAMPLE_SEED,
        ..Default::default()
    };
    for p in parts {
        report.merge(p);
    }

    // Reproducibility: recompute a seeded sample of atlas rows directly.
    let rows: Vec<AtlasRow> = clusters
        .par_iter()
        .enumerate()
        .map(|(i, c)| atlas_rows_for(i, c))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let sample_size = rows.len().div_ceil(100 / SAMPLE_PERCENT);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut sample = report_sample(&mut rng, &rows, sample_size);
    sample.sort_by_key(|r| (r.cluster_index, r.curve));
    for row in sample {
        let c = &clusters[row.cluster_index];
        let mut rec = Recorder::new(c);
        let ok = reproduce_row(c, row);
        rec.check(suites::ATLAS_REPRODUCIBLE, ok, Some(row.curve), || {
            format!("{row:?}")
        });
        report.merge(rec.report);
    }
    report
}

fn report_sample<'r>(rng: &mut ChaCha8Rng, rows: &'r [AtlasRow], size: usize) -> Vec<&'r AtlasRow> {
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.shuffle(rng);
    idx.truncate(size);
    idx.into_iter().map(|i| &rows[i]).collect()
}

/// Recomputes one atlas row through the thresholds and valuation APIs
/// without going through `classify`.
fn reproduce_row(c: &Cluster, row: &AtlasRow) -> bool {
    let e = row.curve;
    let Ok(report) = crate::thresholds::asymptotic_lct(c, e) else {
        return false;
    };
    let Ok(gap) = crate::thresholds::lct_gap(c, e) else {
        return false;
    };
    let Ok(m0) = crate::valuation::fingen_degree(c, e) else {
        return false;
    };
    let computes = gap.is_zero();
    let (pruned, map) = c.prune_to(e);
    let pe = map.iter().position(|&j| j == e).expect("E kept");
    let witness = crate::thresholds::mld_obstruction(&pruned, pe)
        .ok()
        .flatten()
        .map(|f| map[f]);
    let verdict = if computes {
        "ComputesLct"
    } else if witness.is_some() {
        "MldObstructed"
    } else {
        "Indeterminate"
    };
    report.value == LctValue::Finite(row.lct.clone())
        && gap == row.gap
        && m0 == row.fingen_degree
        && row.k == c.k(e)
        && row.verdict == verdict
        && row.witness == if computes { None } else { witness }
}
