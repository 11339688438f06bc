//! Surface germs and clusters of infinitely near points.
//!
//! A [`Cluster`] is a base germ (a smooth point or a du Val singularity,
//! represented by its minimal resolution) followed by a sequence of point
//! blowups. Curves are numbered from 0: the minimal-resolution curves of a
//! du Val base come first in the fixed order documented on [`DynkinType`],
//! then one curve per blowup step.
//!
//! Intersection points are never given coordinates. A free point is a
//! general point of one curve; a satellite point is the unique intersection
//! of two curves meeting with intersection number 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GermError;
use crate::exact::{is_negative_definite, QMatrix, QVector, Rational};

/// Index of an exceptional curve in a cluster.
pub type CurveId = usize;

/// ADE type of a du Val singularity.
///
/// Curve order on the minimal resolution:
/// - `A(n)`: the path `0 - 1 - ... - (n-1)`;
/// - `D(n)`: the path `0 - ... - (n-3)` with `n-2` and `n-1` both attached
///   to `n-3`;
/// - `E6`, `E7`, `E8`: the path `0 - ... - (rank-2)` with the branch curve
///   `rank-1` attached to curve 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl DynkinType {
    pub fn rank(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::D(n) => n as usize,
            DynkinType::E6 => 6,
            DynkinType::E7 => 7,
            DynkinType::E8 => 8,
        }
    }

    pub fn validate(self) -> Result<(), GermError> {
        match self {
            DynkinType::A(n) if n < 1 => Err(GermError::InvalidDynkin(format!(
                "A{n}: rank must be at least 1"
            ))),
            DynkinType::D(n) if n < 4 => Err(GermError::InvalidDynkin(format!(
                "D{n}: rank must be at least 4"
            ))),
            _ => Ok(()),
        }
    }

    /// Edges of the Dynkin diagram in the documented curve order.
    pub fn edges(self) -> Vec<(CurveId, CurveId)> {
        let r = self.rank();
        match self {
            DynkinType::A(_) => (1..r).map(|i| (i - 1, i)).collect(),
            DynkinType::D(_) => {
                let mut e: Vec<_> = (1..r - 2).map(|i| (i - 1, i)).collect();
                e.push((r - 3, r - 2));
                e.push((r - 3, r - 1));
                e
            }
            DynkinType::E6 | DynkinType::E7 | DynkinType::E8 => {
                let mut e: Vec<_> = (1..r - 1).map(|i| (i - 1, i)).collect();
                e.push((2, r - 1));
                e
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
            DynkinType::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for DynkinType {
    type Err = GermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GermError::InvalidDynkin(format!("unrecognised Dynkin type {s:?}"));
        let (letter, rank) = s.split_at(s.len().min(1));
        let n: u32 = rank.parse().map_err(|_| bad())?;
        let t = match letter {
            "A" => DynkinType::A(n),
            "D" => DynkinType::D(n),
            "E" => match n {
                6 => DynkinType::E6,
                7 => DynkinType::E7,
                8 => DynkinType::E8,
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseGerm {
    Smooth,
    DuVal(DynkinType),
}

impl BaseGerm {
    /// Number of curves on the minimal resolution.
    pub fn rank(self) -> usize {
        match self {
            BaseGerm::Smooth => 0,
            BaseGerm::DuVal(t) => t.rank(),
        }
    }
}

impl fmt::Display for BaseGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseGerm::Smooth => write!(f, "smooth"),
            BaseGerm::DuVal(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for BaseGerm {
    type Err = GermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("smooth") {
            Ok(BaseGerm::Smooth)
        } else {
            Ok(BaseGerm::DuVal(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlowupStep {
    /// A general point of the given curve, or the germ's point itself.
    Free(Option<CurveId>),
    /// The intersection point of two curves.
    Satellite(CurveId, CurveId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveOrigin {
    MinimalResolution,
    Step(usize),
}

/// A validated base germ plus blowup sequence, with its derived numerical
/// data computed once at build time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cluster {
    base: BaseGerm,
    steps: Vec<BlowupStep>,
    matrix: Vec<Vec<i64>>,
    k: Vec<i64>,
    /// Curves through the centre of each curve's blowup (empty for
    /// minimal-resolution curves and for the blowup of the germ's point).
    centers: Vec<Vec<CurveId>>,
}

impl fmt::Debug for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cluster")
            .field("base", &self.base)
            .field("steps", &self.steps)
            .finish()
    }
}

impl Cluster {
    pub fn build(base: BaseGerm, steps: Vec<BlowupStep>) -> Result<Cluster, GermError> {
        let mut c = Cluster::base(base)?;
        for (index, step) in steps.into_iter().enumerate() {
            c.push_step(index, step)?;
        }
        assert!(
            is_negative_definite(&c.intersection_matrix()),
            "intersection form of a built cluster must be negative definite"
        );
        Ok(c)
    }

    /// The minimal resolution of the base germ with no blowups.
    pub fn base(base: BaseGerm) -> Result<Cluster, GermError> {
        let mut c = Cluster {
            base,
            steps: Vec::new(),
            matrix: Vec::new(),
            k: Vec::new(),
            centers: Vec::new(),
        };
        if let BaseGerm::DuVal(t) = base {
            t.validate()?;
            let r = t.rank();
            c.matrix = vec![vec![0; r]; r];
            for i in 0..r {
                c.matrix[i][i] = -2;
            }
            for (a, b) in t.edges() {
                c.matrix[a][b] = 1;
                c.matrix[b][a] = 1;
            }
            c.k = vec![0; r];
            c.centers = vec![Vec::new(); r];
        }
        Ok(c)
    }

    /// A new cluster with one more blowup step appended.
    pub fn extend(&self, step: BlowupStep) -> Result<Cluster, GermError> {
        let mut c = self.clone();
        c.push_step(self.steps.len(), step)?;
        Ok(c)
    }

    fn push_step(&mut self, index: usize, step: BlowupStep) -> Result<(), GermError> {
        let invalid = |reason: String| GermError::InvalidStep { index, reason };
        let n = self.num_curves();
        let check = |c: CurveId| {
            if c < n {
                Ok(c)
            } else {
                Err(invalid(format!(
                    "curve {c} does not exist yet ({n} curves so far)"
                )))
            }
        };
        let first_over_smooth = self.base == BaseGerm::Smooth && self.steps.is_empty();
        let centers = match step {
            BlowupStep::Free(None) => {
                if !first_over_smooth {
                    return Err(invalid(match self.base {
                        BaseGerm::Smooth => {
                            "free(null) is only legal as the first step".to_string()
                        }
                        BaseGerm::DuVal(_) => {
                            "over a du Val base every step must lie on an existing curve"
                                .to_string()
                        }
                    }));
                }
                Vec::new()
            }
            _ if first_over_smooth => {
                return Err(invalid(
                    "the first step over a smooth base must be free(null)".to_string(),
                ))
            }
            BlowupStep::Free(Some(c)) => vec![check(c)?],
            BlowupStep::Satellite(i, j) => {
                let (i, j) = (check(i)?, check(j)?);
                if i == j {
                    return Err(invalid(format!(
                        "satellite point needs two distinct curves, got ({i},{j})"
                    )));
                }
                if self.matrix[i][j] != 1 {
                    return Err(invalid(format!(
                        "curves {i} and {j} do not meet (intersection number {})",
                        self.matrix[i][j]
                    )));
                }
                vec![i, j]
            }
        };

        for row in &mut self.matrix {
            row.push(0);
        }
        let mut new_row = vec![0; n + 1];
        new_row[n] = -1;
        for &c in &centers {
            new_row[c] = 1;
            self.matrix[c][n] = 1;
            self.matrix[c][c] -= 1;
        }
        self.matrix.push(new_row);
        if let [i, j] = centers[..] {
            self.matrix[i][j] = 0;
            self.matrix[j][i] = 0;
        }
        self.k
            .push(1 + centers.iter().map(|&c| self.k[c]).sum::<i64>());
        self.centers.push(centers);
        self.steps.push(step);
        Ok(())
    }

    pub fn base_germ(&self) -> BaseGerm {
        self.base
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    pub fn num_curves(&self) -> usize {
        self.k.len()
    }

    pub fn curves(&self) -> std::ops::Range<CurveId> {
        0..self.num_curves()
    }

    /// The curve created by the final blowup, if any.
    pub fn last_curve(&self) -> Option<CurveId> {
        if self.steps.is_empty() {
            None
        } else {
            Some(self.num_curves() - 1)
        }
    }

    pub fn check_curve(&self, curve: CurveId) -> Result<CurveId, GermError> {
        if curve < self.num_curves() {
            Ok(curve)
        } else {
            Err(GermError::UnknownCurve {
                curve,
                count: self.num_curves(),
            })
        }
    }

    pub fn origin(&self, curve: CurveId) -> CurveOrigin {
        let r = self.base.rank();
        if curve < r {
            CurveOrigin::MinimalResolution
        } else {
            CurveOrigin::Step(curve - r)
        }
    }

    /// Curves passing through the point whose blowup created `curve`.
    pub fn centers(&self, curve: CurveId) -> &[CurveId] {
        &self.centers[curve]
    }

    pub fn intersection(&self, i: CurveId, j: CurveId) -> i64 {
        self.matrix[i][j]
    }

    pub fn self_intersection(&self, i: CurveId) -> i64 {
        self.matrix[i][i]
    }

    pub fn k(&self, i: CurveId) -> i64 {
        self.k[i]
    }

    pub fn intersection_rows(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn intersection_matrix(&self) -> QMatrix {
        QMatrix::from_int_rows(&self.matrix)
    }

    /// Relative canonical coefficients `k` of every curve.
    pub fn canonical_vector(&self) -> QVector {
        QVector::from_ints(self.k.iter().copied())
    }

    pub fn canonical_coefficients(&self) -> &[i64] {
        &self.k
    }

    /// `D · E_j` for every curve `j`.
    pub fn intersect_divisor(&self, d: &QVector) -> QVector {
        QVector(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(d.iter())
                        .filter(|(m, _)| **m != 0)
                        .map(|(&m, x)| Rational::from_int(m) * x)
                        .sum()
                })
                .collect(),
        )
    }

    /// Pairs of distinct curves that currently meet.
    pub fn crossings(&self) -> Vec<(CurveId, CurveId)> {
        let n = self.num_curves();
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.matrix[i][j] == 1)
            .collect()
    }

    /// Every step that may legally be appended.
    pub fn possible_steps(&self) -> Vec<BlowupStep> {
        if self.base == BaseGerm::Smooth && self.steps.is_empty() {
            return vec![BlowupStep::Free(None)];
        }
        self.curves()
            .map(|c| BlowupStep::Free(Some(c)))
            .chain(
                self.crossings()
                    .into_iter()
                    .map(|(i, j)| BlowupStep::Satellite(i, j)),
            )
            .collect()
    }

    /// `curve` together with every curve it was (recursively) blown up over,
    /// plus all minimal-resolution curves. Sorted ascending.
    pub fn ancestors(&self, curve: CurveId) -> Vec<CurveId> {
        let mut keep = vec![false; self.num_curves()];
        keep[..self.base.rank()].fill(true);
        let mut stack = vec![curve];
        while let Some(c) = stack.pop() {
            if !keep[c] {
                keep[c] = true;
            }
            stack.extend(self.centers[c].iter().copied().filter(|&p| !keep[p]));
        }
        (0..self.num_curves()).filter(|&c| keep[c]).collect()
    }

    /// Restricts the cluster to `curve`'s ancestors. Returns the pruned
    /// cluster and the map from pruned curve ids to original ids.
    pub fn prune_to(&self, curve: CurveId) -> (Cluster, Vec<CurveId>) {
        let kept = self.ancestors(curve);
        let mut new_id = vec![usize::MAX; self.num_curves()];
        for (n, &c) in kept.iter().enumerate() {
            new_id[c] = n;
        }
        let r = self.base.rank();
        let steps = kept
            .iter()
            .filter(|&&c| c >= r)
            .map(|&c| match self.steps[c - r] {
                BlowupStep::Free(on) => BlowupStep::Free(on.map(|p| new_id[p])),
                BlowupStep::Satellite(i, j) => BlowupStep::Satellite(new_id[i], new_id[j]),
            })
            .collect();
        let pruned = Cluster::build(self.base, steps)
            .expect("removing non-ancestor steps keeps a cluster valid");
        (pruned, kept)
    }

    /// Pulls a divisor back to a cluster extending this one by further
    /// steps: each new curve gets the sum of the coefficients of the curves
    /// through its centre.
    pub fn pullback_to(&self, extended: &Cluster, d: &QVector) -> QVector {
        debug_assert!(extended.steps.starts_with(&self.steps));
        let mut out = d.clone();
        for c in self.num_curves()..extended.num_curves() {
            let v = extended.centers[c].iter().map(|&p| out[p].clone()).sum();
            out.0.push(v);
        }
        out
    }

    pub fn dual_graph(&self) -> DualGraph {
        DualGraph {
            vertices: self
                .curves()
                .map(|i| DualVertex {
                    id: i,
                    self_intersection: self.matrix[i][i],
                    k: self.k[i],
                })
                .collect(),
            edges: self.crossings(),
        }
    }

    pub fn to_spec(&self) -> ClusterSpec {
        ClusterSpec {
            base: self.base.into(),
            steps: self.steps.iter().map(|&s| s.into()).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Cluster, GermError> {
        let spec: ClusterSpec =
            serde_json::from_str(s).map_err(|e| GermError::Json(e.to_string()))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("cluster specs always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualVertex {
    pub id: CurveId,
    pub self_intersection: i64,
    pub k: i64,
}

/// Vertices are curves; an edge joins two curves with intersection number 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: Vec<DualVertex>,
    pub edges: Vec<(CurveId, CurveId)>,
}

impl DualGraph {
    pub fn neighbors(&self, v: CurveId) -> Vec<CurveId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cluster {\n");
        for v in &self.vertices {
            out.push_str(&format!(
                "  E{id} [label=\"E{id} | self={s} | k={k}\"];\n",
                id = v.id,
                s = v.self_intersection,
                k = v.k
            ));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  E{a} -- E{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

// JSON wire format.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(String),
    DuVal { du_val: String },
}

impl From<BaseGerm> for BaseSpec {
    fn from(b: BaseGerm) -> Self {
        match b {
            BaseGerm::Smooth => BaseSpec::Named("smooth".to_string()),
            BaseGerm::DuVal(t) => BaseSpec::DuVal {
                du_val: t.to_string(),
            },
        }
    }
}

impl TryFrom<&BaseSpec> for BaseGerm {
    type Error = GermError;

    fn try_from(b: &BaseSpec) -> Result<Self, Self::Error> {
        match b {
            BaseSpec::Named(s) if s == "smooth" => Ok(BaseGerm::Smooth),
            BaseSpec::Named(s) => Err(GermError::Json(format!(
                "base must be \"smooth\" or {{\"du_val\": ...}}, got {s:?}"
            ))),
            BaseSpec::DuVal { du_val } => Ok(BaseGerm::DuVal(du_val.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepSpec {
    Free { on: Option<CurveId> },
    Satellite { on: [CurveId; 2] },
}

impl From<BlowupStep> for StepSpec {
    fn from(s: BlowupStep) -> Self {
        match s {
            BlowupStep::Free(on) => StepSpec::Free { on },
            BlowupStep::Satellite(i, j) => StepSpec::Satellite { on: [i, j] },
        }
    }
}

impl From<StepSpec> for BlowupStep {
    fn from(s: StepSpec) -> Self {
        match s {
            StepSpec::Free { on } => BlowupStep::Free(on),
            StepSpec::Satellite { on: [i, j] } => BlowupStep::Satellite(i, j),
        }
    }
}

/// Serialized form of a cluster:
/// `{"base": "smooth" | {"du_val": "E7"}, "steps": [{"kind": "free", "on": null}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub base: BaseSpec,
    pub steps: Vec<StepSpec>,
}

impl ClusterSpec {
    pub fn build(&self) -> Result<Cluster, GermError> {
        let base = BaseGerm::try_from(&self.base)?;
        Cluster::build(base, self.steps.iter().map(|&s| s.into()).collect())
    }
}
