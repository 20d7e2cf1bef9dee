//! Similarity/difference gain scores and the summary objective.
//!
//! A representative `x` on side `s` covers every `y` in its subtree with value
//! `rep_weight_s(x) · ratio_s(y) · dis(x, y)`, where
//!
//! * `rep_weight_sim(x) = ω(x) · (1 − SimDif(x))`
//! * `rep_weight_dif(x) = ω(x) · SimDif(x) · γ`
//! * `ratio_sim(y) = min/max` and `ratio_dif(y) = |Δ|/max` of `y`'s two weights.
//!
//! The summary score sums, per side and per node, the best value offered by any selected
//! ancestor on that side. This is a facility-location objective, hence monotone and
//! submodular on each side.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::all_scores;
use crate::error::{Error, Result};
use crate::tree::{level_discount, NodeId, WeightedTreePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Sim,
    Dif,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Sim, Side::Dif];

    #[inline]
    fn idx(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Sim => "SIM",
            Side::Dif => "DIF",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SIM" => Ok(Side::Sim),
            "DIF" => Ok(Side::Dif),
            other => Err(Error::Parse(format!("unknown side {other:?}"))),
        }
    }
}

/// Similarity representatives `s1` and difference representatives `s2` under budget `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SummarySelection {
    pub s1: BTreeSet<NodeId>,
    pub s2: BTreeSet<NodeId>,
    pub k: usize,
}

impl SummarySelection {
    pub fn new(k: usize) -> Self {
        SummarySelection {
            k,
            ..Default::default()
        }
    }

    pub fn from_sets(
        s1: impl IntoIterator<Item = NodeId>,
        s2: impl IntoIterator<Item = NodeId>,
        k: usize,
    ) -> Result<Self> {
        let mut s = SummarySelection::new(k);
        for x in s1 {
            s.insert(x, Side::Sim)?;
        }
        for x in s2 {
            s.insert(x, Side::Dif)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.s1.len() + self.s2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s1.is_empty() && self.s2.is_empty()
    }

    pub fn contains(&self, x: NodeId) -> bool {
        self.s1.contains(&x) || self.s2.contains(&x)
    }

    pub fn side_of(&self, x: NodeId) -> Option<Side> {
        if self.s1.contains(&x) {
            Some(Side::Sim)
        } else if self.s2.contains(&x) {
            Some(Side::Dif)
        } else {
            None
        }
    }

    pub fn side(&self, side: Side) -> &BTreeSet<NodeId> {
        match side {
            Side::Sim => &self.s1,
            Side::Dif => &self.s2,
        }
    }

    /// Adds `x` on `side`. The budget `k` is not enforced here; callers own that limit.
    pub fn insert(&mut self, x: NodeId, side: Side) -> Result<()> {
        if self.contains(x) {
            return Err(Error::AlreadySelected(x.0));
        }
        match side {
            Side::Sim => self.s1.insert(x),
            Side::Dif => self.s2.insert(x),
        };
        Ok(())
    }

    pub fn remove(&mut self, x: NodeId) -> Option<Side> {
        let side = self.side_of(x)?;
        match side {
            Side::Sim => self.s1.remove(&x),
            Side::Dif => self.s2.remove(&x),
        };
        Some(side)
    }

    /// Union of both sides in ascending id order.
    pub fn nodes(&self) -> BTreeSet<NodeId> {
        self.s1.union(&self.s2).copied().collect()
    }

    pub fn with(&self, x: NodeId, side: Side) -> Result<Self> {
        let mut s = self.clone();
        s.insert(x, side)?;
        Ok(s)
    }
}

/// `min / max` of a weight pair; 1 for an all-zero pair.
pub fn sim_ratio(w1: u64, w2: u64) -> f64 {
    let hi = w1.max(w2);
    if hi == 0 {
        1.0
    } else {
        w1.min(w2) as f64 / hi as f64
    }
}

/// `|w1 - w2| / max`; 0 for an all-zero pair.
pub fn dif_ratio(w1: u64, w2: u64) -> f64 {
    let hi = w1.max(w2);
    if hi == 0 {
        0.0
    } else {
        w1.abs_diff(w2) as f64 / hi as f64
    }
}

/// Best covering representative of one node on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cover {
    pub rep: NodeId,
    pub value: f64,
}

/// For every node, the selected ancestor (per side) that covers it best.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoverageAssignment {
    pub sim: Vec<Option<Cover>>,
    pub dif: Vec<Option<Cover>>,
}

impl CoverageAssignment {
    pub fn side(&self, side: Side) -> &[Option<Cover>] {
        match side {
            Side::Sim => &self.sim,
            Side::Dif => &self.dif,
        }
    }
}

/// Precomputed per-node factors of the objective for one tree pair.
#[derive(Debug, Clone)]
pub struct ScoreModel<'a> {
    pair: &'a WeightedTreePair,
    simdif: Vec<f64>,
    gamma: f64,
    rep_weight: [Vec<f64>; 2],
    ratio: [Vec<f64>; 2],
}

impl<'a> ScoreModel<'a> {
    /// Computes SimDif scores with the given β and the pair's scaling coefficient.
    pub fn new(pair: &'a WeightedTreePair, beta: usize) -> Result<Self> {
        let scores = all_scores(pair, beta)?;
        Ok(Self::from_scores(pair, scores, pair.scaling_coefficient()))
    }

    pub fn from_scores(pair: &'a WeightedTreePair, simdif: Vec<f64>, gamma: f64) -> Self {
        assert_eq!(simdif.len(), pair.len());
        let n = pair.len();
        let mut rep_sim = Vec::with_capacity(n);
        let mut rep_dif = Vec::with_capacity(n);
        let mut ratio_sim = Vec::with_capacity(n);
        let mut ratio_dif = Vec::with_capacity(n);
        for x in pair.nodes() {
            let omega = pair.differential_weight(x) as f64;
            let sd = simdif[x.0];
            rep_sim.push(omega * (1.0 - sd));
            rep_dif.push(omega * sd * gamma);
            let (a, b) = pair.weights(x);
            ratio_sim.push(sim_ratio(a, b));
            ratio_dif.push(dif_ratio(a, b));
        }
        ScoreModel {
            pair,
            simdif,
            gamma,
            rep_weight: [rep_sim, rep_dif],
            ratio: [ratio_sim, ratio_dif],
        }
    }

    pub fn pair(&self) -> &'a WeightedTreePair {
        self.pair
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn simdif(&self, x: NodeId) -> f64 {
        self.simdif[x.0]
    }

    pub fn simdif_scores(&self) -> &[f64] {
        &self.simdif
    }

    /// Value `x` offers to `y` when representing `side`; 0 outside `x`'s subtree.
    #[inline]
    pub fn contribution(&self, x: NodeId, side: Side, y: NodeId) -> f64 {
        if !self.pair.is_descendant(y, x) {
            return 0.0;
        }
        self.covered_value(x, side, y)
    }

    // caller guarantees y is in x's subtree
    #[inline]
    fn covered_value(&self, x: NodeId, side: Side, y: NodeId) -> f64 {
        let gap = self.pair.level(y) - self.pair.level(x);
        self.rep_weight[side.idx()][x.0] * self.ratio[side.idx()][y.0] * level_discount(gap)
    }

    fn self_feature(&self, x: NodeId, side: Side, excluded: &BTreeSet<NodeId>) -> f64 {
        // y is excluded when some member of `excluded` is an ancestor of y (or y itself)
        if self.pair.ancestor_chain(x).any(|z| excluded.contains(&z)) {
            return 0.0;
        }
        let lx = self.pair.level(x);
        let mut total = 0.0;
        let sub = self.pair.subtree(x);
        let mut i = 0;
        while i < sub.len() {
            let y = sub[i];
            if excluded.contains(&y) {
                i += self.pair.subtree_size(y);
                continue;
            }
            total += self.ratio[side.idx()][y.0] * level_discount(self.pair.level(y) - lx);
            i += 1;
        }
        total
    }

    /// Similarity self feature of `x` with descendants of `s1` members excluded.
    pub fn self_sim(&self, x: NodeId, s1: &BTreeSet<NodeId>) -> f64 {
        self.self_feature(x, Side::Sim, s1)
    }

    /// Difference self feature (already scaled by γ).
    pub fn self_dif(&self, x: NodeId, s2: &BTreeSet<NodeId>) -> f64 {
        self.gamma * self.self_feature(x, Side::Dif, s2)
    }

    pub fn gain_sim(&self, x: NodeId, s1: &BTreeSet<NodeId>) -> f64 {
        self.pair.differential_weight(x) as f64 * (1.0 - self.simdif[x.0]) * self.self_sim(x, s1)
    }

    pub fn gain_dif(&self, x: NodeId, s2: &BTreeSet<NodeId>) -> f64 {
        self.pair.differential_weight(x) as f64 * self.simdif[x.0] * self.self_dif(x, s2)
    }

    /// Coverage of every node by its best selected ancestor per side. Ties go to the
    /// deepest ancestor.
    pub fn coverage(&self, selection: &SummarySelection) -> CoverageAssignment {
        let n = self.pair.len();
        let mut out = CoverageAssignment {
            sim: vec![None; n],
            dif: vec![None; n],
        };
        for y in self.pair.nodes() {
            for z in self.pair.ancestor_chain(y) {
                let Some(side) = selection.side_of(z) else {
                    continue;
                };
                let value = self.covered_value(z, side, y);
                let slot = match side {
                    Side::Sim => &mut out.sim[y.0],
                    Side::Dif => &mut out.dif[y.0],
                };
                match slot {
                    Some(c) if c.value >= value => {}
                    _ => *slot = Some(Cover { rep: z, value }),
                }
            }
        }
        out
    }

    /// Objective value of `selection` and the coverage that realizes it.
    pub fn summary_score(&self, selection: &SummarySelection) -> (f64, CoverageAssignment) {
        let cov = self.coverage(selection);
        let total = side_total(&cov.sim) + side_total(&cov.dif);
        (total, cov)
    }

    /// Objective restricted to one side.
    pub fn side_score(&self, selection: &SummarySelection, side: Side) -> f64 {
        side_total(self.coverage(selection).side(side))
    }

    /// Increase of the summary score when `x` joins `selection` on `side`.
    pub fn marginal_gain(
        &self,
        x: NodeId,
        selection: &SummarySelection,
        side: Side,
    ) -> Result<f64> {
        if !self.pair.contains(x) {
            return Err(Error::UnknownNode(x.0));
        }
        if selection.contains(x) {
            return Err(Error::AlreadySelected(x.0));
        }
        Ok(CoverageState::from_selection(self, selection).gain(self, x, side))
    }
}

fn side_total(cover: &[Option<Cover>]) -> f64 {
    cover.iter().flatten().map(|c| c.value).sum()
}

/// Running best coverage value per node and side, for incremental greedy evaluation.
#[derive(Debug, Clone)]
pub struct CoverageState {
    best: [Vec<f64>; 2],
}

impl CoverageState {
    pub fn empty(n: usize) -> Self {
        CoverageState {
            best: [vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn from_selection(model: &ScoreModel<'_>, selection: &SummarySelection) -> Self {
        let mut st = Self::empty(model.pair.len());
        for side in Side::BOTH {
            for &x in selection.side(side) {
                st.commit(model, x, side);
            }
        }
        st
    }

    /// `Σ_{y ∈ des(x)} max(0, value(x, y) − best(y))`. Each term is non-increasing as
    /// `best` grows, so cached gains stay valid upper bounds even in floating point.
    pub fn gain(&self, model: &ScoreModel<'_>, x: NodeId, side: Side) -> f64 {
        let best = &self.best[side.idx()];
        let mut total = 0.0;
        for &y in model.pair.subtree(x) {
            let v = model.covered_value(x, side, y);
            let b = best[y.0];
            if v > b {
                total += v - b;
            }
        }
        total
    }

    pub fn commit(&mut self, model: &ScoreModel<'_>, x: NodeId, side: Side) {
        let best = &mut self.best[side.idx()];
        for &y in model.pair.subtree(x) {
            let v = model.covered_value(x, side, y);
            if v > best[y.0] {
                best[y.0] = v;
            }
        }
    }

    pub fn total(&self) -> f64 {
        self.best.iter().flatten().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::f1;
    use crate::tree::{build_tree, NodeSpec};

    const R: NodeId = NodeId(0);

    #[test]
    fn ratios() {
        assert!((sim_ratio(50, 45) - 0.9).abs() < 1e-12);
        assert!((dif_ratio(50, 45) - 0.1).abs() < 1e-12);
        assert_eq!((sim_ratio(100, 0), dif_ratio(100, 0)), (0.0, 1.0));
        assert_eq!((sim_ratio(0, 0), dif_ratio(0, 0)), (1.0, 0.0));
    }

    #[test]
    fn f1_self_features() {
        let t = f1();
        let m = ScoreModel::new(&t, 1).unwrap();
        let none = BTreeSet::new();
        assert!((m.self_sim(R, &none) - 1.45).abs() < 1e-12);
        assert!((m.self_dif(R, &none) - 2.475).abs() < 1e-12);
        assert_eq!(m.self_sim(R, &BTreeSet::from([R])), 0.0);
        // excluding b's subtree leaves r and a
        assert!((m.self_sim(R, &BTreeSet::from([NodeId(2)])) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn f1_gains() {
        let t = f1();
        let m = ScoreModel::new(&t, 1).unwrap();
        let none = BTreeSet::new();
        assert!((m.gain_sim(R, &none) - 6.9027).abs() < 1e-3);
        assert!((m.gain_dif(R, &none) - 12.968).abs() < 1e-3);
    }

    #[test]
    fn f1_summary_scores() {
        let t = f1();
        let m = ScoreModel::new(&t, 1).unwrap();
        let dif_r = SummarySelection::from_sets([], [R], 1).unwrap();
        assert!((m.summary_score(&dif_r).0 - 12.968).abs() < 1e-3);
        assert_eq!(m.summary_score(&SummarySelection::new(1)).0, 0.0);
        let sim_r = SummarySelection::from_sets([R], [], 1).unwrap();
        assert!((m.summary_score(&sim_r).0 - 6.9027).abs() < 1e-3);
        assert!(
            (m.marginal_gain(R, &SummarySelection::new(1), Side::Dif)
                .unwrap()
                - 12.968)
                .abs()
                < 1e-3
        );
    }

    #[test]
    fn equal_weights_have_no_difference_gain() {
        let t = build_tree(&[
            NodeSpec::new("r", None, 4, 4),
            NodeSpec::new("a", Some("r"), 2, 2),
            NodeSpec::new("b", Some("r"), 7, 7),
        ])
        .unwrap();
        let m = ScoreModel::new(&t, 2).unwrap();
        for x in t.nodes() {
            assert_eq!(m.gain_dif(x, &BTreeSet::new()), 0.0);
        }
    }

    #[test]
    fn dominated_leaf_adds_nothing() {
        // a leaf whose only covered node is already covered at least as well by its parent
        let t = build_tree(&[
            NodeSpec::new("r", None, 8, 8),
            NodeSpec::new("a", Some("r"), 0, 0),
        ])
        .unwrap();
        let m = ScoreModel::from_scores(&t, vec![0.0, 0.0], 1.0);
        let s = SummarySelection::from_sets([R], [], 2).unwrap();
        // r offers 8 · 1 · 1/2 = 4 to a; a offers 0 · 1 · 1 = 0
        assert_eq!(m.marginal_gain(NodeId(1), &s, Side::Sim).unwrap(), 0.0);
    }

    #[test]
    fn marginal_gain_errors() {
        let t = f1();
        let m = ScoreModel::new(&t, 1).unwrap();
        let s = SummarySelection::from_sets([R], [], 2).unwrap();
        assert_eq!(
            m.marginal_gain(R, &s, Side::Dif),
            Err(Error::AlreadySelected(0))
        );
        assert_eq!(
            m.marginal_gain(NodeId(9), &s, Side::Dif),
            Err(Error::UnknownNode(9))
        );
        assert!(SummarySelection::from_sets([R], [R], 2).is_err());
    }

    #[test]
    fn coverage_prefers_deepest_on_ties() {
        let t = build_tree(&[
            NodeSpec::new("r", None, 2, 2),
            NodeSpec::new("a", Some("r"), 1, 1),
            NodeSpec::new("b", Some("a"), 1, 1),
        ])
        .unwrap();
        // r: 2 · 1/3 to b; a: 1 · 1/2 to b; b: 1 · 1 to itself
        let m = ScoreModel::from_scores(&t, vec![0.0; 3], 1.0);
        let s = SummarySelection::from_sets([R, NodeId(1)], [], 2).unwrap();
        let cov = m.coverage(&s);
        // r gives a 1.0 and a gives itself 1.0; the tie goes to a
        assert_eq!(cov.sim[1].unwrap().rep, NodeId(1));
        let s = SummarySelection::from_sets([NodeId(0)], [], 2).unwrap();
        assert_eq!(m.coverage(&s).sim[2].unwrap().rep, R);
        assert!(m.coverage(&s).dif.iter().all(Option::is_none));
    }

    #[test]
    fn incremental_state_matches_summary_score() {
        let t = f1();
        let m = ScoreModel::new(&t, 1).unwrap();
        let s = SummarySelection::from_sets([NodeId(2)], [R], 2).unwrap();
        let st = CoverageState::from_selection(&m, &s);
        assert!((st.total() - m.summary_score(&s).0).abs() < 1e-12);
    }
}
