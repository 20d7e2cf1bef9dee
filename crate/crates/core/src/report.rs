//! End-to-end runs producing serializable summary documents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::baselines::{brute_force_with, cagg, common_tree, feq};
use crate::error::{Error, Result};
use crate::greedy::{lazy_greedy, optimize_k_split_with, CandidatePool, GreedyOptions};
use crate::metrics::{evaluate, MetricReport};
use crate::scoring::{ScoreModel, Side, SummarySelection};
use crate::tree::{NodeId, WeightedTreePair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryNode {
    pub id: usize,
    pub label: String,
    pub side: Side,
    pub gain: f64,
    pub simdif: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub algorithm: String,
    pub k: usize,
    pub k1: usize,
    pub k2: usize,
    pub beta: usize,
    pub gamma: f64,
    pub nodes: Vec<SummaryNode>,
    pub summary_score: f64,
    #[serde(default)]
    pub stopped_at_zero_gain: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricReport>,
}

impl SummaryDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "summary: line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Rebuilds the selection against `pair`, checking ids and labels agree.
    pub fn selection(&self, pair: &WeightedTreePair) -> Result<SummarySelection> {
        let mut s = SummarySelection::new(self.k);
        for n in &self.nodes {
            let x = NodeId(n.id);
            if !pair.contains(x) {
                return Err(Error::UnknownNode(n.id));
            }
            if pair.label(x) != n.label {
                return Err(Error::Parse(format!(
                    "summary node {} is labelled {:?} but the tree has {:?}",
                    n.id,
                    n.label,
                    pair.label(x)
                )));
            }
            s.insert(x, n.side)?;
        }
        Ok(s)
    }

    pub fn gains(&self) -> BTreeMap<NodeId, f64> {
        self.nodes.iter().map(|n| (NodeId(n.id), n.gain)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineNode {
    pub id: usize,
    pub label: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineDocument {
    pub algorithm: String,
    pub k: usize,
    pub nodes: Vec<BaselineNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricReport>,
}

impl BaselineDocument {
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(self).expect("baseline documents always serialize");
        s.push('\n');
        s
    }
}

/// Metric settings attached to a run; `None` skips the metric report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSettings {
    pub seed: u64,
    pub queries: usize,
}

/// `score(S) − score(S \ {x})` for every selected `x`.
pub fn leave_one_out_gains(
    model: &ScoreModel<'_>,
    selection: &SummarySelection,
) -> BTreeMap<NodeId, f64> {
    let total = model.summary_score(selection).0;
    selection
        .nodes()
        .into_iter()
        .map(|x| {
            let mut without = selection.clone();
            without.remove(x);
            (x, total - model.summary_score(&without).0)
        })
        .collect()
}

fn metrics_for(
    selection: &SummarySelection,
    pair: &WeightedTreePair,
    settings: Option<MetricSettings>,
) -> Result<Option<MetricReport>> {
    match settings {
        Some(m) if !selection.is_empty() => Ok(Some(evaluate(selection, pair, m.seed, m.queries)?)),
        _ => Ok(None),
    }
}

pub fn summary_document(
    algorithm: &str,
    model: &ScoreModel<'_>,
    selection: &SummarySelection,
    gains: &BTreeMap<NodeId, f64>,
    beta: usize,
    metrics: Option<MetricReport>,
) -> SummaryDocument {
    let pair = model.pair();
    let nodes = selection
        .nodes()
        .into_iter()
        .map(|x| SummaryNode {
            id: x.0,
            label: pair.label(x).to_string(),
            side: selection.side_of(x).unwrap(),
            gain: gains.get(&x).copied().unwrap_or(0.0),
            simdif: model.simdif(x),
        })
        .collect();
    SummaryDocument {
        algorithm: algorithm.to_string(),
        k: selection.k,
        k1: selection.s1.len(),
        k2: selection.s2.len(),
        beta,
        gamma: model.gamma(),
        nodes,
        summary_score: model.summary_score(selection).0,
        stopped_at_zero_gain: false,
        metrics,
    }
}

/// Lazy greedy selection with its document.
pub fn summarize(
    pair: &WeightedTreePair,
    opts: &GreedyOptions,
    metrics: Option<MetricSettings>,
) -> Result<SummaryDocument> {
    let model = ScoreModel::new(pair, opts.beta)?;
    let (selection, trace) = lazy_greedy(&model, opts)?;
    let gains = trace.steps.iter().map(|s| (s.node, s.gain)).collect();
    let mut doc = summary_document(
        "svdt",
        &model,
        &selection,
        &gains,
        opts.beta,
        metrics_for(&selection, pair, metrics)?,
    );
    doc.stopped_at_zero_gain = trace.stopped_at_zero_gain;
    Ok(doc)
}

pub fn split_opt(
    pair: &WeightedTreePair,
    k: usize,
    beta: usize,
    pool: CandidatePool,
    metrics: Option<MetricSettings>,
) -> Result<SummaryDocument> {
    let model = ScoreModel::new(pair, beta)?;
    let out = optimize_k_split_with(&model, k, pool)?;
    let gains = leave_one_out_gains(&model, &out.selection);
    Ok(summary_document(
        "split-opt",
        &model,
        &out.selection,
        &gains,
        beta,
        metrics_for(&out.selection, pair, metrics)?,
    ))
}

pub fn oracle(
    pair: &WeightedTreePair,
    k: usize,
    beta: usize,
    metrics: Option<MetricSettings>,
) -> Result<SummaryDocument> {
    let model = ScoreModel::new(pair, beta)?;
    let (selection, _) = brute_force_with(&model, k)?;
    let gains = leave_one_out_gains(&model, &selection);
    Ok(summary_document(
        "oracle",
        &model,
        &selection,
        &gains,
        beta,
        metrics_for(&selection, pair, metrics)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Feq,
    Cagg,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::Feq => "feq",
            Baseline::Cagg => "cagg",
        }
    }
}

/// Runs a baseline on the common tree. Metrics treat every picked node as a representative.
pub fn baseline(
    pair: &WeightedTreePair,
    algo: Baseline,
    k: usize,
    metrics: Option<MetricSettings>,
) -> Result<BaselineDocument> {
    if k == 0 {
        return Err(Error::InvalidBudget);
    }
    let common = common_tree(pair);
    let picked = match algo {
        Baseline::Feq => feq(&common, k),
        Baseline::Cagg => cagg(&common, k),
    };
    let selection = SummarySelection::from_sets(picked.iter().copied(), [], k)?;
    Ok(BaselineDocument {
        algorithm: algo.name().to_string(),
        k,
        nodes: picked
            .iter()
            .map(|&x| BaselineNode {
                id: x.0,
                label: pair.label(x).to_string(),
                weight: common.weight[x.0],
            })
            .collect(),
        metrics: metrics_for(&selection, pair, metrics)?,
    })
}
