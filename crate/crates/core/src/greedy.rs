//! Lazy greedy selection of similarity and difference representatives.
//!
//! Every candidate carries a cached marginal gain per side together with the size of that
//! side when the value was computed. Because the objective is submodular on each side, a
//! cached value is an upper bound on the current one; a popped candidate whose winning side
//! is stale is refreshed and pushed back, otherwise it is committed.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scoring::{CoverageState, ScoreModel, Side, SummarySelection};
use crate::tree::{NodeId, WeightedTreePair};

/// Which nodes may be chosen as representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidatePool {
    /// Every node, leaves included.
    #[default]
    All,
    /// Only nodes with at least one child.
    Internal,
}

impl CandidatePool {
    pub fn candidates(self, pair: &WeightedTreePair) -> Vec<NodeId> {
        match self {
            CandidatePool::All => pair.nodes().collect(),
            CandidatePool::Internal => pair.nodes().filter(|&x| !pair.is_leaf(x)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyOptions {
    pub k: usize,
    pub beta: usize,
    pub pool: CandidatePool,
    /// Stop as soon as the best available marginal gain is zero.
    pub stop_at_zero_gain: bool,
}

impl GreedyOptions {
    pub fn new(k: usize, beta: usize) -> Self {
        GreedyOptions {
            k,
            beta,
            pool: CandidatePool::All,
            stop_at_zero_gain: true,
        }
    }
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions::new(10, 50)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub node: NodeId,
    pub side: Side,
    pub gain: f64,
    /// Queue pops spent on this pick, the committing pop included.
    pub pops: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GreedyTrace {
    pub steps: Vec<TraceStep>,
    pub total_pops: usize,
    /// Selection ended before the budget because no candidate had positive gain.
    pub stopped_at_zero_gain: bool,
    /// The requested budget exceeded the number of nodes and was reduced.
    pub budget_clamped: bool,
}

impl GreedyTrace {
    pub fn gain_of(&self, x: NodeId) -> Option<f64> {
        self.steps.iter().find(|s| s.node == x).map(|s| s.gain)
    }
}

#[derive(Debug, Clone, Copy)]
struct Keyed {
    value: f64,
    node: NodeId,
}

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Keyed {}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    // max-heap: larger value first, then smaller node id
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn check_budget(pair: &WeightedTreePair, k: usize) -> Result<(usize, bool)> {
    if k == 0 {
        return Err(Error::InvalidBudget);
    }
    if k > pair.len() {
        Ok((pair.len(), true))
    } else {
        Ok((k, false))
    }
}

/// Lazy greedy with default options (all nodes are candidates, stop at zero gain).
pub fn svdt_greedy(
    pair: &WeightedTreePair,
    k: usize,
    beta: usize,
) -> Result<(SummarySelection, GreedyTrace)> {
    svdt_greedy_with(pair, &GreedyOptions::new(k, beta))
}

pub fn svdt_greedy_with(
    pair: &WeightedTreePair,
    opts: &GreedyOptions,
) -> Result<(SummarySelection, GreedyTrace)> {
    let model = ScoreModel::new(pair, opts.beta)?;
    lazy_greedy(&model, opts)
}

/// Lazy greedy over a prepared model. `opts.beta` is ignored here.
pub fn lazy_greedy(
    model: &ScoreModel<'_>,
    opts: &GreedyOptions,
) -> Result<(SummarySelection, GreedyTrace)> {
    let pair = model.pair();
    let (k, clamped) = check_budget(pair, opts.k)?;
    let n = pair.len();
    let mut trace = GreedyTrace {
        budget_clamped: clamped,
        ..Default::default()
    };
    let mut selection = SummarySelection::new(k);
    let mut state = CoverageState::empty(n);

    let mut value = [vec![0.0f64; n], vec![0.0f64; n]];
    let mut round = [vec![0usize; n], vec![0usize; n]];
    let mut heap = BinaryHeap::with_capacity(n);
    for x in opts.pool.candidates(pair) {
        for side in Side::BOTH {
            value[side as usize][x.0] = state.gain(model, x, side);
        }
        heap.push(Keyed {
            value: value[0][x.0].max(value[1][x.0]),
            node: x,
        });
    }

    let mut pops_this_pick = 0;
    while selection.len() < k {
        let Some(Keyed { node: x, .. }) = heap.pop() else {
            break;
        };
        pops_this_pick += 1;
        trace.total_pops += 1;
        let side = if value[0][x.0] >= value[1][x.0] {
            Side::Sim
        } else {
            Side::Dif
        };
        let s = side as usize;
        let size = selection.side(side).len();
        if round[s][x.0] < size {
            value[s][x.0] = state.gain(model, x, side);
            round[s][x.0] = size;
            heap.push(Keyed {
                value: value[0][x.0].max(value[1][x.0]),
                node: x,
            });
            continue;
        }
        let gain = value[s][x.0];
        if opts.stop_at_zero_gain && gain <= 0.0 {
            trace.stopped_at_zero_gain = true;
            break;
        }
        state.commit(model, x, side);
        selection.insert(x, side)?;
        trace.steps.push(TraceStep {
            node: x,
            side,
            gain,
            pops: pops_this_pick,
        });
        pops_this_pick = 0;
    }
    Ok((selection, trace))
}

/// Adds exactly `count` representatives on one side (fewer only if candidates run out),
/// greedily and lazily, skipping nodes already in `selection`.
fn fill_side(
    model: &ScoreModel<'_>,
    candidates: &[NodeId],
    selection: &mut SummarySelection,
    state: &mut CoverageState,
    side: Side,
    count: usize,
) {
    if count == 0 {
        return;
    }
    let n = model.pair().len();
    let mut round = vec![0usize; n];
    let mut heap: BinaryHeap<Keyed> = candidates
        .iter()
        .filter(|&&x| !selection.contains(x))
        .map(|&x| Keyed {
            value: state.gain(model, x, side),
            node: x,
        })
        .collect();
    let mut added = 0;
    while added < count {
        let Some(top) = heap.pop() else { break };
        if round[top.node.0] < added {
            round[top.node.0] = added;
            heap.push(Keyed {
                value: state.gain(model, top.node, side),
                node: top.node,
            });
            continue;
        }
        state.commit(model, top.node, side);
        selection
            .insert(top.node, side)
            .expect("candidates exclude selected nodes");
        added += 1;
    }
}

/// Greedy selection with exactly `k1` similarity and `k2` difference representatives;
/// the larger side is filled first, similarity first on equal sizes.
pub fn greedy_fixed_split(
    model: &ScoreModel<'_>,
    pool: CandidatePool,
    k1: usize,
    k2: usize,
) -> SummarySelection {
    let pair = model.pair();
    let candidates = pool.candidates(pair);
    let mut selection = SummarySelection::new(k1 + k2);
    let mut state = CoverageState::empty(pair.len());
    let order = if k1 >= k2 {
        [(Side::Sim, k1), (Side::Dif, k2)]
    } else {
        [(Side::Dif, k2), (Side::Sim, k1)]
    };
    for (side, count) in order {
        fill_side(model, &candidates, &mut selection, &mut state, side, count);
    }
    selection
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub selection: SummarySelection,
    pub k1: usize,
    pub k2: usize,
    /// `(k1, k2, score)` for every combination tried, in iteration order.
    pub tried: Vec<(usize, usize, f64)>,
}

/// Walks `k1 = k, k-1, ..., 0` (with `k2 = k - k1`) and moves to a combination when the
/// similarity-side change plus the difference-side change against the incumbent is positive.
pub fn optimize_k_split(pair: &WeightedTreePair, k: usize, beta: usize) -> Result<SplitOutcome> {
    let model = ScoreModel::new(pair, beta)?;
    optimize_k_split_with(&model, k, CandidatePool::All)
}

pub fn optimize_k_split_with(
    model: &ScoreModel<'_>,
    k: usize,
    pool: CandidatePool,
) -> Result<SplitOutcome> {
    let (k, _) = check_budget(model.pair(), k)?;
    let mut incumbent: Option<(SummarySelection, f64, f64)> = None;
    let mut tried = Vec::with_capacity(k + 1);
    for k1 in (0..=k).rev() {
        let k2 = k - k1;
        let cand = greedy_fixed_split(model, pool, k1, k2);
        let sim = model.side_score(&cand, Side::Sim);
        let dif = model.side_score(&cand, Side::Dif);
        tried.push((k1, k2, sim + dif));
        match &incumbent {
            None => incumbent = Some((cand, sim, dif)),
            Some((_, inc_sim, inc_dif)) => {
                let delta_loss = sim - inc_sim;
                let delta_gain = dif - inc_dif;
                if delta_loss + delta_gain > 0.0 {
                    incumbent = Some((cand, sim, dif));
                }
            }
        }
    }
    let (mut selection, _, _) = incumbent.expect("at least one combination");
    selection.k = k;
    Ok(SplitOutcome {
        k1: selection.s1.len(),
        k2: selection.s2.len(),
        selection,
        tried,
    })
}
