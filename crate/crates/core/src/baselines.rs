//! Single-tree baselines run on the common tree, and an exhaustive optimum for small inputs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scoring::{ScoreModel, Side, SummarySelection};
use crate::tree::{NodeId, WeightedTreePair};

pub const ORACLE_MAX_NODES: usize = 16;
pub const ORACLE_MAX_K: usize = 4;

/// The shared topology weighted by `min(freq1, freq2)` per node.
#[derive(Debug, Clone)]
pub struct CommonTree<'a> {
    pub pair: &'a WeightedTreePair,
    pub weight: Vec<u64>,
}

pub fn common_tree(pair: &WeightedTreePair) -> CommonTree<'_> {
    CommonTree {
        pair,
        weight: pair
            .nodes()
            .map(|x| pair.freq1(x).min(pair.freq2(x)))
            .collect(),
    }
}

impl CommonTree<'_> {
    /// Node ids by descending weight, ties by ascending id.
    fn ranked(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = self.pair.nodes().collect();
        order.sort_by(|a, b| self.weight[b.0].cmp(&self.weight[a.0]).then(a.cmp(b)));
        order
    }
}

/// The `k` heaviest nodes.
pub fn feq(tree: &CommonTree<'_>, k: usize) -> BTreeSet<NodeId> {
    tree.ranked().into_iter().take(k).collect()
}

/// Heaviest-first, skipping zero-weight nodes and any node related by ancestry to one
/// already picked; if that leaves fewer than `k`, the heaviest remaining nodes fill up.
pub fn cagg(tree: &CommonTree<'_>, k: usize) -> BTreeSet<NodeId> {
    let pair = tree.pair;
    let ranked = tree.ranked();
    let mut picked: Vec<NodeId> = Vec::with_capacity(k);
    for &x in &ranked {
        if picked.len() == k {
            break;
        }
        if tree.weight[x.0] == 0 {
            continue;
        }
        let related = picked
            .iter()
            .any(|&p| pair.is_descendant(x, p) || pair.is_descendant(p, x));
        if !related {
            picked.push(x);
        }
    }
    let mut out: BTreeSet<NodeId> = picked.into_iter().collect();
    for &x in &ranked {
        if out.len() >= k {
            break;
        }
        out.insert(x);
    }
    out
}

/// Best selection over every subset of at most `k` nodes and every assignment of its
/// members to the two sides. The first maximizer in enumeration order wins.
pub fn brute_force_opt(
    pair: &WeightedTreePair,
    k: usize,
    beta: usize,
) -> Result<(SummarySelection, f64)> {
    let model = ScoreModel::new(pair, beta)?;
    brute_force_with(&model, k)
}

pub fn brute_force_with(model: &ScoreModel<'_>, k: usize) -> Result<(SummarySelection, f64)> {
    let n = model.pair().len();
    if k == 0 {
        return Err(Error::InvalidBudget);
    }
    let k = k.min(n);
    if n > ORACLE_MAX_NODES || k > ORACLE_MAX_K {
        return Err(Error::TooLargeForOracle {
            nodes: n,
            k,
            max_nodes: ORACLE_MAX_NODES,
            max_k: ORACLE_MAX_K,
        });
    }
    let mut best = (SummarySelection::new(k), 0.0);
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size > k {
            continue;
        }
        let members: Vec<NodeId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(NodeId)
            .collect();
        for coloring in 0u32..(1u32 << size) {
            let mut s = SummarySelection::new(k);
            for (j, &x) in members.iter().enumerate() {
                let side = if coloring & (1 << j) == 0 {
                    Side::Sim
                } else {
                    Side::Dif
                };
                s.insert(x, side)?;
            }
            let score = model.summary_score(&s).0;
            if score > best.1 {
                best = (s, score);
            }
        }
    }
    Ok(best)
}
