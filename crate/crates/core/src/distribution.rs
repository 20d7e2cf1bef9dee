//! Bottom-up top-β similarity/difference distributions and the Hellinger score between them.
//!
//! Each node keeps the β weight pairs in its subtree with the largest common weight
//! (`min(w1, w2)`) and the β pairs with the largest gap (`|w1 - w2|`). A parent's pools are
//! its own pair plus its children's retained entries, so the pass costs
//! `O(|V| · β log β)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::{NodeId, WeightedTreePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepEntry {
    pub w1: u64,
    pub w2: u64,
    /// Contributing node; `None` for zero padding.
    pub source: Option<NodeId>,
}

impl RepEntry {
    pub const PADDING: RepEntry = RepEntry {
        w1: 0,
        w2: 0,
        source: None,
    };

    pub fn similarity(&self) -> u64 {
        self.w1.min(self.w2)
    }

    pub fn difference(&self) -> u64 {
        self.w1.abs_diff(self.w2)
    }
}

/// Descending by key, then ascending by source with padding last.
fn rank_by(key: fn(&RepEntry) -> u64) -> impl Fn(&RepEntry, &RepEntry) -> Ordering {
    move |a, b| {
        key(b)
            .cmp(&key(a))
            .then_with(|| match (a.source, b.source) {
                (Some(x), Some(y)) => x.cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedDistribution {
    pub sim: Vec<RepEntry>,
    pub dif: Vec<RepEntry>,
}

impl PairedDistribution {
    fn from_pools(mut sim: Vec<RepEntry>, mut dif: Vec<RepEntry>, beta: usize) -> Self {
        sim.sort_by(rank_by(RepEntry::similarity));
        sim.truncate(beta);
        sim.resize(beta, RepEntry::PADDING);
        dif.sort_by(rank_by(RepEntry::difference));
        dif.truncate(beta);
        dif.resize(beta, RepEntry::PADDING);
        PairedDistribution { sim, dif }
    }

    /// Leaf distribution: the node's own pair padded to β entries on both sides.
    pub fn own(x: NodeId, w1: u64, w2: u64, beta: usize) -> Self {
        let e = RepEntry {
            w1,
            w2,
            source: Some(x),
        };
        Self::from_pools(vec![e], vec![e], beta)
    }

    pub fn beta(&self) -> usize {
        self.sim.len()
    }

    /// `[w1, w2, w1, w2, ...]` over the similarity entries, length 2β.
    pub fn sim_vector(&self) -> Vec<u64> {
        flatten(&self.sim)
    }

    pub fn dif_vector(&self) -> Vec<u64> {
        flatten(&self.dif)
    }
}

fn flatten(entries: &[RepEntry]) -> Vec<u64> {
    entries.iter().flat_map(|e| [e.w1, e.w2]).collect()
}

fn merge(
    pair: &WeightedTreePair,
    x: NodeId,
    beta: usize,
    children: impl Iterator<Item = PairedDistribution>,
) -> PairedDistribution {
    let (w1, w2) = pair.weights(x);
    let own = RepEntry {
        w1,
        w2,
        source: Some(x),
    };
    let mut sim = vec![own];
    let mut dif = vec![own];
    for d in children {
        sim.extend(d.sim.into_iter().filter(|e| e.source.is_some()));
        dif.extend(d.dif.into_iter().filter(|e| e.source.is_some()));
    }
    PairedDistribution::from_pools(sim, dif, beta)
}

/// Per-node distributions indexed by `NodeId`.
pub fn pass_up(pair: &WeightedTreePair, beta: usize) -> Result<Vec<PairedDistribution>> {
    if beta == 0 {
        return Err(Error::InvalidBeta);
    }
    let mut out: Vec<Option<PairedDistribution>> = vec![None; pair.len()];
    for &x in pair.preorder().iter().rev() {
        let d = merge(
            pair,
            x,
            beta,
            pair.children(x)
                .iter()
                .map(|c| out[c.0].clone().expect("children precede parents")),
        );
        out[x.0] = Some(d);
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// Hellinger distance between the normalized similarity and difference vectors.
///
/// A zero difference mass scores 0 (purely similar); a zero similarity mass with positive
/// difference mass scores 1.
pub fn simdif_score(d: &PairedDistribution) -> f64 {
    hellinger_counts(&d.sim_vector(), &d.dif_vector())
}

/// Hellinger distance between two count vectors after normalizing each by its own total,
/// with the degenerate-total conventions of [`simdif_score`].
pub fn hellinger_counts(sim: &[u64], dif: &[u64]) -> f64 {
    debug_assert_eq!(sim.len(), dif.len());
    let sim_total: u64 = sim.iter().sum();
    let dif_total: u64 = dif.iter().sum();
    if dif_total == 0 {
        return 0.0;
    }
    if sim_total == 0 {
        return 1.0;
    }
    let (st, dt) = (sim_total as f64, dif_total as f64);
    let acc: f64 = sim
        .iter()
        .zip(dif)
        .map(|(&s, &d)| {
            let delta = (d as f64 / dt).sqrt() - (s as f64 / st).sqrt();
            delta * delta
        })
        .sum();
    ((acc / 2.0).sqrt()).clamp(0.0, 1.0)
}

/// Hellinger distance between two probability vectors of equal length.
pub fn hellinger(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let acc: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let delta = a.sqrt() - b.sqrt();
            delta * delta
        })
        .sum();
    ((acc / 2.0).sqrt()).clamp(0.0, 1.0)
}

/// SimDif score of every node. Child distributions are released once their parent is
/// merged, so peak memory tracks the tree's frontier rather than its size.
pub fn all_scores(pair: &WeightedTreePair, beta: usize) -> Result<Vec<f64>> {
    if beta == 0 {
        return Err(Error::InvalidBeta);
    }
    let mut pending: Vec<Option<PairedDistribution>> = vec![None; pair.len()];
    let mut scores = vec![0.0; pair.len()];
    for &x in pair.preorder().iter().rev() {
        let d = merge(
            pair,
            x,
            beta,
            pair.children(x)
                .iter()
                .map(|c| pending[c.0].take().expect("children precede parents")),
        );
        scores[x.0] = simdif_score(&d);
        pending[x.0] = Some(d);
    }
    Ok(scores)
}
