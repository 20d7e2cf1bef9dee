//! Seeded random tree pairs for tests and scalability runs.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::{NodeId, WeightedTreePair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightModel {
    /// Both weights drawn independently from `lo..=hi`.
    Uniform { lo: u64, hi: u64 },
    /// `w1` from `lo..=hi`; `w2 = rho · w1 + (1 − rho) · u` with fresh `u` from the same range.
    Correlated { lo: u64, hi: u64, rho: f64 },
    /// Identical weights everywhere except inside `hotspots` sizeable subtrees, where the
    /// second weight is scaled by `damp`.
    Hotspot {
        lo: u64,
        hi: u64,
        hotspots: usize,
        damp: f64,
    },
}

impl WeightModel {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = match *self {
            WeightModel::Uniform { lo, hi } => (lo, hi),
            WeightModel::Correlated { lo, hi, rho } => {
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::InvalidGenerator(format!("rho {rho} outside [0, 1]")));
                }
                (lo, hi)
            }
            WeightModel::Hotspot { lo, hi, damp, .. } => {
                if !(0.0..=1.0).contains(&damp) {
                    return Err(Error::InvalidGenerator(format!(
                        "damp {damp} outside [0, 1]"
                    )));
                }
                (lo, hi)
            }
        };
        if lo > hi {
            return Err(Error::InvalidGenerator(format!(
                "empty weight range {lo}..={hi}"
            )));
        }
        Ok(())
    }
}

/// Random tree of exactly `node_count` nodes; each new node attaches to a uniformly chosen
/// earlier node that still has fewer than `max_branching` children.
pub fn synth_generate(
    node_count: usize,
    max_branching: usize,
    model: WeightModel,
    seed: u64,
) -> Result<WeightedTreePair> {
    if node_count == 0 {
        return Err(Error::InvalidGenerator(
            "node count must be at least 1".into(),
        ));
    }
    if max_branching == 0 {
        return Err(Error::InvalidGenerator(
            "max branching must be at least 1".into(),
        ));
    }
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut parents = Vec::with_capacity(node_count);
    parents.push(None);
    let mut fanout = vec![0usize; node_count];
    let mut open = vec![0usize];
    for i in 1..node_count {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        parents.push(Some(NodeId(p)));
        fanout[p] += 1;
        if fanout[p] == max_branching {
            open.swap_remove(slot);
        }
        open.push(i);
    }
    let labels: Vec<String> = (0..node_count).map(|i| format!("n{i}")).collect();
    let shape =
        WeightedTreePair::from_parents(labels, parents, vec![0; node_count], vec![0; node_count])?;

    let (w1, w2) = match model {
        WeightModel::Uniform { lo, hi } => (0..node_count)
            .map(|_| (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)))
            .unzip(),
        WeightModel::Correlated { lo, hi, rho } => (0..node_count)
            .map(|_| {
                let a = rng.gen_range(lo..=hi);
                let u = rng.gen_range(lo..=hi);
                (a, (rho * a as f64 + (1.0 - rho) * u as f64).round() as u64)
            })
            .unzip(),
        WeightModel::Hotspot {
            lo,
            hi,
            hotspots,
            damp,
        } => {
            let w1: Vec<u64> = (0..node_count).map(|_| rng.gen_range(lo..=hi)).collect();
            let mut w2 = w1.clone();
            let min_size = (node_count / 100).max(2);
            let mut roots: Vec<NodeId> = shape
                .nodes()
                .filter(|&x| x != shape.root() && shape.subtree_size(x) >= min_size)
                .collect();
            if roots.is_empty() {
                roots = shape.nodes().filter(|&x| x != shape.root()).collect();
            }
            let picks = hotspots.min(roots.len());
            for i in index::sample(&mut rng, roots.len(), picks) {
                for &y in shape.subtree(roots[i]) {
                    w2[y.0] = (w1[y.0] as f64 * damp).round() as u64;
                }
            }
            (w1, w2)
        }
    };
    Ok(shape.with_weights(w1, w2))
}
