#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treesum_core::{NodeId, Side, SummarySelection, WeightedTreePair};

/// Random tree with `n` nodes: node i hangs under a uniform earlier node. Weights mix
/// equal pairs, one-sided pairs, zeros and independent draws so every ratio branch shows up.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize, max_w: u64) -> WeightedTreePair {
    let mut parents = vec![None];
    for i in 1..n {
        parents.push(Some(NodeId(rng.gen_range(0..i))));
    }
    let mut w1 = Vec::with_capacity(n);
    let mut w2 = Vec::with_capacity(n);
    for _ in 0..n {
        let a = rng.gen_range(0..=max_w);
        let (x, y) = match rng.gen_range(0..6) {
            0 => (a, a),
            1 => (a, 0),
            2 => (0, a),
            3 => (0, 0),
            _ => (a, rng.gen_range(0..=max_w)),
        };
        w1.push(x);
        w2.push(y);
    }
    let labels = (0..n).map(|i| format!("n{i}")).collect();
    WeightedTreePair::from_parents(labels, parents, w1, w2).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random side-respecting chain `a ⊆ b` and a candidate outside `b`.
pub fn random_chain(
    rng: &mut ChaCha8Rng,
    pair: &WeightedTreePair,
) -> Option<(SummarySelection, SummarySelection, NodeId, Side)> {
    let n = pair.len();
    if n < 2 {
        return None;
    }
    let mut ids: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        ids.swap(i, rng.gen_range(0..=i));
    }
    let x = NodeId(ids[0]);
    let b_size = rng.gen_range(0..n);
    let a_size = rng.gen_range(0..=b_size);
    let mut a = SummarySelection::new(n);
    let mut b = SummarySelection::new(n);
    for (j, &id) in ids[1..=b_size].iter().enumerate() {
        let side = if rng.gen_bool(0.5) {
            Side::Sim
        } else {
            Side::Dif
        };
        b.insert(NodeId(id), side).unwrap();
        if j < a_size {
            a.insert(NodeId(id), side).unwrap();
        }
    }
    let side = if rng.gen_bool(0.5) {
        Side::Sim
    } else {
        Side::Dif
    };
    Some((a, b, x, side))
}
