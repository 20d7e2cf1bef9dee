//! Input fixtures shared by the criterion benches.

use treesum_core::{synth_generate, WeightModel, WeightedTreePair};

pub const SIZES: [usize; 3] = [1_000, 10_000, 100_000];

/// Uniform-weight synthetic tree with branching up to 8.
pub fn uniform_tree(nodes: usize, seed: u64) -> WeightedTreePair {
    synth_generate(nodes, 8, WeightModel::Uniform { lo: 0, hi: 1000 }, seed)
        .expect("valid generator parameters")
}

/// Tree whose differences sit in three subtrees.
pub fn hotspot_tree(nodes: usize, seed: u64) -> WeightedTreePair {
    let model = WeightModel::Hotspot {
        lo: 1,
        hi: 100,
        hotspots: 3,
        damp: 0.1,
    };
    synth_generate(nodes, 4, model, seed).expect("valid generator parameters")
}
