//! Comparative summarization of two node-weighted trees.
//!
//! Given one topology carrying two weight functions, the crate picks `k` representative
//! nodes, split into similarity representatives (subtrees where the weights agree) and
//! difference representatives (subtrees where they diverge), by lazily maximizing a
//! monotone submodular coverage objective. It also provides single-tree baselines, an
//! exhaustive optimum for small inputs, evaluation metrics, alignment of differently shaped
//! trees, file formats, a DOT renderer and a synthetic generator.
//!
//! ```
//! use treesum_core::{build_tree, svdt_greedy, NodeSpec};
//!
//! let pair = build_tree(&[
//!     NodeSpec::new("r", None, 10, 10),
//!     NodeSpec::new("a", Some("r"), 100, 0),
//!     NodeSpec::new("b", Some("r"), 50, 45),
//! ])?;
//! let (selection, trace) = svdt_greedy(&pair, 2, 1)?;
//! assert_eq!(selection.len(), trace.steps.len());
//! # Ok::<(), treesum_core::Error>(())
//! ```

pub mod alignment;
pub mod baselines;
pub mod distribution;
pub mod error;
pub mod greedy;
pub mod io;
pub mod metrics;
pub mod report;
pub mod scoring;
pub mod synth;
pub mod tree;
pub mod viz;

pub use alignment::{subtree_match_score, zero_fill_align, LabeledTree, MatchScore};
pub use baselines::{brute_force_opt, cagg, common_tree, feq, CommonTree};
pub use distribution::{all_scores, pass_up, simdif_score, PairedDistribution, RepEntry};
pub use error::{Error, Result};
pub use greedy::{
    optimize_k_split, svdt_greedy, svdt_greedy_with, CandidatePool, GreedyOptions, GreedyTrace,
    SplitOutcome, TraceStep,
};
pub use io::{load_tree_pair, save_tree_pair, TreeDocument};
pub use metrics::{evaluate, MetricReport};
pub use report::{SummaryDocument, SummaryNode};
pub use scoring::{CoverageAssignment, ScoreModel, Side, SummarySelection};
pub use synth::{synth_generate, WeightModel};
pub use tree::{build_tree, NodeId, NodeSpec, WeightedTreePair};
pub use viz::emit_summary_graph;
