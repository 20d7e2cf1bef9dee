//! Evaluation metrics for a selection: diversity, query closeness and average level gap.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::SummarySelection;
use crate::tree::{level_discount, NodeId, WeightedTreePair};

pub const DEFAULT_QUERY_COUNT: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub div: f64,
    pub cq: f64,
    pub ald: f64,
    pub query_seed: u64,
    pub query_count: usize,
}

impl MetricReport {
    /// One `metric<TAB>value` line per field.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "div\t{}", self.div);
        let _ = writeln!(s, "cq\t{}", self.cq);
        let _ = writeln!(s, "ald\t{}", self.ald);
        let _ = writeln!(s, "query_seed\t{}", self.query_seed);
        let _ = writeln!(s, "query_count\t{}", self.query_count);
        s
    }
}

pub fn evaluate(
    selection: &SummarySelection,
    pair: &WeightedTreePair,
    seed: u64,
    query_count: usize,
) -> Result<MetricReport> {
    Ok(MetricReport {
        div: diversity(selection, pair),
        cq: query_closeness(selection, pair, seed, query_count)?,
        ald: avg_level_difference(selection, pair),
        query_seed: seed,
        query_count,
    })
}

/// Deepest member of `selection` on the path from `y` to the root.
fn nearest_selected_ancestor(
    pair: &WeightedTreePair,
    selection: &SummarySelection,
    y: NodeId,
) -> Option<NodeId> {
    pair.ancestor_chain(y).find(|&z| selection.contains(z))
}

/// `Σ |freq1(y) − freq2(y)| · dis(x*, y)` over covered nodes, `x*` being the nearest
/// selected ancestor of `y`.
pub fn diversity(selection: &SummarySelection, pair: &WeightedTreePair) -> f64 {
    pair.nodes()
        .filter_map(|y| {
            let x = nearest_selected_ancestor(pair, selection, y)?;
            let gap = pair.freq1(y).abs_diff(pair.freq2(y)) as f64;
            Some(gap * level_discount(pair.level(y) - pair.level(x)))
        })
        .sum()
}

/// Hop distance from every node to its closest selected node (multi-source BFS).
pub fn distance_to_selection(selection: &SummarySelection, pair: &WeightedTreePair) -> Vec<u32> {
    let mut dist = vec![u32::MAX; pair.len()];
    let mut queue = VecDeque::new();
    for x in selection.nodes() {
        dist[x.0] = 0;
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        let next = dist[x.0] + 1;
        for &y in pair.children(x).iter().chain(pair.parent(x).as_ref()) {
            if dist[y.0] == u32::MAX {
                dist[y.0] = next;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Query nodes: without replacement when the tree has at least `count` nodes, otherwise
/// uniformly with replacement.
pub fn draw_queries(pair: &WeightedTreePair, seed: u64, count: usize) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = pair.len();
    if n >= count {
        index::sample(&mut rng, n, count)
            .into_iter()
            .map(NodeId)
            .collect()
    } else {
        (0..count).map(|_| NodeId(rng.gen_range(0..n))).collect()
    }
}

/// Sum over the given queries of the hop distance to the closest selected node.
pub fn closeness_for_queries(
    selection: &SummarySelection,
    pair: &WeightedTreePair,
    queries: &[NodeId],
) -> Result<f64> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    let dist = distance_to_selection(selection, pair);
    Ok(queries.iter().map(|q| dist[q.0] as f64).sum())
}

pub fn query_closeness(
    selection: &SummarySelection,
    pair: &WeightedTreePair,
    seed: u64,
    query_count: usize,
) -> Result<f64> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    closeness_for_queries(selection, pair, &draw_queries(pair, seed, query_count))
}

/// Weight-gap weighted mean of the level distance between each node and its nearest
/// selected ancestor. Uncovered nodes and nodes with equal weights are left out.
pub fn avg_level_difference(selection: &SummarySelection, pair: &WeightedTreePair) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for y in pair.nodes() {
        let alpha = pair.freq1(y).abs_diff(pair.freq2(y));
        if alpha == 0 {
            continue;
        }
        let Some(x) = nearest_selected_ancestor(pair, selection, y) else {
            continue;
        };
        num += (pair.level(y) - pair.level(x)) as f64 * alpha as f64;
        den += alpha as f64;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::f1;
    use crate::tree::{build_tree, NodeSpec};

    fn sel(nodes: &[usize]) -> SummarySelection {
        SummarySelection::from_sets(nodes.iter().copied().map(NodeId), [], nodes.len()).unwrap()
    }

    #[test]
    fn diversity_examples() {
        let t = f1();
        assert!((diversity(&sel(&[0]), &t) - 52.5).abs() < 1e-12);
        assert_eq!(diversity(&SummarySelection::new(1), &t), 0.0);
        let same = t.with_weights(vec![1, 2, 3], vec![1, 2, 3]);
        assert_eq!(diversity(&sel(&[0, 2]), &same), 0.0);
    }

    #[test]
    fn closeness_examples() {
        let t = f1();
        let queries = [NodeId(0), NodeId(1), NodeId(2)];
        assert_eq!(
            closeness_for_queries(&sel(&[0]), &t, &queries).unwrap(),
            2.0
        );
        assert_eq!(query_closeness(&sel(&[0, 1, 2]), &t, 3, 500).unwrap(), 0.0);
        let single = build_tree(&[NodeSpec::new("r", None, 1, 2)]).unwrap();
        assert_eq!(query_closeness(&sel(&[0]), &single, 9, 500).unwrap(), 0.0);
        assert_eq!(
            query_closeness(&SummarySelection::new(1), &t, 1, 5),
            Err(Error::EmptySelection)
        );
    }

    #[test]
    fn bfs_distance_matches_lca_distance() {
        let t = build_tree(&[
            NodeSpec::new("r", None, 1, 1),
            NodeSpec::new("a", Some("r"), 1, 1),
            NodeSpec::new("b", Some("a"), 1, 1),
            NodeSpec::new("c", Some("r"), 1, 1),
            NodeSpec::new("d", Some("c"), 1, 1),
        ])
        .unwrap();
        let s = sel(&[2, 3]);
        let d = distance_to_selection(&s, &t);
        for y in t.nodes() {
            let brute = s
                .nodes()
                .iter()
                .map(|&x| t.tree_distance(x, y))
                .min()
                .unwrap();
            assert_eq!(d[y.0], brute);
        }
    }

    #[test]
    fn level_difference_examples() {
        let t = f1();
        assert_eq!(avg_level_difference(&sel(&[0, 1, 2]), &t), 0.0);
        assert!((avg_level_difference(&sel(&[0]), &t) - 1.0).abs() < 1e-12);
        let same = t.with_weights(vec![1, 2, 3], vec![1, 2, 3]);
        assert_eq!(avg_level_difference(&sel(&[0]), &same), 0.0);
    }

    #[test]
    fn queries_are_deterministic() {
        let t = f1();
        assert_eq!(draw_queries(&t, 4, 10), draw_queries(&t, 4, 10));
        assert_eq!(draw_queries(&t, 4, 2).len(), 2);
        let r = evaluate(&sel(&[0]), &t, 11, 500).unwrap();
        assert_eq!(r, evaluate(&sel(&[0]), &t, 11, 500).unwrap());
        assert!(r.to_tsv().starts_with("div\t52.5\n"));
    }
}
