//! Bringing two differently shaped trees onto one topology, and scoring how well a small
//! tree embeds into a larger one.
//!
//! Nodes are identified by their label path from the root, so sibling labels must be
//! unique within each input tree.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{NodeId, WeightedTreePair};

/// A tree with one weight per node, as read from a one-weight document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTree {
    pub label: String,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<LabeledTree>,
}

impl LabeledTree {
    pub fn leaf(label: &str, weight: u64) -> Self {
        LabeledTree {
            label: label.to_string(),
            weight,
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<LabeledTree>) -> Self {
        self.children = children;
        self
    }

    pub fn len(&self) -> usize {
        1 + self.children.iter().map(LabeledTree::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A `LabeledTree` flattened in pre-order; index 0 is the root.
struct Flat<'t> {
    nodes: Vec<&'t LabeledTree>,
    parent: Vec<Option<usize>>,
    level: Vec<u32>,
}

fn flatten(tree: &LabeledTree) -> Flat<'_> {
    let mut flat = Flat {
        nodes: Vec::new(),
        parent: Vec::new(),
        level: Vec::new(),
    };
    let mut stack = vec![(tree, None, 0u32)];
    while let Some((t, parent, level)) = stack.pop() {
        let id = flat.nodes.len();
        flat.nodes.push(t);
        flat.parent.push(parent);
        flat.level.push(level);
        for c in t.children.iter().rev() {
            stack.push((c, Some(id), level + 1));
        }
    }
    flat
}

/// Union of both topologies matched by label path. A node missing from one tree gets
/// weight 0 there. Children keep `a`'s order followed by nodes only `b` has.
pub fn zero_fill_align(a: &LabeledTree, b: &LabeledTree) -> Result<WeightedTreePair> {
    if a.label != b.label {
        return Err(Error::RootLabelMismatch(a.label.clone(), b.label.clone()));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut parents: Vec<Option<NodeId>> = Vec::new();
    let mut w = [Vec::new(), Vec::new()];
    let mut by_path: HashMap<(Option<usize>, &str), usize> = HashMap::new();

    for (which, tree) in [a, b].into_iter().enumerate() {
        // (node, its id in the union's parent)
        let mut stack: Vec<(&LabeledTree, Option<usize>)> = vec![(tree, None)];
        let mut seen_here: HashMap<(Option<usize>, &str), ()> = HashMap::new();
        while let Some((t, parent)) = stack.pop() {
            let key = (parent, t.label.as_str());
            if seen_here.insert(key, ()).is_some() {
                return Err(Error::DuplicateSiblingLabel(t.label.clone()));
            }
            let id = *by_path.entry(key).or_insert_with(|| {
                labels.push(t.label.clone());
                parents.push(parent.map(NodeId));
                w[0].push(0);
                w[1].push(0);
                labels.len() - 1
            });
            w[which][id] = t.weight;
            for c in t.children.iter().rev() {
                stack.push((c, Some(id)));
            }
        }
    }
    let [w1, w2] = w;
    WeightedTreePair::from_parents(labels, parents, w1, w2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchScore {
    /// Fraction of `small`'s nodes found under the anchor.
    pub coverage: f64,
    /// `Σ min / Σ max` of the two weights over matched nodes.
    pub weight_agreement: f64,
    /// Level of the anchor in `big`.
    pub level_offset: f64,
    pub anchor: NodeId,
}

/// Anchors `small`'s root at the shallowest node of `big` with the same label (ties by
/// pre-order position) and matches the rest by label path below it.
pub fn subtree_match_score(big: &LabeledTree, small: &LabeledTree) -> Result<MatchScore> {
    let flat = flatten(big);
    let anchor = (0..flat.nodes.len())
        .filter(|&i| flat.nodes[i].label == small.label)
        .min_by_key(|&i| (flat.level[i], i))
        .ok_or_else(|| Error::NoAnchor(small.label.clone()))?;

    let mut matched = 0usize;
    let mut sum_min = 0u64;
    let mut sum_max = 0u64;
    let mut stack = vec![(small, flat.nodes[anchor])];
    while let Some((s, b)) = stack.pop() {
        matched += 1;
        sum_min += s.weight.min(b.weight);
        sum_max += s.weight.max(b.weight);
        for sc in &s.children {
            if let Some(bc) = b.children.iter().find(|bc| bc.label == sc.label) {
                stack.push((sc, bc));
            }
        }
    }
    let weight_agreement = if sum_max == 0 {
        1.0
    } else {
        sum_min as f64 / sum_max as f64
    };
    Ok(MatchScore {
        coverage: matched as f64 / small.len() as f64,
        weight_agreement,
        level_offset: flat.level[anchor] as f64,
        anchor: NodeId(anchor),
    })
}
