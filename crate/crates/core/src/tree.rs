//! Rooted tree topology shared by two weight functions.
//!
//! A [`WeightedTreePair`] stores one topology and, per node, the node's weight in the
//! first tree (`freq1`) and in the second tree (`freq2`). Nodes are addressed by dense
//! [`NodeId`]s assigned in input order. A pre-order numbering is kept alongside so that the
//! descendants of any node form a contiguous slice of [`WeightedTreePair::preorder`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One input record for [`build_tree`]: a label, its parent's label, and the two weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub label: String,
    pub parent: Option<String>,
    pub w1: i64,
    pub w2: i64,
}

impl NodeSpec {
    pub fn new(label: &str, parent: Option<&str>, w1: i64, w2: i64) -> Self {
        NodeSpec {
            label: label.to_string(),
            parent: parent.map(str::to_string),
            w1,
            w2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTreePair {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    freq1: Vec<u64>,
    freq2: Vec<u64>,
    level: Vec<u32>,
    preorder: Vec<NodeId>,
    // position of each node in `preorder`, and one past the last descendant
    enter: Vec<usize>,
    exit: Vec<usize>,
}

/// Builds a tree pair from label-addressed records. Labels must be globally unique here
/// since parents are referenced by label.
pub fn build_tree(nodes: &[NodeSpec]) -> Result<WeightedTreePair> {
    if nodes.is_empty() {
        return Err(Error::EmptyTree);
    }
    let mut index = HashMap::with_capacity(nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        if index.insert(n.label.as_str(), i).is_some() {
            return Err(Error::DuplicateLabel(n.label.clone()));
        }
    }
    let mut parents = Vec::with_capacity(nodes.len());
    let mut w1 = Vec::with_capacity(nodes.len());
    let mut w2 = Vec::with_capacity(nodes.len());
    for n in nodes {
        if n.w1 < 0 || n.w2 < 0 {
            return Err(Error::NegativeWeight(n.label.clone()));
        }
        let parent = match &n.parent {
            None => None,
            Some(p) => Some(NodeId(
                *index
                    .get(p.as_str())
                    .ok_or_else(|| Error::UnknownParent(p.clone()))?,
            )),
        };
        parents.push(parent);
        w1.push(n.w1 as u64);
        w2.push(n.w2 as u64);
    }
    let labels = nodes.iter().map(|n| n.label.clone()).collect();
    WeightedTreePair::from_parents(labels, parents, w1, w2)
}

impl WeightedTreePair {
    /// Builds a tree pair from index-addressed parents. Children keep the order in which
    /// they appear in `parents`. Sibling labels must be distinct.
    pub fn from_parents(
        labels: Vec<String>,
        parents: Vec<Option<NodeId>>,
        freq1: Vec<u64>,
        freq2: Vec<u64>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        assert!(
            parents.len() == n && freq1.len() == n && freq2.len() == n,
            "per-node vectors must have equal length"
        );
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            match p {
                None => {
                    if root.is_some() {
                        return Err(Error::MultipleRoots(labels[i].clone()));
                    }
                    root = Some(NodeId(i));
                }
                Some(p) => {
                    if p.0 >= n {
                        return Err(Error::UnknownParent(format!("{}", p)));
                    }
                    children[p.0].push(NodeId(i));
                }
            }
        }
        let root = root.ok_or(Error::NoRoot)?;

        for kids in &children {
            let mut seen = HashSet::with_capacity(kids.len());
            for c in kids {
                if !seen.insert(labels[c.0].as_str()) {
                    return Err(Error::DuplicateSiblingLabel(labels[c.0].clone()));
                }
            }
        }

        let mut level = vec![0u32; n];
        let mut preorder = Vec::with_capacity(n);
        let mut enter = vec![usize::MAX; n];
        let mut exit = vec![0usize; n];
        // iterative DFS; a node is pushed twice, the second time to close its range
        let mut stack = vec![(root, false)];
        while let Some((x, closing)) = stack.pop() {
            if closing {
                exit[x.0] = preorder.len();
                continue;
            }
            enter[x.0] = preorder.len();
            preorder.push(x);
            stack.push((x, true));
            for &c in children[x.0].iter().rev() {
                level[c.0] = level[x.0] + 1;
                stack.push((c, false));
            }
        }
        if preorder.len() != n {
            let stray = (0..n).find(|&i| enter[i] == usize::MAX).unwrap();
            return Err(Error::CycleDetected(labels[stray].clone()));
        }

        Ok(WeightedTreePair {
            root,
            parent: parents,
            children,
            labels,
            freq1,
            freq2,
            level,
            preorder,
            enter,
            exit,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).map(NodeId)
    }

    pub fn contains(&self, x: NodeId) -> bool {
        x.0 < self.len()
    }

    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x.0]
    }

    pub fn children(&self, x: NodeId) -> &[NodeId] {
        &self.children[x.0]
    }

    pub fn is_leaf(&self, x: NodeId) -> bool {
        self.children[x.0].is_empty()
    }

    pub fn label(&self, x: NodeId) -> &str {
        &self.labels[x.0]
    }

    pub fn find_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label).map(NodeId)
    }

    pub fn freq1(&self, x: NodeId) -> u64 {
        self.freq1[x.0]
    }

    pub fn freq2(&self, x: NodeId) -> u64 {
        self.freq2[x.0]
    }

    pub fn weights(&self, x: NodeId) -> (u64, u64) {
        (self.freq1[x.0], self.freq2[x.0])
    }

    pub fn level(&self, x: NodeId) -> u32 {
        self.level[x.0]
    }

    pub fn depth(&self) -> u32 {
        self.level.iter().copied().max().unwrap_or(0)
    }

    /// Nodes in pre-order (parents before children, children in input order).
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    /// Pre-order slice holding `x` and all of its descendants, `x` first.
    pub fn subtree(&self, x: NodeId) -> &[NodeId] {
        &self.preorder[self.enter[x.0]..self.exit[x.0]]
    }

    pub fn subtree_size(&self, x: NodeId) -> usize {
        self.exit[x.0] - self.enter[x.0]
    }

    /// True when `y` lies in the subtree rooted at `x` (including `y == x`).
    #[inline]
    pub fn is_descendant(&self, y: NodeId, x: NodeId) -> bool {
        let p = self.enter[y.0];
        self.enter[x.0] <= p && p < self.exit[x.0]
    }

    /// `x` and everything below it, in ascending id order.
    pub fn descendants(&self, x: NodeId) -> BTreeSet<NodeId> {
        self.subtree(x).iter().copied().collect()
    }

    /// `x` and everything above it, in ascending id order.
    pub fn ancestors(&self, x: NodeId) -> BTreeSet<NodeId> {
        self.ancestor_chain(x).collect()
    }

    /// Walks from `x` up to the root, starting with `x` itself.
    pub fn ancestor_chain(&self, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(x), move |&z| self.parent[z.0])
    }

    /// Depth-discounted coverage factor of `y` by `x`: `1 / (level(y) - level(x) + 1)` when
    /// `y` is in the subtree of `x`, otherwise 0.
    pub fn dis(&self, x: NodeId, y: NodeId) -> f64 {
        if self.is_descendant(y, x) {
            level_discount(self.level[y.0] - self.level[x.0])
        } else {
            0.0
        }
    }

    /// Larger of the node's two weights.
    pub fn differential_weight(&self, x: NodeId) -> u64 {
        self.freq1[x.0].max(self.freq2[x.0])
    }

    /// Mean of `min(w1, w2) / |w1 - w2|` over nodes whose weights differ; 1 when none do.
    pub fn scaling_coefficient(&self) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (&a, &b) in self.freq1.iter().zip(&self.freq2) {
            if a != b {
                sum += a.min(b) as f64 / a.abs_diff(b) as f64;
                count += 1;
            }
        }
        if count == 0 {
            1.0
        } else {
            sum / count as f64
        }
    }

    pub fn lowest_common_ancestor(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.level[a.0] > self.level[b.0] {
            a = self.parent[a.0].unwrap();
        }
        while self.level[b.0] > self.level[a.0] {
            b = self.parent[b.0].unwrap();
        }
        while a != b {
            a = self.parent[a.0].unwrap();
            b = self.parent[b.0].unwrap();
        }
        a
    }

    /// Undirected hop count between two nodes.
    pub fn tree_distance(&self, a: NodeId, b: NodeId) -> u32 {
        let l = self.lowest_common_ancestor(a, b);
        self.level[a.0] + self.level[b.0] - 2 * self.level[l.0]
    }

    /// Same topology and labels with replacement weights.
    pub fn with_weights(&self, freq1: Vec<u64>, freq2: Vec<u64>) -> WeightedTreePair {
        assert_eq!(freq1.len(), self.len());
        assert_eq!(freq2.len(), self.len());
        WeightedTreePair {
            freq1,
            freq2,
            ..self.clone()
        }
    }
}

/// `1 / (gap + 1)` for a level gap between an ancestor and its descendant.
#[inline]
pub fn level_discount(gap: u32) -> f64 {
    1.0 / (gap as f64 + 1.0)
}
