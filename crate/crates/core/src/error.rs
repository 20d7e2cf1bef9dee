use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tree has no nodes")]
    EmptyTree,
    #[error("more than one root: {0:?} has no parent")]
    MultipleRoots(String),
    #[error("no root: every node has a parent")]
    NoRoot,
    #[error("unknown parent {0:?}")]
    UnknownParent(String),
    #[error("cycle detected at node {0:?}")]
    CycleDetected(String),
    #[error("negative weight on node {0:?}")]
    NegativeWeight(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate sibling label {0:?}")]
    DuplicateSiblingLabel(String),
    #[error("budget k must be at least 1")]
    InvalidBudget,
    #[error("beta must be at least 1")]
    InvalidBeta,
    #[error("node {0} is already selected")]
    AlreadySelected(usize),
    #[error("node id {0} is out of range")]
    UnknownNode(usize),
    #[error("selection is empty")]
    EmptySelection,
    #[error("instance too large for exhaustive search ({nodes} nodes, k = {k}; limit {max_nodes} nodes, k <= {max_k})")]
    TooLargeForOracle {
        nodes: usize,
        k: usize,
        max_nodes: usize,
        max_k: usize,
    },
    #[error("root labels differ: {0:?} vs {1:?}")]
    RootLabelMismatch(String, String),
    #[error("no node labelled {0:?} to anchor the subtree")]
    NoAnchor(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
