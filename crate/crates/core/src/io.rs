//! Reading and writing tree pairs.
//!
//! Three input layouts are accepted:
//!
//! * one JSON tree document with two weights per node (`label`, `weight1`, `weight2`,
//!   `children`);
//! * two JSON one-weight documents (`label`, `weight`, `children`), merged with
//!   [`zero_fill_align`];
//! * a CSV pair: an edges file of `child,parent` rows (empty parent marks the root) and a
//!   weights file of `label,w1,w2` rows. Either file may start with a header row.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::alignment::{zero_fill_align, LabeledTree};
use crate::error::{Error, Result};
use crate::tree::{build_tree, NodeId, NodeSpec, WeightedTreePair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub label: String,
    pub weight1: u64,
    pub weight2: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TreeDocument>,
}

impl TreeDocument {
    pub fn from_pair(pair: &WeightedTreePair) -> Self {
        let mut done: Vec<Option<TreeDocument>> = vec![None; pair.len()];
        for &x in pair.preorder().iter().rev() {
            let children = pair
                .children(x)
                .iter()
                .map(|c| done[c.0].take().expect("children precede parents"))
                .collect();
            done[x.0] = Some(TreeDocument {
                label: pair.label(x).to_string(),
                weight1: pair.freq1(x),
                weight2: pair.freq2(x),
                children,
            });
        }
        done[pair.root().0].take().unwrap()
    }

    /// Node ids follow the document's pre-order.
    pub fn to_pair(&self) -> Result<WeightedTreePair> {
        let mut labels = Vec::new();
        let mut parents = Vec::new();
        let mut w1 = Vec::new();
        let mut w2 = Vec::new();
        let mut stack: Vec<(&TreeDocument, Option<NodeId>)> = vec![(self, None)];
        while let Some((d, parent)) = stack.pop() {
            let id = NodeId(labels.len());
            labels.push(d.label.clone());
            parents.push(parent);
            w1.push(d.weight1);
            w2.push(d.weight2);
            for c in d.children.iter().rev() {
                stack.push((c, Some(id)));
            }
        }
        WeightedTreePair::from_parents(labels, parents, w1, w2)
    }
}

fn json_error(origin: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!(
        "{origin}: line {} column {}: {e}",
        e.line(),
        e.column()
    ))
}

pub fn parse_tree_document(text: &str, origin: &str) -> Result<TreeDocument> {
    serde_json::from_str(text).map_err(|e| json_error(origin, e))
}

pub fn parse_labeled_tree(text: &str, origin: &str) -> Result<LabeledTree> {
    serde_json::from_str(text).map_err(|e| json_error(origin, e))
}

pub fn tree_to_json(pair: &WeightedTreePair) -> String {
    let mut s = serde_json::to_string_pretty(&TreeDocument::from_pair(pair))
        .expect("tree documents always serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Loads a pair from one two-weight document, two one-weight documents, or an
/// `(edges.csv, weights.csv)` pair.
pub fn load_tree_pair(paths: &[PathBuf]) -> Result<WeightedTreePair> {
    match paths {
        [one] => {
            let text = read(one)?;
            parse_tree_document(&text, &one.display().to_string())?.to_pair()
        }
        [edges, weights] if is_csv(edges) && is_csv(weights) => parse_csv_pair(
            &read(edges)?,
            &read(weights)?,
            &edges.display().to_string(),
            &weights.display().to_string(),
        ),
        [a, b] => {
            let ta = parse_labeled_tree(&read(a)?, &a.display().to_string())?;
            let tb = parse_labeled_tree(&read(b)?, &b.display().to_string())?;
            zero_fill_align(&ta, &tb)
        }
        _ => Err(Error::Parse(format!(
            "expected one or two input files, got {}",
            paths.len()
        ))),
    }
}

pub fn save_tree_pair(pair: &WeightedTreePair, path: &Path) -> Result<()> {
    fs::write(path, tree_to_json(pair)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn csv_rows(text: &str, origin: &str, header: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        if rows.is_empty()
            && fields.len() == header.len()
            && fields
                .iter()
                .zip(header)
                .all(|(f, h)| f.eq_ignore_ascii_case(h))
        {
            continue;
        }
        if fields.len() != header.len() {
            return Err(Error::Parse(format!(
                "{origin}: line {line}: expected {} fields ({}), found {}",
                header.len(),
                header.join(","),
                fields.len()
            )));
        }
        rows.push((line, fields));
    }
    Ok(rows)
}

pub fn parse_csv_pair(
    edges: &str,
    weights: &str,
    edges_origin: &str,
    weights_origin: &str,
) -> Result<WeightedTreePair> {
    let edge_rows = csv_rows(edges, edges_origin, &["child", "parent"])?;
    let weight_rows = csv_rows(weights, weights_origin, &["label", "w1", "w2"])?;

    let mut order: Vec<String> = Vec::new();
    let mut parent_of: HashMap<String, Option<String>> = HashMap::new();
    let note = |label: &str, order: &mut Vec<String>, parent_of: &mut HashMap<_, _>| {
        if !parent_of.contains_key(label) {
            parent_of.insert(label.to_string(), None);
            order.push(label.to_string());
        }
    };
    let mut has_row: HashMap<String, u64> = HashMap::new();
    for (line, f) in &edge_rows {
        let (child, parent) = (&f[0], &f[1]);
        if child.is_empty() {
            return Err(Error::Parse(format!(
                "{edges_origin}: line {line}: empty child label"
            )));
        }
        if let Some(prev) = has_row.insert(child.clone(), *line) {
            return Err(Error::Parse(format!(
                "{edges_origin}: line {line}: {child:?} already given a parent on line {prev}"
            )));
        }
        note(child, &mut order, &mut parent_of);
        if !parent.is_empty() {
            note(parent, &mut order, &mut parent_of);
            parent_of.insert(child.clone(), Some(parent.clone()));
        }
    }

    let mut weight_of: HashMap<String, (i64, i64)> = HashMap::new();
    for (line, f) in &weight_rows {
        let label = &f[0];
        if !parent_of.contains_key(label) {
            return Err(Error::Parse(format!(
                "{weights_origin}: line {line}: label {label:?} does not appear in the edges file"
            )));
        }
        let num = |s: &str| -> Result<i64> {
            s.parse::<i64>().map_err(|_| {
                Error::Parse(format!(
                    "{weights_origin}: line {line}: {s:?} is not an integer weight"
                ))
            })
        };
        if weight_of
            .insert(label.clone(), (num(&f[1])?, num(&f[2])?))
            .is_some()
        {
            return Err(Error::Parse(format!(
                "{weights_origin}: line {line}: duplicate weights for {label:?}"
            )));
        }
    }

    let mut specs = Vec::with_capacity(order.len());
    for label in order {
        let (w1, w2) = *weight_of.get(&label).ok_or_else(|| {
            Error::Parse(format!("{weights_origin}: no weights for label {label:?}"))
        })?;
        specs.push(NodeSpec {
            parent: parent_of[&label].clone(),
            label,
            w1,
            w2,
        });
    }
    build_tree(&specs)
}
