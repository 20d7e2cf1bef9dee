//! Compact DOT rendering of a summary.
//!
//! Nodes that are neither selected nor above a selected node are dropped. Below the
//! topmost representatives, unselected nodes are skipped too and each representative is
//! linked to its nearest selected ancestor by a dashed edge whose tooltip lists the
//! skipped labels. Similarity representatives are red, difference representatives blue;
//! darker shades mark larger gains.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scoring::{Side, SummarySelection};
use crate::tree::{NodeId, WeightedTreePair};

const SIM_SHADES: [&str; 4] = ["#b71c1c", "#e53935", "#ef9a9a", "#ffebee"];
const DIF_SHADES: [&str; 4] = ["#0d47a1", "#1e88e5", "#90caf9", "#e3f2fd"];
const CONTEXT_FILL: &str = "#eeeeee";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}

/// Shade index 0 (darkest) to 3 per selected node, by gain quartile within its side.
fn shade_ranks(
    selection: &SummarySelection,
    gains: &BTreeMap<NodeId, f64>,
) -> BTreeMap<NodeId, usize> {
    let mut out = BTreeMap::new();
    for side in Side::BOTH {
        let mut members: Vec<NodeId> = selection.side(side).iter().copied().collect();
        let gain = |x: &NodeId| gains.get(x).copied().unwrap_or(0.0);
        members.sort_by(|a, b| gain(b).total_cmp(&gain(a)).then(a.cmp(b)));
        let count = members.len();
        for (rank, x) in members.into_iter().enumerate() {
            out.insert(x, rank * 4 / count);
        }
    }
    out
}

/// Which nodes survive compaction: selected ones and those with no selected ancestor but
/// some selected descendant.
pub fn rendered_nodes(pair: &WeightedTreePair, selection: &SummarySelection) -> Vec<bool> {
    let n = pair.len();
    let mut below = vec![false; n];
    for &x in pair.preorder().iter().rev() {
        if selection.contains(x) || pair.children(x).iter().any(|c| below[c.0]) {
            below[x.0] = true;
        }
    }
    // strictly above: some proper ancestor is selected
    let mut under_rep = vec![false; n];
    for &x in pair.preorder() {
        if let Some(p) = pair.parent(x) {
            under_rep[x.0] = under_rep[p.0] || selection.contains(p);
        }
    }
    (0..n)
        .map(|i| selection.contains(NodeId(i)) || (below[i] && !under_rep[i]))
        .collect()
}

pub fn emit_summary_graph(
    pair: &WeightedTreePair,
    selection: &SummarySelection,
    scores: &[f64],
    gains: &BTreeMap<NodeId, f64>,
) -> Result<String> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    let keep = rendered_nodes(pair, selection);
    let shade = shade_ranks(selection, gains);

    let mut out = String::new();
    out.push_str("digraph summary {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];\n");
    for x in pair.nodes().filter(|x| keep[x.0]) {
        let label = escape(pair.label(x));
        match selection.side_of(x) {
            Some(side) => {
                let s = shade[&x];
                let fill = match side {
                    Side::Sim => SIM_SHADES[s],
                    Side::Dif => DIF_SHADES[s],
                };
                let font = if s < 2 { "white" } else { "black" };
                let gain = gains.get(&x).copied().unwrap_or(0.0);
                let _ = writeln!(
                    out,
                    "  n{} [label=\"{}\\n{} gain={:.3} simdif={:.3}\", fillcolor=\"{}\", fontcolor=\"{}\"];",
                    x.0,
                    label,
                    side,
                    gain,
                    scores.get(x.0).copied().unwrap_or(0.0),
                    fill,
                    font
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "  n{} [label=\"{}\", fillcolor=\"{}\", fontcolor=\"black\"];",
                    x.0, label, CONTEXT_FILL
                );
            }
        }
    }
    for x in pair.nodes().filter(|x| keep[x.0]) {
        let mut skipped = Vec::new();
        let mut up = pair.parent(x);
        while let Some(p) = up {
            if keep[p.0] {
                break;
            }
            skipped.push(p);
            up = pair.parent(p);
        }
        let Some(p) = up else { continue };
        if skipped.is_empty() {
            let _ = writeln!(out, "  n{} -> n{};", p.0, x.0);
        } else {
            let chain: Vec<String> = skipped
                .iter()
                .rev()
                .map(|&z| pair.label(z).to_string())
                .collect();
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=dashed, tooltip=\"{}\"];",
                p.0,
                x.0,
                escape(&chain.join(" > "))
            );
        }
    }
    out.push_str("}\n");
    Ok(out)
}
