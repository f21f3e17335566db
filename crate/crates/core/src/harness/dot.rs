//! Graphviz DOT export of interaction networks.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::miner::InteractionRecord;

fn quoted(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A `digraph` (directional) or `graph` (undirected) with one edge per record,
/// labelled by verb and carrying the confidence. Nodes and edges are sorted.
pub fn emit_dot(records: &[InteractionRecord], directional: bool) -> String {
    let (kind, edge) = if directional {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let nodes: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| [r.subject.as_str(), r.object.as_str()])
        .collect();
    let mut edges: Vec<&InteractionRecord> = records.iter().collect();
    edges.sort_by(|a, b| (&a.subject, &a.object, &a.verb).cmp(&(&b.subject, &b.object, &b.verb)));

    let mut out = format!("{kind} interactions {{\n");
    for node in nodes {
        writeln!(out, "  {};", quoted(node)).unwrap();
    }
    for r in edges {
        writeln!(
            out,
            "  {} {edge} {} [label={}, confidence={:.6}];",
            quoted(&r.subject),
            quoted(&r.object),
            quoted(&r.verb),
            r.confidence
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
