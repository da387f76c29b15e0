//! Graphviz output for divorce graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use divorce_core::graph::DivorceGraph;
use divorce_core::{Instance, Matching, Pair};

#[derive(Clone, Copy, Debug, Default)]
pub struct Highlight<'a> {
    /// Mark stable nodes (double border, green fill).
    pub stable: bool,
    /// Node drawn in bold.
    pub root: Option<&'a Matching>,
    /// Arcs followed from `root` are drawn in red.
    pub witness: Option<&'a [Pair]>,
}

/// `u1-w1 u2-w2`, or `(empty)`.
pub fn matching_label(inst: &Instance, m: &Matching) -> String {
    if m.is_empty() {
        return "(empty)".to_owned();
    }
    let parts: Vec<String> =
        m.pairs().map(|p| format!("{}-{}", inst.name(p.left_agent()), inst.name(p.right_agent()))).collect();
    parts.join(" ")
}

fn quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Nodes appear as `n<id>` in graph order, arcs in successor order.
pub fn export_dot(inst: &Instance, g: &DivorceGraph, hl: &Highlight<'_>) -> String {
    let root = hl.root.and_then(|m| g.find(&m.key()));
    let mut witness_arcs = BTreeSet::new();
    if let (Some(mut at), Some(steps)) = (root, hl.witness) {
        for &p in steps {
            let Some(&(_, to)) = g.successors(at).iter().find(|(q, _)| *q == p) else { break };
            witness_arcs.insert((at, to, p));
            at = to;
        }
    }

    let mut out = String::from("digraph divorce {\n  node [shape=box, fontname=\"monospace\"];\n");
    for id in 0..g.node_count() {
        let mut attrs = vec![format!("label={}", quoted(&matching_label(inst, g.node(id))))];
        if hl.stable && g.is_stable_node(id) {
            attrs.push("peripheries=2".into());
            attrs.push("style=filled".into());
            attrs.push("fillcolor=\"#c8f0c8\"".into());
        }
        if root == Some(id) {
            attrs.push("penwidth=3".into());
        }
        let _ = writeln!(out, "  n{id} [{}];", attrs.join(", "));
    }
    for from in 0..g.node_count() {
        for &(p, to) in g.successors(from) {
            let label = format!("{},{}", inst.name(p.left_agent()), inst.name(p.right_agent()));
            let extra = if witness_arcs.contains(&(from, to, p)) { ", color=red, penwidth=2" } else { "" };
            let _ = writeln!(out, "  n{from} -> n{to} [label={}{extra}];", quoted(&label));
        }
    }
    out.push_str("}\n");
    out
}
