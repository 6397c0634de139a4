use std::fmt::Write as _;

use crate::udrs::{text, SubordConstraint, UdrsStore};

/// Graphviz rendering of the subordination constraints. Edges point from
/// the lower to the upper label; structural embedding is grey.
pub fn dot(u: &UdrsStore, name: &str) -> String {
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    let n = |l| text::label_name(u, l);
    for l in u.labels() {
        let conds: Vec<String> = u.conds_at(l).map(|c| text::condition_text(u, c)).collect();
        let body = if conds.is_empty() { n(l) } else { conds.join("\\n") };
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", n(l), body.replace('"', "\\\""));
    }
    for c in u.conds() {
        for ch in c.children() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [color=grey];", n(ch), n(c.label));
        }
    }
    for (c, p) in u.subord() {
        let line = match c {
            SubordConstraint::Leq(a, b) => format!("\"{}\" -> \"{}\" [label=\"{p}\"]", n(*a), n(*b)),
            SubordConstraint::Lt(a, b) => {
                format!("\"{}\" -> \"{}\" [style=bold, label=\"{p}\"]", n(*a), n(*b))
            }
            SubordConstraint::Eq(a, b) => {
                format!("\"{}\" -> \"{}\" [dir=none, style=dotted, label=\"{p}\"]", n(*a), n(*b))
            }
            SubordConstraint::Cond { .. } => {
                let t = text::constraint_text(u, c).replace('"', "\\\"");
                let labels = c.labels();
                let (a, b) = (labels[labels.len() - 2], labels[labels.len() - 1]);
                format!("\"{}\" -> \"{}\" [style=dashed, label=\"{t}\"]", n(a), n(b))
            }
        };
        let _ = writeln!(out, "  {line};");
    }
    out.push_str("}\n");
    out
}
