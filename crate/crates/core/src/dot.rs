//! DOT export. Vertices are circles; loose ends run to invisible points.
//! Directed graphs flow from top to bottom.

use std::fmt::Write as _;

use crate::graph::{partner, Graph};

fn id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &Graph) -> String {
    let mut s = String::new();
    let u = g.ug();
    let (kind, link) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let _ = writeln!(s, "{kind} {} {{", id(g.name()));
    if g.is_directed() {
        s.push_str("  rankdir=TB;\n");
    }
    s.push_str("  node [shape=circle];\n");
    for v in 0..u.num_vertices() {
        let _ = writeln!(s, "  v{v} [label={}];", id(u.vertex_name(v)));
    }
    // A free end gets its own invisible point.
    let end = |s: &mut String, a: usize| -> String {
        let _ = writeln!(s, "  a{a} [shape=point, style=invis];");
        format!("a{a}")
    };
    for e in 0..u.num_edges() {
        // Arc 2e sits at the head of a directed edge, 2e + 1 at its tail.
        let (head, tail) = (2 * e, 2 * e + 1);
        let at = |a: usize| u.tangent(a).map(|v| format!("v{v}"));
        let h = at(head).unwrap_or_else(|| end(&mut s, head));
        let t = at(tail).unwrap_or_else(|| end(&mut s, partner(head)));
        let _ = writeln!(s, "  {t} {link} {h} [label={}];", id(g.edge_name(e)));
    }
    s.push_str("}\n");
    s
}
