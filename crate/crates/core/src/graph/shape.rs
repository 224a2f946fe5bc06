use super::{Graph, UGraph};
use crate::util::Dsu;

/// Shape flags of a graph. `is_acyclic` is only meaningful for directed graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphShape {
    pub is_edge: bool,
    pub is_star: bool,
    pub is_linear: bool,
    pub is_tree: bool,
    pub is_acyclic: Option<bool>,
    pub is_connected: bool,
    pub is_simply_connected: bool,
}

pub fn shape(g: &Graph) -> GraphShape {
    let u = g.ug();
    let connected = is_connected(u);
    let internal = (0..u.num_edges()).filter(|&e| u.is_internal(e)).count();
    let nv = u.num_vertices();
    let tree = connected && (nv == 0 || internal + 1 == nv);
    let is_edge = nv == 0 && u.num_edges() == 1;
    let is_star = nv == 1 && internal == 0;
    let (is_linear, is_acyclic) = match g {
        Graph::U(_) => (tree && (0..nv).all(|v| u.arity(v) == 2), None),
        Graph::D(d) => (
            tree && (0..nv).all(|v| d.ins(v).len() == 1 && d.outs(v).len() == 1),
            Some(connected && !has_directed_cycle(d)),
        ),
    };
    GraphShape {
        is_edge,
        is_star,
        is_linear,
        is_tree: tree,
        is_acyclic,
        is_connected: connected,
        is_simply_connected: tree,
    }
}

/// Weak connectivity over edges and vertices.
pub(crate) fn is_connected(u: &UGraph) -> bool {
    let nv = u.num_vertices();
    let ne = u.num_edges();
    let mut dsu = Dsu::new(nv + ne);
    for a in 0..u.num_arcs() {
        if let Some(v) = u.tangent(a) {
            dsu.union(v, nv + a / 2);
        }
    }
    dsu.classes() == 1
}

fn has_directed_cycle(d: &super::DGraph) -> bool {
    // Kahn's algorithm on the vertex digraph.
    let nv = d.num_vertices();
    let mut indeg = vec![0usize; nv];
    for e in 0..d.num_edges() {
        if let (Some(_), Some(h)) = (d.tail(e), d.head(e)) {
            indeg[h] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &e in d.outs(v) {
            if let Some(h) = d.head(e) {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    stack.push(h);
                }
            }
        }
    }
    seen < nv
}
