//! Orientations of undirected graphs and the presheaf they form.

use std::sync::Arc;

use super::{FinitePresheaf, PresheafError, Site};
use crate::exec::Exec;
use crate::graph::{edge_of, partner, ArcId, DGraph, Graph, UGraph};

/// An orientation `x: A -> {+1, -1}` with `x(a†) = -x(a)`, stored as a
/// bitmask whose bit `e` is set iff `x(2e) = -1`.
pub type Orientation = u64;

/// `x(a)` as `+1` or `-1`.
pub fn sign(x: Orientation, a: ArcId) -> i8 {
    let neg = (x >> edge_of(a)) & 1 == 1;
    if neg ^ (a & 1 == 1) {
        -1
    } else {
        1
    }
}

/// The arc of edge `e` with `x = +1`.
pub fn positive_arc(x: Orientation, e: usize) -> ArcId {
    if (x >> e) & 1 == 0 {
        2 * e
    } else {
        2 * e + 1
    }
}

/// The directed graph `G_x`: an arc with `x = +1` makes its edge an input of
/// the vertex it is attached to. Edges and vertices keep their indices.
pub fn orient(g: &UGraph, x: Orientation) -> DGraph {
    let nv = g.num_vertices();
    let mut ins = vec![Vec::new(); nv];
    let mut outs = vec![Vec::new(); nv];
    for v in 0..nv {
        for &a in g.nbhd(v) {
            if sign(x, a) > 0 {
                ins[v].push(edge_of(a));
            } else {
                outs[v].push(edge_of(a));
            }
        }
    }
    let names = (0..g.num_edges()).map(|e| g.arc_name(2 * e).to_string()).collect();
    DGraph::new(g.name(), names, g.vertex_names().to_vec(), ins, outs).expect("orientation of a valid graph")
}

/// The arcs of `G` corresponding to the arcs of `U(G_x)`.
pub fn orientation_iso(x: Orientation, num_edges: usize) -> Vec<ArcId> {
    (0..num_edges)
        .flat_map(|e| {
            let p = positive_arc(x, e);
            [p, partner(p)]
        })
        .collect()
}

/// The orientation of `U(D)` that recovers `D`.
pub fn canonical_orientation(_d: &DGraph) -> Orientation {
    0
}

/// The orientation of a tree in which every edge points towards the
/// boundary arc `r`, with `x(r) = +1`.
pub fn root(g: &UGraph, r: ArcId) -> Result<Orientation, PresheafError> {
    if r >= g.num_arcs() || g.is_dangling(r) {
        return Err(PresheafError::NotBoundaryArc(
            g.arc_names().get(r).cloned().unwrap_or_else(|| format!("#{r}")),
        ));
    }
    let mut x: Orientation = 0;
    let set_pos = |x: &mut Orientation, a: ArcId| {
        if a & 1 == 1 {
            *x |= 1 << edge_of(a);
        }
    };
    set_pos(&mut x, r);
    // Walk away from the root: at each vertex the arc leading to the root is
    // an output and the others are inputs.
    let mut stack: Vec<(usize, ArcId)> = g.tangent(partner(r)).map(|v| (v, partner(r))).into_iter().collect();
    let mut seen = vec![false; g.num_vertices()];
    while let Some((v, from)) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            return Err(PresheafError::Operad(crate::operad::OperadError::NotATree));
        }
        for &a in g.nbhd(v) {
            if a == from {
                continue;
            }
            set_pos(&mut x, a);
            if let Some(w) = g.tangent(partner(a)) {
                stack.push((w, partner(a)));
            }
        }
    }
    Ok(x)
}

/// Orientations of an undirected site, acting by precomposition.
pub fn orientation_presheaf(site: &Arc<Site>) -> Result<FinitePresheaf, PresheafError> {
    if site.cat.directed() {
        return Err(PresheafError::WrongSites);
    }
    let labels: Vec<Vec<String>> = (0..site.len())
        .map(|a| {
            let ne = site.objects[a].graph().num_edges();
            (0..1u64 << ne)
                .map(|x| (0..ne).map(|e| if (x >> e) & 1 == 0 { '+' } else { '-' }).collect())
                .collect()
        })
        .collect();
    FinitePresheaf::from_fn("orientations", site, labels, Exec::default(), |a, b, k, x| {
        Ok(pullback(x as Orientation, &site.homs[a][b][k].phi0) as usize)
    })
}

/// `x ∘ phi0`.
pub fn pullback(x: Orientation, phi0: &[ArcId]) -> Orientation {
    let mut y = 0;
    for e in 0..phi0.len() / 2 {
        if sign(x, phi0[2 * e]) < 0 {
            y |= 1 << e;
        }
    }
    y
}

/// `G_x` as a graph.
pub fn oriented(g: &UGraph, x: Orientation) -> Graph {
    Graph::D(orient(g, x))
}
