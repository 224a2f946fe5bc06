//! The free augmented cyclic operad on a tree, and maps out of it.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::eval::{decorations, vertex_tags};
use super::{compose_tags, ColorId, Flavor, OpId, OperadError, Presentation};
use crate::emb::{EmbElement, Host};
use crate::graph::{edge_of, partner, shape, ArcId, Graph, UGraph};
use crate::maps::{extend_tree_map, GraphMap, MapError};
use crate::util::bits;

/// `C(G)`: colors are the arcs of `G`, operations are subtrees with a
/// total order on their boundary.
#[derive(Clone, Debug)]
pub struct FreeCyclic {
    pub pres: Presentation,
    pub host: Arc<Host>,
    /// Operation for an element and an ordering of its boundary.
    pub index: HashMap<(usize, Vec<ArcId>), OpId>,
    /// Element underlying each operation.
    pub elem_of: Vec<usize>,
}

fn label(h: &Host, x: usize) -> String {
    let g = h.ug();
    match h.elem(x) {
        EmbElement::Edge(e) => g.arc_name(2 * e).to_string(),
        EmbElement::Region { vertices, .. } => bits(vertices).map(|v| g.vertex_name(v)).join("+"),
    }
}

/// Builds `C(G)` with operations of arity at most `cap`.
pub fn free_cyclic(g: &UGraph, cap: usize) -> Result<FreeCyclic, OperadError> {
    let graph = Graph::U(g.clone());
    if !shape(&graph).is_tree {
        return Err(OperadError::NotATree);
    }
    let host = Arc::new(Host::new(graph).map_err(|_| OperadError::NotATree)?);
    let colors: Vec<&str> = g.arc_names().iter().map(|s| s.as_str()).collect();
    let involution: Vec<ColorId> = (0..g.num_arcs()).map(partner).collect();
    let mut pres = Presentation::new(&format!("C({})", g.name()), Flavor::AugCyclic, &colors, &involution, cap);
    let mut index = HashMap::new();
    let mut elem_of = Vec::new();
    for x in 0..host.len() {
        let b = host.boundary(x);
        if b.len() > cap {
            continue;
        }
        for ord in b.iter().copied().permutations(b.len()) {
            let name = format!("{}[{}]", label(&host, x), ord.iter().map(|&a| g.arc_name(a)).join(","));
            let k = pres.add_op(&name, &ord, ord.len());
            index.insert((x, ord), k);
            elem_of.push(x);
        }
    }
    for a in 0..g.num_arcs() {
        let e = host.edge_elem(edge_of(a));
        pres.units[a] = Some(index[&(e, vec![partner(a), a])]);
    }
    for k in 0..pres.ops.len() {
        let ports = pres.ops[k].ports.clone();
        for s in pres.perms_of(k) {
            if s.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            let ord: Vec<ArcId> = s.iter().map(|&i| ports[i]).collect();
            pres.act.insert((k, s), index[&(elem_of[k], ord)]);
        }
    }
    let mut by_port: HashMap<ArcId, Vec<(OpId, usize)>> = HashMap::new();
    for (k, o) in pres.ops.iter().enumerate() {
        for (i, &a) in o.ports.iter().enumerate() {
            by_port.entry(a).or_default().push((k, i));
        }
    }
    for p in 0..pres.ops.len() {
        for i in 0..pres.ops[p].arity() {
            let a = pres.ops[p].ports[i];
            for &(q, j) in by_port.get(&partner(a)).map_or(&[][..], |v| v.as_slice()) {
                let (pp, qq) = (&pres.ops[p], &pres.ops[q]);
                if pp.arity() + qq.arity() - 2 > cap {
                    continue;
                }
                let u = host.unions(elem_of[p], elem_of[q]);
                if u.len() != 1 {
                    return Err(OperadError::Unknown(format!("subtrees {} and {} have no unique union", pp.name, qq.name)));
                }
                let (ord, _) = compose_tags(&pp.ports, pp.n_in, i, &qq.ports, qq.n_in, j, false);
                let r = *index.get(&(u[0], ord)).ok_or_else(|| {
                    OperadError::ProfileMismatch(format!("union of {} and {}", pp.name, qq.name))
                })?;
                pres.compose.insert((p, i, q, j), r);
            }
        }
    }
    Ok(FreeCyclic {
        pres,
        host,
        index,
        elem_of,
    })
}

/// A map out of the free operad on a tree: a color for each arc and an
/// operation for each vertex, whose ports follow the star's boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperadHom {
    pub colors: Vec<ColorId>,
    pub gens: Vec<OpId>,
}

/// All maps `C(H) -> P`. Since `C(H)` is free on its vertices these are the
/// decorations of `H` by `P`.
pub fn operad_homs(h: &UGraph, p: &Presentation) -> Result<Vec<OperadHom>, OperadError> {
    let graph = Graph::U(h.clone());
    if !shape(&graph).is_tree {
        return Err(OperadError::NotATree);
    }
    let host = Host::new(graph).map_err(|_| OperadError::NotATree)?;
    Ok(decorations(p, &host)?
        .into_iter()
        .map(|d| OperadHom {
            colors: d.colors,
            gens: d.ops,
        })
        .collect())
}

/// The operad map `C(H) -> C(G)` of a tree map.
pub fn tree_map_to_hom(m: &GraphMap, c: &FreeCyclic) -> Option<OperadHom> {
    let g = m.source.graph();
    let gens = (0..g.num_vertices())
        .map(|w| {
            let x = m.phi_hat[m.source.vertex_elem(w)];
            let ord: Vec<ArcId> = vertex_tags(g, w).0.iter().map(|&a| m.phi0[a]).collect();
            c.index.get(&(x, ord)).copied()
        })
        .collect::<Option<Vec<OpId>>>()?;
    Some(OperadHom {
        colors: m.phi0.clone(),
        gens,
    })
}

/// The tree map of an operad map `C(H) -> C(G)`.
pub fn hom_to_tree_map(h: &OperadHom, src: &Arc<Host>, c: &FreeCyclic) -> Result<GraphMap, MapError> {
    let phi1: Vec<usize> = h.gens.iter().map(|&k| c.elem_of[k]).collect();
    extend_tree_map(src, &c.host, &h.colors, &phi1)
}
