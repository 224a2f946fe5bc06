//! Decorated graphs and their evaluation by iterated composition and
//! contraction.

use super::{Blob, ColorId, OpId, OperadError, Presentation};
use crate::emb::{EmbElement, Host};
use crate::graph::{partner, ArcId, EdgeId, Graph};
use crate::util::bits;

/// A coloring and a choice of operation at every vertex. Colors are per arc
/// for undirected graphs and per edge for directed ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub colors: Vec<ColorId>,
    pub ops: Vec<OpId>,
}

/// A host graph with a decoration.
#[derive(Clone, Copy, Debug)]
pub struct DecoratedGraph<'a> {
    pub host: &'a Host,
    pub deco: &'a Decoration,
}

/// Port labels of a vertex: boundary arcs of its star, in neighborhood
/// order, or inputs then outputs for directed graphs.
pub fn vertex_tags(g: &Graph, v: usize) -> (Vec<ArcId>, usize) {
    match g {
        Graph::U(u) => {
            let t: Vec<ArcId> = u.nbhd(v).iter().map(|&a| partner(a)).collect();
            let n = t.len();
            (t, n)
        }
        Graph::D(d) => {
            let mut t: Vec<ArcId> = d.ins(v).iter().map(|&e| 2 * e + 1).collect();
            let n_in = t.len();
            t.extend(d.outs(v).iter().map(|&e| 2 * e));
            (t, n_in)
        }
    }
}

/// Color of the port labelled by a boundary arc.
pub fn tag_color(g: &Graph, colors: &[ColorId], tag: ArcId) -> ColorId {
    match g {
        Graph::U(_) => colors[tag],
        Graph::D(_) => colors[tag / 2],
    }
}

/// Checks that the coloring is involutive and every vertex is decorated by
/// an operation of the right profile.
pub fn check_decoration(p: &Presentation, host: &Host, d: &Decoration) -> Result<(), OperadError> {
    let g = host.graph();
    if g.is_directed() != p.directed() {
        return Err(OperadError::FlavorMismatch);
    }
    let u = g.ug();
    let want = if g.is_directed() { u.num_edges() } else { u.num_arcs() };
    if d.colors.len() != want || d.ops.len() != u.num_vertices() {
        return Err(OperadError::DecorationMismatch(g.name().to_string()));
    }
    if d.colors.iter().any(|&c| c >= p.colors.len()) || d.ops.iter().any(|&o| o >= p.ops.len()) {
        return Err(OperadError::DecorationMismatch(g.name().to_string()));
    }
    if !g.is_directed() {
        for a in 0..u.num_arcs() {
            if d.colors[partner(a)] != p.inv(d.colors[a]) {
                return Err(OperadError::DecorationMismatch(u.arc_name(a).to_string()));
            }
        }
    }
    for v in 0..u.num_vertices() {
        let (tags, n_in) = vertex_tags(g, v);
        let op = &p.ops[d.ops[v]];
        let cols: Vec<ColorId> = tags.iter().map(|&t| tag_color(g, &d.colors, t)).collect();
        if op.ports != cols || op.n_in != n_in {
            return Err(OperadError::DecorationMismatch(u.vertex_name(v).to_string()));
        }
    }
    Ok(())
}

/// Collapses the given edges between labelled operations. Each edge is a
/// pair of port labels; in the directed flavors the first is an input.
/// Without an explicit order, the edge giving the smallest intermediate
/// arity goes first.
pub fn collapse<T: Clone + PartialEq>(
    p: &Presentation,
    blobs: Vec<Blob<T>>,
    edges: &[(T, T)],
    order: Option<&[usize]>,
) -> Result<Blob<T>, OperadError> {
    let mut blobs: Vec<Option<Blob<T>>> = blobs.into_iter().map(Some).collect();
    let locate = |blobs: &[Option<Blob<T>>], t: &T| -> (usize, usize) {
        for (k, b) in blobs.iter().enumerate() {
            if let Some(b) = b {
                if let Some(i) = b.tags.iter().position(|x| x == t) {
                    return (k, i);
                }
            }
        }
        panic!("port label not found")
    };
    let mut remaining: Vec<usize> = (0..edges.len()).collect();
    let mut step = 0;
    while !remaining.is_empty() {
        let pick = match order {
            Some(o) => {
                let e = o[step];
                remaining.iter().position(|&x| x == e).expect("order lists each edge once")
            }
            None => {
                let size = |e: usize| {
                    let (bs, _) = locate(&blobs, &edges[e].0);
                    let (bt, _) = locate(&blobs, &edges[e].1);
                    let n = |k: usize| blobs[k].as_ref().unwrap().tags.len();
                    if bs == bt {
                        n(bs) - 2
                    } else {
                        n(bs) + n(bt) - 2
                    }
                };
                (0..remaining.len()).min_by_key(|&k| (size(remaining[k]), remaining[k])).unwrap()
            }
        };
        let e = remaining.remove(pick);
        step += 1;
        let (bs, is) = locate(&blobs, &edges[e].0);
        let (bt, it) = locate(&blobs, &edges[e].1);
        let merged = if bs == bt {
            p.contract_blob(blobs[bs].as_ref().unwrap(), is, it)?
        } else {
            p.compose_blobs(blobs[bs].as_ref().unwrap(), is, blobs[bt].as_ref().unwrap(), it)?
        };
        blobs[bs] = Some(merged);
        if bs != bt {
            blobs[bt] = None;
        }
    }
    let mut left = blobs.into_iter().flatten();
    let out = left.next().ok_or(OperadError::Disconnected)?;
    if left.next().is_some() {
        return Err(OperadError::Disconnected);
    }
    Ok(out)
}

/// The operation obtained by collapsing the uncut edges of element `x`,
/// with its ports labelled by the boundary arcs of `x`.
pub fn evaluate(
    p: &Presentation,
    host: &Host,
    d: &Decoration,
    x: usize,
    order: Option<&[EdgeId]>,
) -> Result<Blob<ArcId>, OperadError> {
    let g = host.graph();
    if g.is_directed() != p.directed() {
        return Err(OperadError::FlavorMismatch);
    }
    match host.elem(x) {
        EmbElement::Edge(e) => {
            let (c, tags) = if g.is_directed() {
                (d.colors[e], vec![2 * e + 1, 2 * e])
            } else {
                (d.colors[2 * e + 1], vec![2 * e, 2 * e + 1])
            };
            let op = p.units[c].ok_or_else(|| OperadError::MissingUnit(p.colors[c].clone()))?;
            Ok(Blob { op, tags })
        }
        EmbElement::Region { vertices, uncut } => {
            let blobs: Vec<Blob<ArcId>> = bits(vertices)
                .map(|v| Blob {
                    op: d.ops[v],
                    tags: vertex_tags(g, v).0,
                })
                .collect();
            let zs: Vec<EdgeId> = bits(uncut).collect();
            let edges: Vec<(ArcId, ArcId)> = zs.iter().map(|&e| (2 * e + 1, 2 * e)).collect();
            let order: Option<Vec<usize>> =
                order.map(|o| o.iter().map(|e| zs.iter().position(|z| z == e).expect("edge is uncut")).collect());
            collapse(p, blobs, &edges, order.as_deref())
        }
    }
}

/// All decorations of a host, in a fixed order.
pub fn decorations(p: &Presentation, host: &Host) -> Result<Vec<Decoration>, OperadError> {
    let g = host.graph();
    if g.is_directed() != p.directed() {
        return Err(OperadError::FlavorMismatch);
    }
    let u = g.ug();
    let n_colored = if g.is_directed() { u.num_edges() } else { u.num_arcs() };
    let mut st = DecoState {
        p,
        g,
        colors: vec![None; n_colored],
        ops: vec![0; u.num_vertices()],
        out: Vec::new(),
    };
    st.vertex(0);
    Ok(st.out)
}

struct DecoState<'a> {
    p: &'a Presentation,
    g: &'a Graph,
    colors: Vec<Option<ColorId>>,
    ops: Vec<OpId>,
    out: Vec<Decoration>,
}

impl DecoState<'_> {
    fn slots(&self, tag: ArcId) -> Vec<(usize, bool)> {
        // The colored slots a port fixes, and whether the color is inverted.
        match self.g {
            Graph::U(_) => vec![(tag, false), (partner(tag), true)],
            Graph::D(_) => vec![(tag / 2, false)],
        }
    }

    fn vertex(&mut self, v: usize) {
        let nv = self.g.num_vertices();
        if v == nv {
            self.floating(0);
            return;
        }
        let (tags, n_in) = vertex_tags(self.g, v);
        for (k, op) in self.p.ops.iter().enumerate() {
            if op.arity() != tags.len() || op.n_in != n_in {
                continue;
            }
            let saved = self.colors.clone();
            let mut ok = true;
            'ports: for (t, &c) in tags.iter().zip(&op.ports) {
                for (slot, inv) in self.slots(*t) {
                    let want = if inv { self.p.inv(c) } else { c };
                    match self.colors[slot] {
                        Some(x) if x != want => {
                            ok = false;
                            break 'ports;
                        }
                        _ => self.colors[slot] = Some(want),
                    }
                }
            }
            if ok {
                self.ops[v] = k;
                self.vertex(v + 1);
            }
            self.colors = saved;
        }
    }

    fn floating(&mut self, from: usize) {
        let Some(slot) = (from..self.colors.len()).find(|&s| self.colors[s].is_none()) else {
            self.out.push(Decoration {
                colors: self.colors.iter().map(|c| c.unwrap()).collect(),
                ops: self.ops.clone(),
            });
            return;
        };
        for c in 0..self.p.colors.len() {
            self.colors[slot] = Some(c);
            let pair = if self.g.is_directed() { None } else { Some(partner(slot)) };
            if let Some(q) = pair {
                self.colors[q] = Some(self.p.inv(c));
            }
            self.floating(slot + 1);
            if let Some(q) = pair {
                self.colors[q] = None;
            }
        }
        self.colors[slot] = None;
    }
}
