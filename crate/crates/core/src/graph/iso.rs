//! Isomorphism testing and canonical forms.
//!
//! A connected graph is determined up to isomorphism by, per vertex, its
//! loose legs and loops, and per pair of vertices, the number of edges
//! between them. The canonical certificate is the lexicographically least
//! encoding of that data over vertex orderings, found by branch and bound.

use std::collections::HashMap;

use super::{partner, ArcId, DGraph, Graph, UGraph, VertexId};

/// Adjacency data of an undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UData {
    pub floating: usize,
    pub legs: Vec<usize>,
    pub loops: Vec<usize>,
    /// Symmetric; the diagonal is unused.
    pub mult: Vec<Vec<usize>>,
}

/// Adjacency data of a directed graph. `mult[u][v]` counts edges `u -> v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DData {
    pub floating: usize,
    pub in_legs: Vec<usize>,
    pub out_legs: Vec<usize>,
    pub loops: Vec<usize>,
    pub mult: Vec<Vec<usize>>,
}

impl UData {
    pub fn of(g: &UGraph) -> Self {
        let n = g.num_vertices();
        let mut d = UData {
            floating: 0,
            legs: vec![0; n],
            loops: vec![0; n],
            mult: vec![vec![0; n]; n],
        };
        for e in 0..g.num_edges() {
            match (g.tangent(2 * e), g.tangent(2 * e + 1)) {
                (None, None) => d.floating += 1,
                (Some(v), None) | (None, Some(v)) => d.legs[v] += 1,
                (Some(u), Some(w)) if u == w => d.loops[u] += 1,
                (Some(u), Some(w)) => {
                    d.mult[u][w] += 1;
                    d.mult[w][u] += 1;
                }
            }
        }
        d
    }

    pub fn arity(&self, v: usize) -> usize {
        self.legs[v] + 2 * self.loops[v] + self.mult[v].iter().enumerate().filter(|&(w, _)| w != v).map(|(_, m)| m).sum::<usize>()
    }

    /// Builds a graph realizing this data. Leg arcs `k` are loose, `k†` attached.
    pub fn build(&self, name: &str) -> UGraph {
        let n = self.legs.len();
        let mut names = Vec::new();
        let mut nbhd = vec![Vec::new(); n];
        let push = |names: &mut Vec<String>, a: Option<usize>, b: Option<usize>, nbhd: &mut Vec<Vec<usize>>| {
            let k = names.len() / 2;
            names.push(format!("{k}"));
            names.push(format!("{k}†"));
            if let Some(v) = a {
                nbhd[v].push(2 * k);
            }
            if let Some(v) = b {
                nbhd[v].push(2 * k + 1);
            }
        };
        for _ in 0..self.floating {
            push(&mut names, None, None, &mut nbhd);
        }
        for v in 0..n {
            for _ in 0..self.legs[v] {
                push(&mut names, None, Some(v), &mut nbhd);
            }
            for _ in 0..self.loops[v] {
                push(&mut names, Some(v), Some(v), &mut nbhd);
            }
        }
        for u in 0..n {
            for w in u + 1..n {
                for _ in 0..self.mult[u][w] {
                    push(&mut names, Some(u), Some(w), &mut nbhd);
                }
            }
        }
        UGraph::new(name, names, (0..n).map(|v| format!("v{v}")).collect(), nbhd).expect("valid data")
    }
}

impl DData {
    pub fn of(g: &DGraph) -> Self {
        let n = g.num_vertices();
        let mut d = DData {
            floating: 0,
            in_legs: vec![0; n],
            out_legs: vec![0; n],
            loops: vec![0; n],
            mult: vec![vec![0; n]; n],
        };
        for e in 0..g.num_edges() {
            match (g.tail(e), g.head(e)) {
                (None, None) => d.floating += 1,
                (None, Some(v)) => d.in_legs[v] += 1,
                (Some(v), None) => d.out_legs[v] += 1,
                (Some(u), Some(w)) if u == w => d.loops[u] += 1,
                (Some(u), Some(w)) => d.mult[u][w] += 1,
            }
        }
        d
    }

    pub fn in_arity(&self, v: usize) -> usize {
        self.in_legs[v] + self.loops[v] + (0..self.in_legs.len()).filter(|&u| u != v).map(|u| self.mult[u][v]).sum::<usize>()
    }

    pub fn out_arity(&self, v: usize) -> usize {
        self.out_legs[v] + self.loops[v] + (0..self.in_legs.len()).filter(|&w| w != v).map(|w| self.mult[v][w]).sum::<usize>()
    }

    pub fn build(&self, name: &str) -> DGraph {
        let n = self.in_legs.len();
        let mut ins = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        let mut ne = 0usize;
        let mut push = |tail: Option<usize>, head: Option<usize>| {
            if let Some(v) = head {
                ins[v].push(ne);
            }
            if let Some(v) = tail {
                outs[v].push(ne);
            }
            ne += 1;
        };
        for _ in 0..self.floating {
            push(None, None);
        }
        for v in 0..n {
            for _ in 0..self.in_legs[v] {
                push(None, Some(v));
            }
            for _ in 0..self.out_legs[v] {
                push(Some(v), None);
            }
            for _ in 0..self.loops[v] {
                push(Some(v), Some(v));
            }
        }
        for u in 0..n {
            for w in 0..n {
                if u != w {
                    for _ in 0..self.mult[u][w] {
                        push(Some(u), Some(w));
                    }
                }
            }
        }
        DGraph::new(
            name,
            (0..ne).map(|e| format!("e{e}")).collect(),
            (0..n).map(|v| format!("v{v}")).collect(),
            ins,
            outs,
        )
        .expect("valid data")
    }
}

enum Data {
    U(UData),
    D(DData),
}

impl Data {
    fn of(g: &Graph) -> Self {
        match g {
            Graph::U(u) => Data::U(UData::of(u)),
            Graph::D(d) => Data::D(DData::of(d)),
        }
    }

    fn n(&self) -> usize {
        match self {
            Data::U(d) => d.legs.len(),
            Data::D(d) => d.in_legs.len(),
        }
    }

    fn header(&self) -> Vec<usize> {
        match self {
            Data::U(d) => vec![0, d.legs.len(), d.floating],
            Data::D(d) => vec![1, d.in_legs.len(), d.floating],
        }
    }

    fn chunk(&self, placed: &[usize], v: usize, out: &mut Vec<usize>) {
        match self {
            Data::U(d) => {
                out.extend([d.arity(v), d.legs[v], d.loops[v]]);
                out.extend(placed.iter().map(|&p| d.mult[p][v]));
            }
            Data::D(d) => {
                out.extend([
                    d.in_arity(v),
                    d.out_arity(v),
                    d.in_legs[v],
                    d.out_legs[v],
                    d.loops[v],
                ]);
                for &p in placed {
                    out.push(d.mult[p][v]);
                    out.push(d.mult[v][p]);
                }
            }
        }
    }
}

fn search(data: &Data, placed: &mut Vec<usize>, prefix: &mut Vec<usize>, best: &mut Option<(Vec<usize>, Vec<usize>)>) {
    let n = data.n();
    if placed.len() == n {
        if best.as_ref().is_none_or(|(b, _)| prefix.as_slice() < b.as_slice()) {
            *best = Some((prefix.clone(), placed.clone()));
        }
        return;
    }
    let mut tried: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if placed.contains(&v) {
            continue;
        }
        let mut chunk = Vec::new();
        data.chunk(placed, v, &mut chunk);
        let len = prefix.len();
        prefix.extend_from_slice(&chunk);
        let prune = match best {
            Some((b, _)) => prefix.as_slice() > &b[..prefix.len()],
            None => false,
        };
        // Candidates with a strictly larger chunk than a tried one cannot win.
        let dominated = tried.iter().any(|t| &chunk > t);
        if !prune && !dominated {
            tried.retain(|t| t <= &chunk);
            tried.push(chunk);
            placed.push(v);
            search(data, placed, prefix, best);
            placed.pop();
        }
        prefix.truncate(len);
    }
}

/// Certificate and a vertex order attaining it.
pub fn canonical_order(g: &Graph) -> (Vec<usize>, Vec<VertexId>) {
    let data = Data::of(g);
    let mut best = None;
    let mut prefix = data.header();
    search(&data, &mut Vec::new(), &mut prefix, &mut best);
    best.expect("at least one ordering")
}

/// Equal for two graphs exactly when they are isomorphic.
pub fn certificate(g: &Graph) -> Vec<usize> {
    canonical_order(g).0
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonical_form(g: &Graph) -> Graph {
    let (_, order) = canonical_order(g);
    match Data::of(g) {
        Data::U(d) => {
            let p = permute_u(&d, &order);
            Graph::U(p.build(g.name()))
        }
        Data::D(d) => {
            let p = permute_d(&d, &order);
            Graph::D(p.build(g.name()))
        }
    }
}

fn permute_u(d: &UData, order: &[usize]) -> UData {
    UData {
        floating: d.floating,
        legs: order.iter().map(|&v| d.legs[v]).collect(),
        loops: order.iter().map(|&v| d.loops[v]).collect(),
        mult: order.iter().map(|&u| order.iter().map(|&w| d.mult[u][w]).collect()).collect(),
    }
}

fn permute_d(d: &DData, order: &[usize]) -> DData {
    DData {
        floating: d.floating,
        in_legs: order.iter().map(|&v| d.in_legs[v]).collect(),
        out_legs: order.iter().map(|&v| d.out_legs[v]).collect(),
        loops: order.iter().map(|&v| d.loops[v]).collect(),
        mult: order.iter().map(|&u| order.iter().map(|&w| d.mult[u][w]).collect()).collect(),
    }
}

/// An isomorphism, given on underlying arcs and on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iso {
    pub arcs: Vec<ArcId>,
    pub vertices: Vec<VertexId>,
}

/// Finds an isomorphism `g -> h`, if any.
pub fn find_iso(g: &Graph, h: &Graph) -> Option<Iso> {
    if g.is_directed() != h.is_directed() {
        return None;
    }
    let (cg, og) = canonical_order(g);
    let (ch, oh) = canonical_order(h);
    if cg != ch {
        return None;
    }
    let mut sigma = vec![0; og.len()];
    for (k, &v) in og.iter().enumerate() {
        sigma[v] = oh[k];
    }
    let iso = match (g, h) {
        (Graph::U(a), Graph::U(b)) => match_arcs(a, b, &sigma, |u, a| (u.tangent(a), u.tangent(partner(a)))),
        // For directed graphs group by (head, tail) of the `+` arc; sign is kept.
        (Graph::D(a), Graph::D(b)) => match_arcs_directed(a, b, &sigma),
        _ => None,
    }?;
    Some(Iso { arcs: iso, vertices: sigma })
}

fn match_arcs(
    g: &UGraph,
    h: &UGraph,
    sigma: &[usize],
    ends: impl Fn(&UGraph, ArcId) -> (Option<usize>, Option<usize>),
) -> Option<Vec<ArcId>> {
    let mut pool: HashMap<(Option<usize>, Option<usize>), Vec<ArcId>> = HashMap::new();
    for a in 0..h.num_arcs() {
        pool.entry(ends(h, a)).or_default().push(a);
    }
    let mut used = vec![false; h.num_edges()];
    let mut map = vec![usize::MAX; g.num_arcs()];
    for a in 0..g.num_arcs() {
        if map[a] != usize::MAX {
            continue;
        }
        let (x, y) = ends(g, a);
        let key = (x.map(|v| sigma[v]), y.map(|v| sigma[v]));
        let list = pool.get(&key)?;
        let b = *list.iter().find(|&&b| !used[b / 2])?;
        used[b / 2] = true;
        map[a] = b;
        map[partner(a)] = partner(b);
    }
    Some(map)
}

fn match_arcs_directed(g: &DGraph, h: &DGraph, sigma: &[usize]) -> Option<Vec<ArcId>> {
    let mut pool: HashMap<(Option<usize>, Option<usize>), Vec<usize>> = HashMap::new();
    for e in 0..h.num_edges() {
        pool.entry((h.tail(e), h.head(e))).or_default().push(e);
    }
    let mut used = vec![false; h.num_edges()];
    let mut map = vec![0; 2 * g.num_edges()];
    for e in 0..g.num_edges() {
        let key = (g.tail(e).map(|v| sigma[v]), g.head(e).map(|v| sigma[v]));
        let f = *pool.get(&key)?.iter().find(|&&f| !used[f])?;
        used[f] = true;
        map[2 * e] = 2 * f;
        map[2 * e + 1] = 2 * f + 1;
    }
    Some(map)
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.is_directed() == h.is_directed() && certificate(g) == certificate(h)
}

/// Relabels a graph: edges are permuted by `edge_perm` (new index of old
/// edge `e` is `edge_perm[e]`), the arcs of edge `e` are swapped when
/// `flip[e]` (undirected only), vertices are permuted by `vertex_perm`, and
/// each neighborhood is rotated by `rot`.
pub fn relabel(g: &Graph, edge_perm: &[usize], flip: &[bool], vertex_perm: &[usize], rot: usize) -> Graph {
    match g {
        Graph::U(u) => {
            let na = u.num_arcs();
            let arc_map = |a: usize| {
                let e = a / 2;
                let side = (a & 1) ^ (flip[e] as usize);
                2 * edge_perm[e] + side
            };
            let mut names = vec![String::new(); na];
            for a in 0..na {
                names[arc_map(a)] = u.arc_name(a).to_string();
            }
            let nv = u.num_vertices();
            let mut vnames = vec![String::new(); nv];
            let mut nbhd = vec![Vec::new(); nv];
            for v in 0..nv {
                vnames[vertex_perm[v]] = u.vertex_name(v).to_string();
                let mut list: Vec<usize> = u.nbhd(v).iter().map(|&a| arc_map(a)).collect();
                if !list.is_empty() {
                    let r = rot % list.len();
                    list.rotate_left(r);
                }
                nbhd[vertex_perm[v]] = list;
            }
            Graph::U(UGraph::new(u.name(), names, vnames, nbhd).expect("relabel"))
        }
        Graph::D(d) => {
            let ne = d.num_edges();
            let mut names = vec![String::new(); ne];
            for e in 0..ne {
                names[edge_perm[e]] = d.edge_name(e).to_string();
            }
            let nv = d.num_vertices();
            let mut vnames = vec![String::new(); nv];
            let mut ins = vec![Vec::new(); nv];
            let mut outs = vec![Vec::new(); nv];
            for v in 0..nv {
                vnames[vertex_perm[v]] = d.vertex_name(v).to_string();
                let mut i: Vec<usize> = d.ins(v).iter().map(|&e| edge_perm[e]).collect();
                let mut o: Vec<usize> = d.outs(v).iter().map(|&e| edge_perm[e]).collect();
                if !i.is_empty() {
                    let r = rot % i.len();
                    i.rotate_left(r);
                }
                if !o.is_empty() {
                    let r = rot % o.len();
                    o.rotate_right(r);
                }
                ins[vertex_perm[v]] = i;
                outs[vertex_perm[v]] = o;
            }
            Graph::D(DGraph::new(d.name(), names, vnames, ins, outs).expect("relabel"))
        }
    }
}
