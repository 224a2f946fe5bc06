//! The poset of embeddings into a graph, up to isomorphism of the domain.
//!
//! An element is either an edge of the host, or a region: a nonempty vertex
//! set `S` together with the set `Z` of edges joining vertices of `S` that
//! stay uncut. The region's realization has the vertices `S`, the edges `Z`,
//! and one loose edge for every other arc attached to `S`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::etale::{lift_etale, DEtale, UEtale};
use crate::graph::{edge_of, partner, shape, ArcId, DGraph, EdgeId, Graph, UGraph, VertexId};
use crate::util::{bits, submasks, Dsu};

/// Hosts are limited so that vertex and edge sets fit in a machine word.
pub const MAX_HOST_VERTICES: usize = 20;
pub const MAX_HOST_EDGES: usize = 64;
/// Regions with more joining edges than this are not enumerated.
pub const MAX_JOINING_EDGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbError {
    #[error("graph too large for embedding enumeration ({0})")]
    TooLarge(String),
    #[error("element is not an embedding into this graph")]
    NotInHost,
    #[error("graph is not a connected acyclic directed graph")]
    NotAcyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbElement {
    Edge(EdgeId),
    Region { vertices: u64, uncut: u64 },
}

impl EmbElement {
    pub fn vertex_mask(&self) -> u64 {
        match *self {
            EmbElement::Edge(_) => 0,
            EmbElement::Region { vertices, .. } => vertices,
        }
    }

    fn key(&self) -> (u32, Vec<usize>, Vec<usize>) {
        match *self {
            EmbElement::Edge(e) => (0, Vec::new(), vec![e]),
            EmbElement::Region { vertices, uncut } => {
                (vertices.count_ones(), bits(vertices).collect(), bits(uncut).collect())
            }
        }
    }
}

impl Ord for EmbElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for EmbElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Constraint data used when this host is the source of a map search.
#[derive(Debug, Default)]
pub(crate) struct SearchData {
    /// Regions other than single vertices, by number of vertices then uncut edges.
    pub order: Vec<usize>,
    /// Lower covers of every element.
    pub covers: Vec<Vec<usize>>,
    /// For each `z`, pairs `(x, y)` below `z` covering its vertices, reduced
    /// to minimal elements.
    pub triples: Vec<Vec<(usize, usize)>>,
    /// Pairs of vertex-disjoint full regions.
    pub disjoint: Vec<(usize, usize)>,
}

/// A graph together with its embedding poset.
#[derive(Debug)]
pub struct Host {
    graph: Graph,
    elems: Vec<EmbElement>,
    index: HashMap<EmbElement, usize>,
    boundary: Vec<Vec<ArcId>>,
    by_boundary: HashMap<Vec<ArcId>, Vec<usize>>,
    by_vertices: HashMap<u64, Vec<usize>>,
    touched: Vec<u64>,
    incident: Vec<u64>,
    vertex_elem: Vec<usize>,
    edge_elem: Vec<usize>,
    max: Option<usize>,
    search: OnceLock<SearchData>,
}

impl PartialEq for Host {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

fn joining_edges(g: &UGraph, s: u64) -> u64 {
    let mut m = 0u64;
    for e in 0..g.num_edges() {
        let inside = |a: ArcId| g.tangent(a).is_some_and(|v| s >> v & 1 == 1);
        if inside(2 * e) && inside(2 * e + 1) {
            m |= 1 << e;
        }
    }
    m
}

fn region_connected(g: &UGraph, s: u64, z: u64) -> bool {
    let vs: Vec<usize> = bits(s).collect();
    let mut dsu = Dsu::new(vs.len());
    let pos = |v: usize| vs.iter().position(|&x| x == v).expect("vertex in region");
    for e in bits(z) {
        let (a, b) = (g.tangent(2 * e).unwrap(), g.tangent(2 * e + 1).unwrap());
        dsu.union(pos(a), pos(b));
    }
    dsu.classes() == 1
}

impl Host {
    pub fn new(graph: impl Into<Graph>) -> Result<Host, EmbError> {
        let graph = graph.into();
        let g = graph.ug();
        let nv = g.num_vertices();
        let ne = g.num_edges();
        if nv > MAX_HOST_VERTICES {
            return Err(EmbError::TooLarge(format!("{nv} vertices")));
        }
        if ne > MAX_HOST_EDGES {
            return Err(EmbError::TooLarge(format!("{ne} edges")));
        }
        let mut elems: Vec<EmbElement> = (0..ne).map(EmbElement::Edge).collect();
        for s in 1u64..(1u64 << nv) {
            let join = joining_edges(g, s);
            if join.count_ones() as usize > MAX_JOINING_EDGES {
                return Err(EmbError::TooLarge(format!("{} joining edges", join.count_ones())));
            }
            for z in submasks(join) {
                if region_connected(g, s, z) {
                    elems.push(EmbElement::Region { vertices: s, uncut: z });
                }
            }
        }
        elems.sort();
        let incident: Vec<u64> = (0..nv)
            .map(|v| g.nbhd(v).iter().fold(0u64, |m, &a| m | 1 << edge_of(a)))
            .collect();
        let mut index = HashMap::new();
        let mut boundary = Vec::with_capacity(elems.len());
        let mut by_boundary: HashMap<Vec<ArcId>, Vec<usize>> = HashMap::new();
        let mut by_vertices: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut touched = Vec::with_capacity(elems.len());
        let mut vertex_elem = vec![0; nv];
        let mut edge_elem = vec![0; ne];
        for (i, x) in elems.iter().enumerate() {
            index.insert(*x, i);
            let b = region_boundary(g, x);
            by_boundary.entry(b.clone()).or_default().push(i);
            boundary.push(b);
            by_vertices.entry(x.vertex_mask()).or_default().push(i);
            match *x {
                EmbElement::Edge(e) => {
                    touched.push(1 << e);
                    edge_elem[e] = i;
                }
                EmbElement::Region { vertices, uncut } => {
                    touched.push(bits(vertices).fold(0, |m, v| m | incident[v]));
                    if vertices.count_ones() == 1 && uncut == 0 {
                        vertex_elem[vertices.trailing_zeros() as usize] = i;
                    }
                }
            }
        }
        let connected = shape(&graph).is_connected;
        let max = if !connected {
            None
        } else if nv == 0 {
            Some(0)
        } else {
            let all = (1u64 << nv) - 1;
            index
                .get(&EmbElement::Region {
                    vertices: all,
                    uncut: joining_edges(g, all),
                })
                .copied()
        };
        Ok(Host {
            graph,
            elems,
            index,
            boundary,
            by_boundary,
            by_vertices,
            touched,
            incident,
            vertex_elem,
            edge_elem,
            max,
            search: OnceLock::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ug(&self) -> &UGraph {
        self.graph.ug()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[EmbElement] {
        &self.elems
    }

    pub fn elem(&self, i: usize) -> EmbElement {
        self.elems[i]
    }

    pub fn index_of(&self, x: &EmbElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Boundary arcs, sorted. Always a set.
    pub fn boundary(&self, i: usize) -> &[ArcId] {
        &self.boundary[i]
    }

    /// Elements whose boundary is exactly `b` (sorted).
    pub fn with_boundary(&self, b: &[ArcId]) -> &[usize] {
        self.by_boundary.get(b).map_or(&[], |v| v.as_slice())
    }

    pub fn with_vertices(&self, s: u64) -> &[usize] {
        self.by_vertices.get(&s).map_or(&[], |v| v.as_slice())
    }

    pub fn vertices_of(&self, i: usize) -> u64 {
        self.elems[i].vertex_mask()
    }

    pub fn vertex_elem(&self, v: VertexId) -> usize {
        self.vertex_elem[v]
    }

    pub fn edge_elem(&self, e: EdgeId) -> usize {
        self.edge_elem[e]
    }

    pub fn is_vertex_elem(&self, i: usize) -> Option<VertexId> {
        match self.elems[i] {
            EmbElement::Region { vertices, uncut: 0 } if vertices.count_ones() == 1 => {
                Some(vertices.trailing_zeros() as usize)
            }
            _ => None,
        }
    }

    /// The identity embedding; absent when the host is disconnected.
    pub fn max(&self) -> Option<usize> {
        self.max
    }

    pub fn incident(&self, v: VertexId) -> u64 {
        self.incident[v]
    }

    /// Inputs and outputs of a directed element, as edge sets.
    pub fn in_out(&self, i: usize) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let b = &self.boundary[i];
        let ins = b.iter().filter(|&&a| a % 2 == 1).map(|&a| a / 2).collect();
        let outs = b.iter().filter(|&&a| a % 2 == 0).map(|&a| a / 2).collect();
        (ins, outs)
    }

    /// `x <= y`: the embedding `x` factors through `y`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        match (self.elems[i], self.elems[j]) {
            (EmbElement::Edge(e), EmbElement::Edge(f)) => e == f,
            (EmbElement::Edge(e), EmbElement::Region { .. }) => self.touched[j] >> e & 1 == 1,
            (EmbElement::Region { .. }, EmbElement::Edge(_)) => false,
            (EmbElement::Region { vertices: s1, uncut: z1 }, EmbElement::Region { vertices: s2, uncut: z2 }) => {
                s1 & !s2 == 0 && z1 & !z2 == 0
            }
        }
    }

    /// Upper bounds of `x` and `y` whose vertices are exactly those of `x` and `y`.
    pub fn unions(&self, i: usize, j: usize) -> Vec<usize> {
        let s = self.vertices_of(i) | self.vertices_of(j);
        if s == 0 {
            return if i == j { vec![i] } else { Vec::new() };
        }
        self.with_vertices(s)
            .iter()
            .copied()
            .filter(|&k| self.leq(i, k) && self.leq(j, k))
            .collect()
    }

    pub fn is_union(&self, i: usize, j: usize, k: usize) -> bool {
        self.leq(i, k) && self.leq(j, k) && self.vertices_of(k) == self.vertices_of(i) | self.vertices_of(j)
    }

    pub fn vertex_disjoint(&self, i: usize, j: usize) -> bool {
        self.vertices_of(i) & self.vertices_of(j) == 0
    }

    /// Regions with every joining edge uncut, and edges.
    pub fn is_subgraph(&self, i: usize) -> bool {
        match self.elems[i] {
            EmbElement::Edge(_) => true,
            EmbElement::Region { vertices, uncut } => uncut == joining_edges(self.ug(), vertices),
        }
    }

    /// The full region on a vertex set, when it is connected.
    pub fn full_region(&self, s: u64) -> Option<usize> {
        self.index_of(&EmbElement::Region {
            vertices: s,
            uncut: joining_edges(self.ug(), s),
        })
    }

    /// Realizes an element as a graph with an embedding into the underlying host.
    pub fn realize(&self, i: usize) -> (UGraph, UEtale) {
        realize(self.ug(), &self.elems[i])
    }

    /// Realizes an element of a directed host as a directed graph.
    pub fn realize_directed(&self, i: usize) -> Option<(DGraph, DEtale)> {
        self.graph.directed()?;
        let (h, f) = self.realize(i);
        let lift = lift_etale(&h, &f);
        Some((lift.graph, lift.map))
    }

    /// Structured subgraphs are defined for connected acyclic directed hosts:
    /// every directed path whose first and last edges meet the element lifts
    /// uniquely to its realization.
    pub fn is_structured(&self, i: usize) -> Result<bool, EmbError> {
        let d = self.graph.directed().ok_or(EmbError::NotAcyclic)?;
        if shape(&self.graph).is_acyclic != Some(true) {
            return Err(EmbError::NotAcyclic);
        }
        let (h, f) = self.realize_directed(i).expect("directed");
        Ok(path_lifting_holds(d, &h, &f))
    }

    pub fn structured(&self) -> Result<Vec<usize>, EmbError> {
        (0..self.len())
            .filter_map(|i| match self.is_structured(i) {
                Ok(true) => Some(Ok(i)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .collect()
    }

    /// Text form: `emb {edge e}` or `emb {vertices v w; uncut e}`.
    pub fn display(&self, i: usize) -> String {
        match self.elems[i] {
            EmbElement::Edge(e) => format!("emb {{edge {}}}", self.graph.edge_name(e)),
            EmbElement::Region { vertices, uncut } => {
                let vs: Vec<&str> = bits(vertices).map(|v| self.ug().vertex_name(v)).collect();
                let zs: Vec<&str> = bits(uncut).map(|e| self.graph.edge_name(e)).collect();
                if zs.is_empty() {
                    format!("emb {{vertices {}}}", vs.join(" "))
                } else {
                    format!("emb {{vertices {}; uncut {}}}", vs.join(" "), zs.join(" "))
                }
            }
        }
    }

    pub(crate) fn search_data(&self) -> &SearchData {
        self.search.get_or_init(|| self.build_search_data())
    }

    fn build_search_data(&self) -> SearchData {
        let n = self.len();
        let mut order: Vec<usize> = (0..n)
            .filter(|&i| matches!(self.elems[i], EmbElement::Region { .. }) && self.is_vertex_elem(i).is_none())
            .collect();
        order.sort_by_key(|&i| match self.elems[i] {
            EmbElement::Region { vertices, uncut } => (vertices.count_ones(), uncut.count_ones(), i),
            EmbElement::Edge(_) => unreachable!(),
        });
        let below: Vec<Vec<usize>> = (0..n)
            .map(|z| (0..n).filter(|&x| x != z && self.leq(x, z)).collect())
            .collect();
        let covers = (0..n)
            .map(|z| {
                below[z]
                    .iter()
                    .copied()
                    .filter(|&x| !below[z].iter().any(|&w| w != x && self.leq(x, w)))
                    .collect()
            })
            .collect();
        let mut triples = vec![Vec::new(); n];
        for z in 0..n {
            let sz = self.vertices_of(z);
            if sz == 0 {
                continue;
            }
            let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
            for &x in below[z].iter().chain(std::iter::once(&z)) {
                groups.entry(self.vertices_of(x)).or_default().push(x);
            }
            let minimal: HashMap<u64, Vec<usize>> = groups
                .into_iter()
                .map(|(a, xs)| {
                    let m = xs
                        .iter()
                        .copied()
                        .filter(|&x| !xs.iter().any(|&w| w != x && self.leq(w, x)))
                        .collect();
                    (a, m)
                })
                .collect();
            let mut seen = HashSet::new();
            for (&a, xs) in &minimal {
                for (&b, ys) in &minimal {
                    if a | b != sz {
                        continue;
                    }
                    for &x in xs {
                        for &y in ys {
                            if x != z && y != z && seen.insert((x.min(y), x.max(y))) {
                                triples[z].push((x.min(y), x.max(y)));
                            }
                        }
                    }
                }
            }
        }
        let fulls: Vec<usize> = (0..n)
            .filter(|&i| matches!(self.elems[i], EmbElement::Region { .. }) && self.is_subgraph(i))
            .collect();
        let mut disjoint = Vec::new();
        for (k, &x) in fulls.iter().enumerate() {
            for &y in &fulls[k + 1..] {
                if self.vertex_disjoint(x, y) {
                    disjoint.push((x, y));
                }
            }
        }
        SearchData {
            order,
            covers,
            triples,
            disjoint,
        }
    }
}

fn region_boundary(g: &UGraph, x: &EmbElement) -> Vec<ArcId> {
    let mut b = match *x {
        EmbElement::Edge(e) => vec![2 * e, 2 * e + 1],
        EmbElement::Region { vertices, uncut } => {
            let mut b = Vec::new();
            for v in bits(vertices) {
                for &a in g.nbhd(v) {
                    if uncut >> edge_of(a) & 1 == 0 {
                        b.push(partner(a));
                    }
                }
            }
            b
        }
    };
    b.sort_unstable();
    b
}

/// Builds the domain of an element and its embedding. Arcs keep the host's
/// names; a loose partner added for a cut or outgoing edge is named after
/// the host arc it maps to, prefixed with `~`.
pub fn realize(g: &UGraph, x: &EmbElement) -> (UGraph, UEtale) {
    match *x {
        EmbElement::Edge(e) => {
            let h = UGraph::new(
                g.name(),
                vec![g.arc_name(2 * e).into(), g.arc_name(2 * e + 1).into()],
                Vec::new(),
                Vec::new(),
            )
            .expect("edge");
            (
                h,
                UEtale {
                    arcs: vec![2 * e, 2 * e + 1],
                    vertices: Vec::new(),
                },
            )
        }
        EmbElement::Region { vertices, uncut } => {
            let vs: Vec<VertexId> = bits(vertices).collect();
            let mut names = Vec::new();
            let mut arcs = Vec::new();
            let mut local: HashMap<ArcId, ArcId> = HashMap::new();
            for &v in &vs {
                for &a in g.nbhd(v) {
                    if local.contains_key(&a) {
                        continue;
                    }
                    let k = names.len();
                    if uncut >> edge_of(a) & 1 == 1 {
                        names.push(g.arc_name(a).to_string());
                        names.push(g.arc_name(partner(a)).to_string());
                        arcs.extend([a, partner(a)]);
                        local.insert(a, k);
                        local.insert(partner(a), k + 1);
                    } else {
                        names.push(format!("~{}", g.arc_name(partner(a))));
                        names.push(g.arc_name(a).to_string());
                        arcs.extend([partner(a), a]);
                        local.insert(a, k + 1);
                    }
                }
            }
            let nbhd = vs
                .iter()
                .map(|&v| g.nbhd(v).iter().map(|a| local[a]).collect())
                .collect();
            let h = UGraph::new(
                g.name(),
                names,
                vs.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
                nbhd,
            )
            .expect("realization");
            (h, UEtale { arcs, vertices: vs })
        }
    }
}

fn path_lifting_holds(g: &DGraph, h: &DGraph, f: &DEtale) -> bool {
    let mut pre = vec![Vec::new(); g.num_edges()];
    for (k, &e) in f.edges.iter().enumerate() {
        pre[e].push(k);
    }
    fn walk(g: &DGraph, h: &DGraph, f: &DEtale, pre: &[Vec<EdgeId>], e: EdgeId, lift: Option<EdgeId>) -> bool {
        let p = &pre[e];
        if !p.is_empty() && !(p.len() == 1 && lift == Some(p[0])) {
            return false;
        }
        let Some(v) = g.head(e) else { return true };
        g.outs(v).iter().all(|&next| {
            let l = lift
                .and_then(|k| h.head(k))
                .and_then(|w| h.outs(w).iter().copied().find(|&k2| f.edges[k2] == next));
            walk(g, h, f, pre, next, l)
        })
    }
    (0..h.num_edges()).all(|k| walk(g, h, f, &pre, f.edges[k], Some(k)))
}
