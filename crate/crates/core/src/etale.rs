//! Étale maps: arc and vertex functions that commute with the involution and
//! with attachment, and restrict to a bijection on every neighborhood.

use crate::graph::{partner, shape, ArcId, DGraph, EdgeId, Graph, UGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EtaleError {
    #[error("map tables have the wrong length or point out of range")]
    BadTables,
    #[error("arc map does not commute with the involution at `{0}`")]
    NotInvolutive(String),
    #[error("map does not commute with attachment at `{0}`")]
    NotCommuting(String),
    #[error("neighborhood of vertex `{0}` is not mapped bijectively")]
    NotPullback(String),
    #[error("map is not an embedding")]
    NotEmbedding,
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
}

/// Étale map of undirected graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UEtale {
    pub arcs: Vec<ArcId>,
    pub vertices: Vec<VertexId>,
}

/// Étale map of directed graphs; inputs and outputs map along with edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DEtale {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
}

impl UEtale {
    /// The restriction of the arc map to dangling arcs.
    pub fn dangling_map(&self, src: &UGraph) -> Vec<(ArcId, ArcId)> {
        (0..src.num_arcs())
            .filter(|&a| src.is_dangling(a))
            .map(|a| (a, self.arcs[a]))
            .collect()
    }

    pub fn compose(&self, then: &UEtale) -> UEtale {
        UEtale {
            arcs: self.arcs.iter().map(|&a| then.arcs[a]).collect(),
            vertices: self.vertices.iter().map(|&v| then.vertices[v]).collect(),
        }
    }
}

impl DEtale {
    pub fn compose(&self, then: &DEtale) -> DEtale {
        DEtale {
            edges: self.edges.iter().map(|&e| then.edges[e]).collect(),
            vertices: self.vertices.iter().map(|&v| then.vertices[v]).collect(),
        }
    }

    /// The same map on underlying graphs.
    pub fn underlying(&self) -> UEtale {
        UEtale {
            arcs: self.edges.iter().flat_map(|&e| [2 * e, 2 * e + 1]).collect(),
            vertices: self.vertices.clone(),
        }
    }
}

pub fn validate_u(src: &UGraph, tgt: &UGraph, f: &UEtale) -> Result<(), EtaleError> {
    if f.arcs.len() != src.num_arcs()
        || f.vertices.len() != src.num_vertices()
        || f.arcs.iter().any(|&a| a >= tgt.num_arcs())
        || f.vertices.iter().any(|&v| v >= tgt.num_vertices())
    {
        return Err(EtaleError::BadTables);
    }
    for a in 0..src.num_arcs() {
        if f.arcs[partner(a)] != partner(f.arcs[a]) {
            return Err(EtaleError::NotInvolutive(src.arc_name(a).into()));
        }
        if let Some(v) = src.tangent(a) {
            if tgt.tangent(f.arcs[a]) != Some(f.vertices[v]) {
                return Err(EtaleError::NotCommuting(src.arc_name(a).into()));
            }
        }
    }
    for v in 0..src.num_vertices() {
        let mut img: Vec<ArcId> = src.nbhd(v).iter().map(|&a| f.arcs[a]).collect();
        img.sort_unstable();
        let mut want = tgt.nbhd(f.vertices[v]).to_vec();
        want.sort_unstable();
        if img != want {
            return Err(EtaleError::NotPullback(src.vertex_name(v).into()));
        }
    }
    Ok(())
}

pub fn validate_d(src: &DGraph, tgt: &DGraph, f: &DEtale) -> Result<(), EtaleError> {
    if f.edges.len() != src.num_edges()
        || f.vertices.len() != src.num_vertices()
        || f.edges.iter().any(|&e| e >= tgt.num_edges())
        || f.vertices.iter().any(|&v| v >= tgt.num_vertices())
    {
        return Err(EtaleError::BadTables);
    }
    for e in 0..src.num_edges() {
        if let Some(v) = src.head(e) {
            if tgt.head(f.edges[e]) != Some(f.vertices[v]) {
                return Err(EtaleError::NotCommuting(src.edge_name(e).into()));
            }
        }
        if let Some(v) = src.tail(e) {
            if tgt.tail(f.edges[e]) != Some(f.vertices[v]) {
                return Err(EtaleError::NotCommuting(src.edge_name(e).into()));
            }
        }
    }
    for v in 0..src.num_vertices() {
        let w = f.vertices[v];
        let same = |a: &[EdgeId], b: &[EdgeId]| {
            let mut x: Vec<_> = a.iter().map(|&e| f.edges[e]).collect();
            let mut y = b.to_vec();
            x.sort_unstable();
            y.sort_unstable();
            x == y
        };
        if !same(src.ins(v), tgt.ins(w)) || !same(src.outs(v), tgt.outs(w)) {
            return Err(EtaleError::NotPullback(src.vertex_name(v).into()));
        }
    }
    Ok(())
}

fn injective(xs: &[usize]) -> bool {
    let mut s = xs.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// An étale map between connected graphs that is injective on vertices.
pub fn is_embedding_u(src: &UGraph, tgt: &UGraph, f: &UEtale) -> bool {
    validate_u(src, tgt, f).is_ok()
        && shape(&Graph::U(src.clone())).is_connected
        && shape(&Graph::U(tgt.clone())).is_connected
        && injective(&f.vertices)
}

pub fn is_embedding_d(src: &DGraph, tgt: &DGraph, f: &DEtale) -> bool {
    validate_d(src, tgt, f).is_ok()
        && shape(&Graph::D(src.clone())).is_connected
        && shape(&Graph::D(tgt.clone())).is_connected
        && injective(&f.vertices)
}

const UNSET: usize = usize::MAX;

fn vertex_order(nv: usize, links: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut seen = vec![false; nv];
    let mut order = Vec::with_capacity(nv);
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in links(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct USearch<'a> {
    src: &'a UGraph,
    tgt: &'a UGraph,
    order: Vec<VertexId>,
    floating: Vec<EdgeId>,
    arcs: Vec<ArcId>,
    verts: Vec<VertexId>,
    nodes: u64,
    budget: u64,
    out: Vec<UEtale>,
}

impl USearch<'_> {
    fn tick(&mut self) -> Result<(), EtaleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(EtaleError::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn vertex(&mut self, k: usize) -> Result<(), EtaleError> {
        if k == self.order.len() {
            return self.float(0);
        }
        let v = self.order[k];
        for w in 0..self.tgt.num_vertices() {
            if self.tgt.arity(w) == self.src.arity(v) {
                self.verts[v] = w;
                self.bij(k, v, w, 0, 0)?;
            }
        }
        self.verts[v] = UNSET;
        Ok(())
    }

    fn bij(&mut self, k: usize, v: VertexId, w: VertexId, i: usize, used: u64) -> Result<(), EtaleError> {
        self.tick()?;
        let nb = self.src.nbhd(v);
        if i == nb.len() {
            return self.vertex(k + 1);
        }
        let d = nb[i];
        let forced = self.arcs[d];
        for (j, &img) in self.tgt.nbhd(w).iter().enumerate() {
            if used >> j & 1 == 1 || (forced != UNSET && forced != img) {
                continue;
            }
            let saved = (self.arcs[d], self.arcs[partner(d)]);
            if saved.1 != UNSET && saved.1 != partner(img) {
                continue;
            }
            self.arcs[d] = img;
            self.arcs[partner(d)] = partner(img);
            self.bij(k, v, w, i + 1, used | 1 << j)?;
            self.arcs[d] = saved.0;
            self.arcs[partner(d)] = saved.1;
        }
        Ok(())
    }

    fn float(&mut self, k: usize) -> Result<(), EtaleError> {
        if k == self.floating.len() {
            self.out.push(UEtale {
                arcs: self.arcs.clone(),
                vertices: self.verts.clone(),
            });
            return Ok(());
        }
        let e = self.floating[k];
        for t in 0..self.tgt.num_arcs() {
            self.tick()?;
            self.arcs[2 * e] = t;
            self.arcs[2 * e + 1] = partner(t);
            self.float(k + 1)?;
        }
        Ok(())
    }
}

/// All étale maps `src -> tgt`. Vertex images are chosen first, then a
/// bijection of each neighborhood consistent with arcs already fixed.
pub fn enumerate_u(src: &UGraph, tgt: &UGraph, budget: u64) -> Result<Vec<UEtale>, EtaleError> {
    let order = vertex_order(src.num_vertices(), |v| {
        src.nbhd(v).iter().filter_map(|&a| src.tangent(partner(a))).collect()
    });
    let mut s = USearch {
        src,
        tgt,
        order,
        floating: (0..src.num_edges()).filter(|&e| src.is_floating(e)).collect(),
        arcs: vec![UNSET; src.num_arcs()],
        verts: vec![UNSET; src.num_vertices()],
        nodes: 0,
        budget,
        out: Vec::new(),
    };
    s.vertex(0)?;
    Ok(s.out)
}

struct DSearch<'a> {
    src: &'a DGraph,
    tgt: &'a DGraph,
    order: Vec<VertexId>,
    floating: Vec<EdgeId>,
    edges: Vec<EdgeId>,
    verts: Vec<VertexId>,
    nodes: u64,
    budget: u64,
    out: Vec<DEtale>,
}

impl DSearch<'_> {
    fn vertex(&mut self, k: usize) -> Result<(), EtaleError> {
        if k == self.order.len() {
            return self.float(0);
        }
        let v = self.order[k];
        let (ni, no) = (self.src.ins(v).len(), self.src.outs(v).len());
        for w in 0..self.tgt.num_vertices() {
            if self.tgt.ins(w).len() == ni && self.tgt.outs(w).len() == no {
                self.verts[v] = w;
                self.bij(k, v, w, 0, 0)?;
            }
        }
        self.verts[v] = UNSET;
        Ok(())
    }

    /// Slots `0..ni` are inputs, the rest outputs.
    fn bij(&mut self, k: usize, v: VertexId, w: VertexId, i: usize, used: u64) -> Result<(), EtaleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(EtaleError::SearchBudgetExceeded(self.budget));
        }
        let ni = self.src.ins(v).len();
        let total = ni + self.src.outs(v).len();
        if i == total {
            return self.vertex(k + 1);
        }
        let (d, slots, base) = if i < ni {
            (self.src.ins(v)[i], self.tgt.ins(w), 0)
        } else {
            (self.src.outs(v)[i - ni], self.tgt.outs(w), ni)
        };
        let forced = self.edges[d];
        for (j, &img) in slots.iter().enumerate() {
            if used >> (base + j) & 1 == 1 || (forced != UNSET && forced != img) {
                continue;
            }
            self.edges[d] = img;
            self.bij(k, v, w, i + 1, used | 1 << (base + j))?;
            self.edges[d] = forced;
        }
        Ok(())
    }

    fn float(&mut self, k: usize) -> Result<(), EtaleError> {
        if k == self.floating.len() {
            self.out.push(DEtale {
                edges: self.edges.clone(),
                vertices: self.verts.clone(),
            });
            return Ok(());
        }
        let e = self.floating[k];
        for t in 0..self.tgt.num_edges() {
            self.edges[e] = t;
            self.float(k + 1)?;
        }
        Ok(())
    }
}

pub fn enumerate_d(src: &DGraph, tgt: &DGraph, budget: u64) -> Result<Vec<DEtale>, EtaleError> {
    let order = vertex_order(src.num_vertices(), |v| {
        let mut ws = Vec::new();
        for &e in src.ins(v) {
            ws.extend(src.tail(e));
        }
        for &e in src.outs(v) {
            ws.extend(src.head(e));
        }
        ws
    });
    let mut s = DSearch {
        src,
        tgt,
        order,
        floating: (0..src.num_edges())
            .filter(|&e| src.head(e).is_none() && src.tail(e).is_none())
            .collect(),
        edges: vec![UNSET; src.num_edges()],
        verts: vec![UNSET; src.num_vertices()],
        nodes: 0,
        budget,
        out: Vec::new(),
    };
    s.vertex(0)?;
    Ok(s.out)
}

/// The directed structure pulled back along an embedding into an
/// underlying graph.
#[derive(Clone, Debug)]
pub struct Lift {
    pub graph: DGraph,
    /// The lifted map into the directed target.
    pub map: DEtale,
    /// `underlying(graph) -> src`, on arcs.
    pub iso: Vec<ArcId>,
}

pub fn lift_embedding_directed(src: &UGraph, tgt: &DGraph, f: &UEtale) -> Result<Lift, EtaleError> {
    if !is_embedding_u(src, tgt.underlying(), f) {
        return Err(EtaleError::NotEmbedding);
    }
    Ok(lift_etale(src, f))
}

/// Lifting for any étale map; inputs are the dangling arcs landing on `+` arcs.
pub(crate) fn lift_etale(src: &UGraph, f: &UEtale) -> Lift {
    let nv = src.num_vertices();
    let mut ins = vec![Vec::new(); nv];
    let mut outs = vec![Vec::new(); nv];
    for v in 0..nv {
        for &a in src.nbhd(v) {
            if f.arcs[a].is_multiple_of(2) {
                ins[v].push(a / 2);
            } else {
                outs[v].push(a / 2);
            }
        }
    }
    let graph = DGraph::new(
        src.name(),
        (0..src.num_edges()).map(|e| src.arc_name(2 * e).to_string()).collect(),
        src.vertex_names().to_vec(),
        ins,
        outs,
    )
    .expect("pulled back structure is valid");
    let map = DEtale {
        edges: (0..src.num_edges()).map(|e| f.arcs[2 * e] / 2).collect(),
        vertices: f.vertices.clone(),
    };
    let iso = (0..src.num_edges())
        .flat_map(|e| {
            if f.arcs[2 * e].is_multiple_of(2) {
                [2 * e, 2 * e + 1]
            } else {
                [2 * e + 1, 2 * e]
            }
        })
        .collect();
    Lift { graph, map, iso }
}
