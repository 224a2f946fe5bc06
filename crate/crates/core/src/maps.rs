//! Graph maps: an involutive arc function together with a function on
//! embedding posets that sends edges to edges, preserves unions and
//! vertex-disjoint pairs, and is compatible with boundaries.

use std::sync::Arc;

use crate::emb::{EmbElement, EmbError, Host};
use crate::etale::UEtale;
use crate::graph::{partner, shape, ArcId, EdgeId, Graph, VertexId};
use crate::util::bits;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("map tables have the wrong length or point out of range")]
    BadTables,
    #[error("source and target differ in directedness")]
    KindMismatch,
    #[error("arc map is not involutive at `{0}`")]
    NotInvolutive(String),
    #[error("edge map does not preserve direction at `{0}`")]
    DirectionNotPreserved(String),
    #[error("edge `{0}` is not sent to an edge")]
    EdgeNotToEdge(String),
    #[error("union not preserved: {0} of {1} and {2}")]
    UnionNotPreserved(String, String, String),
    #[error("vertex-disjoint pair not preserved: {0} and {1}")]
    DisjointnessNotPreserved(String, String),
    #[error("boundary mismatch at {0}")]
    BoundaryMismatch(String),
    #[error("maps are not composable")]
    NotComposable,
    #[error("graph is not a tree")]
    NotTree,
    #[error("no unique union while extending at {0}")]
    NoUnion(String),
    #[error("source graph is not connected")]
    Disconnected,
    #[error("no factorization found")]
    NoFactorization,
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error(transparent)]
    Emb(#[from] EmbError),
}

/// A graph map. `phi0` is given on underlying arcs; for directed graphs it
/// sends `e+` to `f+` and `e-` to `f-`. `phi_hat` indexes target elements.
#[derive(Clone, Debug)]
pub struct GraphMap {
    pub source: Arc<Host>,
    pub target: Arc<Host>,
    pub phi0: Vec<ArcId>,
    pub phi_hat: Vec<usize>,
}

impl PartialEq for GraphMap {
    fn eq(&self, other: &Self) -> bool {
        self.phi0 == other.phi0
            && self.phi_hat == other.phi_hat
            && same_host(&self.source, &other.source)
            && same_host(&self.target, &other.target)
    }
}

impl Eq for GraphMap {}

pub fn same_host(a: &Arc<Host>, b: &Arc<Host>) -> bool {
    Arc::ptr_eq(a, b) || a.graph() == b.graph()
}

/// Hashable table data of a map.
pub type MapKey = (Vec<ArcId>, Vec<usize>);

impl GraphMap {
    pub fn identity(h: &Arc<Host>) -> GraphMap {
        GraphMap {
            source: h.clone(),
            target: h.clone(),
            phi0: (0..h.ug().num_arcs()).collect(),
            phi_hat: (0..h.len()).collect(),
        }
    }

    pub fn key(&self) -> MapKey {
        (self.phi0.clone(), self.phi_hat.clone())
    }

    /// The edge function of a directed map.
    pub fn edge_map(&self) -> Vec<EdgeId> {
        (0..self.phi0.len() / 2).map(|e| self.phi0[2 * e] / 2).collect()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &GraphMap) -> Result<GraphMap, MapError> {
        if !same_host(&self.target, &then.source) {
            return Err(MapError::NotComposable);
        }
        Ok(GraphMap {
            source: self.source.clone(),
            target: then.target.clone(),
            phi0: self.phi0.iter().map(|&a| then.phi0[a]).collect(),
            phi_hat: self.phi_hat.iter().map(|&x| then.phi_hat[x]).collect(),
        })
    }

    pub fn is_active(&self) -> bool {
        match (self.source.max(), self.target.max()) {
            (Some(s), Some(t)) => self.phi_hat[s] == t,
            _ => false,
        }
    }

    pub fn is_inert(&self) -> bool {
        (0..self.source.ug().num_vertices())
            .all(|v| self.target.is_vertex_elem(self.phi_hat[self.source.vertex_elem(v)]).is_some())
    }

    /// `w ↦ v` when `w` lies in the image of the star of `v`; `None` is the basepoint.
    pub fn vertex_functor(&self) -> Vec<Option<VertexId>> {
        let mut out = vec![None; self.target.ug().num_vertices()];
        for v in 0..self.source.ug().num_vertices() {
            for w in bits(self.target.vertices_of(self.phi_hat[self.source.vertex_elem(v)])) {
                out[w] = Some(v);
            }
        }
        out
    }

    /// `(phi0, phi_hat restricted to vertices)`.
    pub fn restrict(&self) -> (Vec<ArcId>, Vec<usize>) {
        let nv = self.source.ug().num_vertices();
        (
            self.phi0.clone(),
            (0..nv).map(|v| self.phi_hat[self.source.vertex_elem(v)]).collect(),
        )
    }

    pub fn validate(&self) -> Result<(), MapError> {
        validate(self)
    }

    pub fn describe(&self) -> String {
        crate::text::write_map(self, "f", None)
    }
}

fn check_phi0(src: &Host, tgt: &Host, phi0: &[ArcId]) -> Result<(), MapError> {
    let (s, t) = (src.ug(), tgt.ug());
    if src.graph().is_directed() != tgt.graph().is_directed() {
        return Err(MapError::KindMismatch);
    }
    if phi0.len() != s.num_arcs() || phi0.iter().any(|&b| b >= t.num_arcs()) {
        return Err(MapError::BadTables);
    }
    for a in 0..s.num_arcs() {
        if phi0[partner(a)] != partner(phi0[a]) {
            return Err(MapError::NotInvolutive(s.arc_name(a).into()));
        }
        if src.graph().is_directed() && phi0[a] % 2 != a % 2 {
            return Err(MapError::DirectionNotPreserved(src.graph().edge_name(a / 2).into()));
        }
    }
    Ok(())
}

fn sorted_image(phi0: &[ArcId], arcs: &[ArcId]) -> Vec<ArcId> {
    let mut v: Vec<ArcId> = arcs.iter().map(|&a| phi0[a]).collect();
    v.sort_unstable();
    v
}

/// Checks every condition literally, over all pairs of elements.
pub fn validate(m: &GraphMap) -> Result<(), MapError> {
    let (src, tgt) = (&*m.source, &*m.target);
    check_phi0(src, tgt, &m.phi0)?;
    if m.phi_hat.len() != src.len() || m.phi_hat.iter().any(|&y| y >= tgt.len()) {
        return Err(MapError::BadTables);
    }
    let n = src.len();
    for x in 0..n {
        if let EmbElement::Edge(e) = src.elem(x) {
            if tgt.elem(m.phi_hat[x]) != EmbElement::Edge(m.phi0[2 * e] / 2) {
                return Err(MapError::EdgeNotToEdge(src.display(x)));
            }
        }
    }
    for x in 0..n {
        let y = m.phi_hat[x];
        let ok = match src.graph() {
            Graph::D(_) => {
                // Inputs and outputs separately, along the edge function.
                let em = m.edge_map();
                let (si, so) = src.in_out(x);
                let (ti, to) = tgt.in_out(y);
                let img = |es: &[EdgeId]| {
                    let mut v: Vec<EdgeId> = es.iter().map(|&e| em[e]).collect();
                    v.sort_unstable();
                    v
                };
                img(&si) == ti && img(&so) == to
            }
            Graph::U(_) => sorted_image(&m.phi0, src.boundary(x)) == tgt.boundary(y),
        };
        if !ok {
            return Err(MapError::BoundaryMismatch(src.display(x)));
        }
    }
    for x in 0..n {
        for z in x..n {
            if src.vertex_disjoint(x, z) && !tgt.vertex_disjoint(m.phi_hat[x], m.phi_hat[z]) {
                return Err(MapError::DisjointnessNotPreserved(src.display(x), src.display(z)));
            }
        }
    }
    for x in 0..n {
        for y in x..n {
            for z in src.unions(x, y) {
                if !tgt.is_union(m.phi_hat[x], m.phi_hat[y], m.phi_hat[z]) {
                    return Err(MapError::UnionNotPreserved(src.display(z), src.display(x), src.display(y)));
                }
            }
        }
    }
    Ok(())
}

/// Optional restrictions on the images of arcs and elements.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    pub arcs: Option<Vec<Vec<bool>>>,
    pub elems: Option<Vec<Vec<bool>>>,
}

impl Constraints {
    fn arc_ok(&self, a: ArcId, b: ArcId) -> bool {
        self.arcs.as_ref().is_none_or(|m| m[a][b])
    }

    fn elem_ok(&self, x: usize, y: usize) -> bool {
        self.elems.as_ref().is_none_or(|m| m[x][y])
    }
}

const UNSET: usize = usize::MAX;

struct MapSearch<'a> {
    src: &'a Host,
    tgt: &'a Host,
    directed: bool,
    cons: &'a Constraints,
    vorder: Vec<VertexId>,
    by_arity: std::collections::HashMap<(usize, usize), Vec<usize>>,
    disjoint_of: Vec<Vec<usize>>,
    phi0: Vec<ArcId>,
    hat: Vec<usize>,
    nodes: u64,
    budget: u64,
    stop: bool,
    visit: &'a mut dyn FnMut(&[ArcId], &[usize]) -> bool,
}

impl MapSearch<'_> {
    fn tick(&mut self) -> Result<(), MapError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(MapError::SearchBudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn arity_key(&self, host: &Host, x: usize) -> (usize, usize) {
        if self.directed {
            let (i, o) = host.in_out(x);
            (i.len(), o.len())
        } else {
            (host.boundary(x).len(), 0)
        }
    }

    fn vertex(&mut self, k: usize) -> Result<(), MapError> {
        if self.stop {
            return Ok(());
        }
        if k == self.vorder.len() {
            return self.floating(0);
        }
        let v = self.vorder[k];
        let xv = self.src.vertex_elem(v);
        let key = self.arity_key(self.src, xv);
        let cands = self.by_arity.get(&key).cloned().unwrap_or_default();
        for y in cands {
            if !self.cons.elem_ok(xv, y) {
                continue;
            }
            let wy = self.tgt.vertices_of(y);
            if self.vorder[..k]
                .iter()
                .any(|&u| self.tgt.vertices_of(self.hat[self.src.vertex_elem(u)]) & wy != 0)
            {
                continue;
            }
            self.hat[xv] = y;
            if self.directed {
                let d = self.src.graph().directed().unwrap();
                let mut slots: Vec<ArcId> = d.ins(v).iter().map(|&e| 2 * e).collect();
                slots.extend(d.outs(v).iter().map(|&e| 2 * e));
                let (ti, to) = self.tgt.in_out(y);
                let ni = d.ins(v).len();
                let targets: Vec<ArcId> = ti.iter().chain(to.iter()).map(|&e| 2 * e).collect();
                self.bij(k, &slots, &targets, ni, 0, 0)?;
            } else {
                let slots: Vec<ArcId> = self.src.ug().nbhd(v).iter().map(|&a| partner(a)).collect();
                let targets = self.tgt.boundary(y).to_vec();
                let n = slots.len();
                self.bij(k, &slots, &targets, n, 0, 0)?;
            }
        }
        self.hat[xv] = UNSET;
        Ok(())
    }

    /// Bijects `slots` onto `targets`; the first `split` of each side only
    /// match among themselves (inputs), the rest likewise (outputs).
    fn bij(&mut self, k: usize, slots: &[ArcId], targets: &[ArcId], split: usize, i: usize, used: u64) -> Result<(), MapError> {
        self.tick()?;
        if self.stop {
            return Ok(());
        }
        if i == slots.len() {
            return self.vertex(k + 1);
        }
        let b = slots[i];
        let range = if i < split { 0..split } else { split..targets.len() };
        for j in range {
            if used >> j & 1 == 1 {
                continue;
            }
            let t = targets[j];
            let cur = self.phi0[b];
            if cur != UNSET {
                if cur != t {
                    continue;
                }
                self.bij(k, slots, targets, split, i + 1, used | 1 << j)?;
                continue;
            }
            if !self.cons.arc_ok(b, t) || !self.cons.arc_ok(partner(b), partner(t)) {
                continue;
            }
            self.phi0[b] = t;
            self.phi0[partner(b)] = partner(t);
            self.bij(k, slots, targets, split, i + 1, used | 1 << j)?;
            self.phi0[b] = UNSET;
            self.phi0[partner(b)] = UNSET;
        }
        Ok(())
    }

    fn floating(&mut self, k: usize) -> Result<(), MapError> {
        let e = (k..self.src.ug().num_edges()).find(|&e| self.phi0[2 * e] == UNSET);
        let Some(e) = e else { return self.edges() };
        let step = if self.directed { 2 } else { 1 };
        for t in (0..self.tgt.ug().num_arcs()).step_by(step) {
            self.tick()?;
            if self.stop {
                return Ok(());
            }
            if !self.cons.arc_ok(2 * e, t) || !self.cons.arc_ok(2 * e + 1, partner(t)) {
                continue;
            }
            self.phi0[2 * e] = t;
            self.phi0[2 * e + 1] = partner(t);
            self.floating(e + 1)?;
            self.phi0[2 * e] = UNSET;
            self.phi0[2 * e + 1] = UNSET;
        }
        Ok(())
    }

    fn edges(&mut self) -> Result<(), MapError> {
        let ne = self.src.ug().num_edges();
        for e in 0..ne {
            let x = self.src.edge_elem(e);
            let y = self.tgt.edge_elem(self.phi0[2 * e] / 2);
            if !self.cons.elem_ok(x, y) {
                return Ok(());
            }
            self.hat[x] = y;
        }
        let sd = self.src.search_data();
        for v in 0..self.src.ug().num_vertices() {
            let z = self.src.vertex_elem(v);
            if sd.covers[z].iter().any(|&x| !self.tgt.leq(self.hat[x], self.hat[z])) {
                return Ok(());
            }
        }
        self.rest(0)
    }

    fn rest(&mut self, r: usize) -> Result<(), MapError> {
        self.tick()?;
        if self.stop {
            return Ok(());
        }
        let sd = self.src.search_data();
        if r == sd.order.len() {
            if !(self.visit)(&self.phi0, &self.hat) {
                self.stop = true;
            }
            return Ok(());
        }
        let x = sd.order[r];
        let img = sorted_image(&self.phi0, self.src.boundary(x));
        if img.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let cands = self.tgt.with_boundary(&img).to_vec();
        for c in cands {
            if !self.cons.elem_ok(x, c) {
                continue;
            }
            if sd.covers[x].iter().any(|&p| !self.tgt.leq(self.hat[p], c)) {
                continue;
            }
            let wc = self.tgt.vertices_of(c);
            if sd.triples[x]
                .iter()
                .any(|&(p, q)| self.tgt.vertices_of(self.hat[p]) | self.tgt.vertices_of(self.hat[q]) != wc)
            {
                continue;
            }
            if self.disjoint_of[x]
                .iter()
                .any(|&o| self.hat[o] != UNSET && self.tgt.vertices_of(self.hat[o]) & wc != 0)
            {
                continue;
            }
            self.hat[x] = c;
            self.rest(r + 1)?;
            self.hat[x] = UNSET;
        }
        Ok(())
    }
}

/// Runs the constrained search, calling `visit` with `(phi0, phi_hat)` for
/// every graph map; `visit` returns false to stop.
pub fn search(
    src: &Host,
    tgt: &Host,
    cons: &Constraints,
    budget: u64,
    visit: &mut dyn FnMut(&[ArcId], &[usize]) -> bool,
) -> Result<(), MapError> {
    let directed = src.graph().is_directed();
    if directed != tgt.graph().is_directed() {
        return Err(MapError::KindMismatch);
    }
    let g = src.ug();
    let mut seen = vec![false; g.num_vertices()];
    let mut vorder = Vec::new();
    for s in 0..g.num_vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            vorder.push(v);
            for &a in g.nbhd(v) {
                if let Some(w) = g.tangent(partner(a)) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut s = MapSearch {
        src,
        tgt,
        directed,
        cons,
        vorder,
        by_arity: Default::default(),
        disjoint_of: vec![Vec::new(); src.len()],
        phi0: vec![UNSET; g.num_arcs()],
        hat: vec![UNSET; src.len()],
        nodes: 0,
        budget,
        stop: false,
        visit,
    };
    for y in 0..tgt.len() {
        let key = s.arity_key(tgt, y);
        s.by_arity.entry(key).or_default().push(y);
    }
    for &(x, y) in &src.search_data().disjoint {
        s.disjoint_of[x].push(y);
        s.disjoint_of[y].push(x);
    }
    s.vertex(0)
}

/// All graph maps `src -> tgt`.
pub fn enumerate_graph_maps(src: &Arc<Host>, tgt: &Arc<Host>, budget: u64) -> Result<Vec<GraphMap>, MapError> {
    let mut out = Vec::new();
    search(src, tgt, &Constraints::default(), budget, &mut |p, h| {
        out.push(GraphMap {
            source: src.clone(),
            target: tgt.clone(),
            phi0: p.to_vec(),
            phi_hat: h.to_vec(),
        });
        true
    })?;
    Ok(out)
}

/// Image of an element under postcomposition with an embedding.
pub fn push_forward(src: &Host, tgt: &Host, f: &UEtale, x: usize) -> usize {
    let y = match src.elem(x) {
        EmbElement::Edge(e) => EmbElement::Edge(f.arcs[2 * e] / 2),
        EmbElement::Region { vertices, uncut } => EmbElement::Region {
            vertices: bits(vertices).fold(0, |m, v| m | 1 << f.vertices[v]),
            uncut: bits(uncut).fold(0, |m, e| m | 1 << (f.arcs[2 * e] / 2)),
        },
    };
    tgt.index_of(&y).expect("embedding pushes elements forward")
}

/// The inert map realizing an element of `tgt`.
pub fn inert_for(tgt: &Arc<Host>, y: usize) -> Result<GraphMap, MapError> {
    let (mid, arcs, vertices) = match tgt.graph() {
        Graph::D(_) => {
            let (h, f) = tgt.realize_directed(y).expect("directed");
            let u = f.underlying();
            (Host::new(h)?, u.arcs, u.vertices)
        }
        Graph::U(_) => {
            let (h, f) = tgt.realize(y);
            (Host::new(h)?, f.arcs, f.vertices)
        }
    };
    let f = UEtale { arcs, vertices };
    let phi_hat = (0..mid.len()).map(|w| push_forward(&mid, tgt, &f, w)).collect();
    Ok(GraphMap {
        source: Arc::new(mid),
        target: tgt.clone(),
        phi0: f.arcs,
        phi_hat,
    })
}

/// An active map followed by an inert map.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub active: GraphMap,
    pub inert: GraphMap,
}

/// Factors `m` through the realization of the image of the identity.
pub fn factorize(m: &GraphMap) -> Result<Factorization, MapError> {
    let top = m.source.max().ok_or(MapError::Disconnected)?;
    let inert = inert_for(&m.target, m.phi_hat[top])?;
    let active = lift_through(m, &inert)?.ok_or(MapError::NoFactorization)?;
    Ok(Factorization { active, inert })
}

/// Some map `a` with `inert ∘ a = m`, searching only over such maps.
pub fn lift_through(m: &GraphMap, inert: &GraphMap) -> Result<Option<GraphMap>, MapError> {
    let src = &m.source;
    let mid = &inert.source;
    let arcs = (0..src.ug().num_arcs())
        .map(|a| (0..mid.ug().num_arcs()).map(|h| inert.phi0[h] == m.phi0[a]).collect())
        .collect();
    let elems = (0..src.len())
        .map(|x| (0..mid.len()).map(|w| inert.phi_hat[w] == m.phi_hat[x]).collect())
        .collect();
    let cons = Constraints {
        arcs: Some(arcs),
        elems: Some(elems),
    };
    let mut found = None;
    search(src, mid, &cons, DEFAULT_BUDGET, &mut |p, h| {
        found = Some(GraphMap {
            source: src.clone(),
            target: mid.clone(),
            phi0: p.to_vec(),
            phi_hat: h.to_vec(),
        });
        false
    })?;
    Ok(found)
}

/// Extends `(phi0, phi1)` on a tree to a full map, building the image of
/// each subtree from a smaller subtree and a leaf star.
pub fn extend_tree_map(src: &Arc<Host>, tgt: &Arc<Host>, phi0: &[ArcId], phi1: &[usize]) -> Result<GraphMap, MapError> {
    if !shape(src.graph()).is_tree || !shape(tgt.graph()).is_tree {
        return Err(MapError::NotTree);
    }
    check_phi0(src, tgt, phi0)?;
    let g = src.ug();
    if phi1.len() != g.num_vertices() || phi1.iter().any(|&y| y >= tgt.len()) {
        return Err(MapError::BadTables);
    }
    for v in 0..g.num_vertices() {
        let x = src.vertex_elem(v);
        if sorted_image(phi0, src.boundary(x)) != tgt.boundary(phi1[v]) {
            return Err(MapError::BoundaryMismatch(src.display(x)));
        }
    }
    let mut hat = vec![UNSET; src.len()];
    let mut regions: Vec<usize> = Vec::new();
    for x in 0..src.len() {
        match src.elem(x) {
            EmbElement::Edge(e) => hat[x] = tgt.edge_elem(phi0[2 * e] / 2),
            EmbElement::Region { .. } => regions.push(x),
        }
    }
    regions.sort_by_key(|&x| src.vertices_of(x).count_ones());
    for x in regions {
        let s = src.vertices_of(x);
        if s.count_ones() == 1 {
            hat[x] = phi1[s.trailing_zeros() as usize];
            continue;
        }
        let leaf = bits(s)
            .find(|&v| {
                g.nbhd(v)
                    .iter()
                    .filter(|&&a| g.tangent(partner(a)).is_some_and(|w| s >> w & 1 == 1))
                    .count()
                    == 1
            })
            .expect("a finite subtree has a leaf");
        let rest = src.full_region(s & !(1 << leaf)).expect("removing a leaf keeps a subtree");
        let u = tgt.unions(hat[rest], phi1[leaf]);
        if u.len() != 1 {
            return Err(MapError::NoUnion(src.display(x)));
        }
        hat[x] = u[0];
    }
    let m = GraphMap {
        source: src.clone(),
        target: tgt.clone(),
        phi0: phi0.to_vec(),
        phi_hat: hat,
    };
    validate(&m)?;
    Ok(m)
}

/// Named subcategories of graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Cat {
    U,
    U0,
    UCyc,
    O,
    O0,
    Omega,
    Delta,
    G,
}

impl Cat {
    pub const ALL: [Cat; 8] = [Cat::U, Cat::U0, Cat::UCyc, Cat::O, Cat::O0, Cat::Omega, Cat::Delta, Cat::G];

    pub fn tag(&self) -> &'static str {
        match self {
            Cat::U => "U",
            Cat::U0 => "U0",
            Cat::UCyc => "Ucyc",
            Cat::O => "O",
            Cat::O0 => "O0",
            Cat::Omega => "Omega",
            Cat::Delta => "Delta",
            Cat::G => "G",
        }
    }

    pub fn parse(s: &str) -> Option<Cat> {
        Cat::ALL.into_iter().find(|c| c.tag().eq_ignore_ascii_case(s))
    }

    pub fn directed(&self) -> bool {
        !matches!(self, Cat::U | Cat::U0 | Cat::UCyc)
    }

    pub fn contains(&self, g: &Graph) -> bool {
        if g.is_directed() != self.directed() {
            return false;
        }
        let sh = shape(g);
        match self {
            Cat::U | Cat::O => sh.is_connected,
            Cat::U0 | Cat::O0 => sh.is_tree,
            Cat::UCyc => sh.is_tree && !g.ug().boundary().is_empty(),
            Cat::Omega => {
                let d = g.directed().unwrap();
                sh.is_tree && (0..d.num_vertices()).all(|v| d.outs(v).len() == 1)
            }
            Cat::Delta => sh.is_linear,
            Cat::G => sh.is_acyclic == Some(true),
        }
    }

    /// Morphisms of the acyclic category must have a structured image.
    pub fn contains_map(&self, m: &GraphMap) -> Result<bool, MapError> {
        if !self.contains(m.source.graph()) || !self.contains(m.target.graph()) {
            return Ok(false);
        }
        if *self == Cat::G {
            let top = m.source.max().ok_or(MapError::Disconnected)?;
            return Ok(m.target.is_structured(m.phi_hat[top])?);
        }
        Ok(true)
    }
}
