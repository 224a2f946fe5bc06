//! Brute-force oracles. Each recomputes something the main modules compute
//! by a different route, and reports discrepancies instead of failing.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;

use crate::emb::{EmbElement, EmbError, Host};
use crate::etale::{validate_u, UEtale};
use crate::exec::{self, Exec};
use crate::graph::generate::{dgraphs_with_arities, ugraphs_with_arities};
use crate::graph::{partner, shape, ArcId, DGraph, Graph, UGraph};
use crate::maps::{enumerate_graph_maps, extend_tree_map, factorize, GraphMap, MapError, DEFAULT_BUDGET};
use crate::operad::{free_cyclic, operad_homs, tree_map_to_hom, hom_to_tree_map, OperadError};
use crate::presheaf::{is_iso, Site};
use crate::util::bits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Emb(#[from] EmbError),
    #[error(transparent)]
    Operad(#[from] OperadError),
}

/// Embedding classes found by enumerating étale maps from every candidate
/// domain, against the encoded elements of the host.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct EmbOracle {
    pub host: String,
    pub elements: usize,
    pub classes: usize,
    /// Elements hit by no class or by several.
    pub discrepancies: Vec<String>,
}

impl EmbOracle {
    pub fn ok(&self) -> bool {
        self.discrepancies.is_empty() && self.elements == self.classes
    }
}

/// Candidate domains, cached by their vertex profile.
#[derive(Default)]
pub struct Domains {
    u: HashMap<Vec<usize>, Vec<Graph>>,
    d: HashMap<Vec<(usize, usize)>, Vec<Graph>>,
}

impl Domains {
    fn undirected(&mut self, profile: Vec<usize>) -> &[Graph] {
        self.u
            .entry(profile)
            .or_insert_with_key(|p| ugraphs_with_arities(p).into_iter().map(Graph::U).collect())
    }

    fn directed(&mut self, profile: Vec<(usize, usize)>) -> &[Graph] {
        self.d
            .entry(profile)
            .or_insert_with_key(|p| dgraphs_with_arities(p).into_iter().map(Graph::D).collect())
    }
}

/// Vertex-injective étale maps `h -> g`, preserving arc parity when
/// `directed`. Edges that an automorphism of `h` can permute while fixing
/// everything else (legs, loops and parallel edges at the same vertices)
/// get increasing images, so only one map per such orbit is produced.
pub fn embeddings(h: &UGraph, g: &UGraph, directed: bool) -> Vec<UEtale> {
    let n = h.num_arcs();
    if h.num_vertices() == 0 {
        let step = if directed { 2 } else { 1 };
        return (0..g.num_arcs())
            .step_by(step)
            .map(|t| UEtale {
                arcs: vec![t, partner(t)],
                vertices: Vec::new(),
            })
            .collect();
    }
    // prev[d]: the arc whose image must be smaller than that of d.
    let mut prev = vec![usize::MAX; n];
    for v in 0..h.num_vertices() {
        let mut classes: HashMap<(u8, usize, usize), Vec<ArcId>> = HashMap::new();
        for &d in h.nbhd(v) {
            let parity = if directed { d % 2 } else { 0 };
            match h.tangent(partner(d)) {
                None => classes.entry((0, 0, parity)).or_default().push(d),
                Some(w) if w == v => {
                    let rep = if directed { d & !1 } else { d.min(partner(d)) };
                    if rep == d {
                        classes.entry((1, 0, 0)).or_default().push(d);
                    } else if !directed {
                        prev[d] = rep;
                    }
                }
                Some(w) if v < w => classes.entry((2, w, parity)).or_default().push(d),
                Some(_) => {}
            }
        }
        for arcs in classes.values_mut() {
            arcs.sort();
            for k in 1..arcs.len() {
                prev[arcs[k]] = arcs[k - 1];
            }
        }
    }
    let mut next = vec![Vec::new(); n];
    for d in 0..n {
        if prev[d] != usize::MAX {
            next[prev[d]].push(d);
        }
    }
    struct Search<'a> {
        h: &'a UGraph,
        g: &'a UGraph,
        directed: bool,
        prev: Vec<ArcId>,
        next: Vec<Vec<ArcId>>,
        arcs: Vec<ArcId>,
        verts: Vec<usize>,
        out: Vec<UEtale>,
    }
    impl Search<'_> {
        fn fits(&self, d: ArcId) -> bool {
            let i = self.arcs[d];
            let p = self.prev[d];
            (p == usize::MAX || self.arcs[p] == usize::MAX || self.arcs[p] < i)
                && self.next[d].iter().all(|&q| self.arcs[q] == usize::MAX || i < self.arcs[q])
        }

        fn vertex(&mut self, v: usize) {
            if v == self.h.num_vertices() {
                self.out.push(UEtale {
                    arcs: self.arcs.clone(),
                    vertices: self.verts.clone(),
                });
                return;
            }
            let directed = self.directed;
            let profile = move |gr: &UGraph, x: usize| {
                let ins = gr.nbhd(x).iter().filter(|&&a| directed && a % 2 == 0).count();
                (gr.arity(x), ins)
            };
            for w in 0..self.g.num_vertices() {
                if self.verts.contains(&w) || profile(self.h, v) != profile(self.g, w) {
                    continue;
                }
                self.verts[v] = w;
                self.star(v, 0, 0);
                self.verts[v] = usize::MAX;
            }
        }

        fn star(&mut self, v: usize, i: usize, used: u64) {
            let nb = self.h.nbhd(v);
            if i == nb.len() {
                return self.vertex(v + 1);
            }
            let d = nb[i];
            let w = self.verts[v];
            for (j, &t) in self.g.nbhd(w).iter().enumerate() {
                if used >> j & 1 == 1 || (self.arcs[d] != usize::MAX && self.arcs[d] != t) {
                    continue;
                }
                if self.directed && t % 2 != d % 2 {
                    continue;
                }
                let q = partner(d);
                let saved = (self.arcs[d], self.arcs[q]);
                if saved.1 != usize::MAX && saved.1 != partner(t) {
                    continue;
                }
                self.arcs[d] = t;
                self.arcs[q] = partner(t);
                if self.fits(d) && self.fits(q) {
                    self.star(v, i + 1, used | 1 << j);
                }
                self.arcs[d] = saved.0;
                self.arcs[q] = saved.1;
            }
        }
    }
    let mut s = Search {
        h,
        g,
        directed,
        prev,
        next,
        arcs: vec![usize::MAX; n],
        verts: vec![usize::MAX; h.num_vertices()],
        out: Vec::new(),
    };
    s.vertex(0);
    s.out
}

pub fn emb_oracle(g: &Graph, domains: &mut Domains) -> Result<EmbOracle, OracleError> {
    let host = Host::new(g.clone())?;
    let gu = g.ug();
    let nv = gu.num_vertices();
    // Every vertex profile of a subset of vertices, plus the edge.
    let mut profiles_u: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut profiles_d: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for s in 0..1u64 << nv {
        match g {
            Graph::U(u) => {
                profiles_u.insert(bits(s).map(|v| u.arity(v)).sorted().collect());
            }
            Graph::D(d) => {
                profiles_d.insert(bits(s).map(|v| (d.ins(v).len(), d.outs(v).len())).sorted().collect());
            }
        }
    }
    let candidates: Vec<Graph> = match g {
        Graph::U(_) => profiles_u.into_iter().flat_map(|p| domains.undirected(p).to_vec()).collect(),
        Graph::D(_) => profiles_d.into_iter().flat_map(|p| domains.directed(p).to_vec()).collect(),
    };
    let mut hits: HashMap<EmbElement, usize> = HashMap::new();
    let mut classes = 0;
    for h in &candidates {
        let hu = h.ug();
        let embs = embeddings(hu, gu, g.is_directed());
        // Equivalent embeddings have the same image of attached arcs.
        let mut buckets: HashMap<Vec<ArcId>, Vec<UEtale>> = HashMap::new();
        for f in embs {
            let key: Vec<ArcId> = if hu.num_vertices() == 0 {
                vec![f.arcs[0] / 2]
            } else {
                (0..hu.num_arcs()).filter(|&a| hu.is_dangling(a)).map(|a| f.arcs[a]).sorted().collect()
            };
            let reps = buckets.entry(key).or_default();
            if reps.is_empty() || (hu.num_vertices() > 0 && !reps.iter().any(|r| related(hu, r, &f))) {
                reps.push(f);
            }
        }
        for f in buckets.into_values().flatten() {
            classes += 1;
            let x = if hu.num_vertices() == 0 {
                EmbElement::Edge(f.arcs[0] / 2)
            } else {
                let vertices = f.vertices.iter().fold(0u64, |m, &v| m | 1 << v);
                let uncut = (0..hu.num_edges())
                    .filter(|&e| hu.is_internal(e))
                    .fold(0u64, |m, e| m | 1 << (f.arcs[2 * e] / 2));
                EmbElement::Region { vertices, uncut }
            };
            *hits.entry(x).or_default() += 1;
        }
    }
    let mut rep = EmbOracle {
        host: g.name().to_string(),
        elements: host.len(),
        classes,
        discrepancies: Vec::new(),
    };
    for i in 0..host.len() {
        match hits.remove(&host.elem(i)) {
            Some(1) => {}
            Some(n) => rep.discrepancies.push(format!("{} has {n} classes", host.display(i))),
            None => rep.discrepancies.push(format!("{} has no class", host.display(i))),
        }
    }
    for (x, _) in hits {
        rep.discrepancies.push(format!("class {x:?} is not an element"));
    }
    Ok(rep)
}

/// Whether `g = f ∘ s` for an automorphism `s` of `h`.
fn related(h: &UGraph, f: &UEtale, g: &UEtale) -> bool {
    let n = h.num_arcs();
    let mut s = vec![usize::MAX; n];
    for a in (0..n).filter(|&a| h.is_dangling(a)) {
        match (0..n).find(|&b| h.is_dangling(b) && f.arcs[b] == g.arcs[a]) {
            Some(b) => s[a] = b,
            None => return false,
        }
    }
    for a in 0..n {
        if s[a] == usize::MAX {
            s[a] = partner(s[partner(a)]);
        }
    }
    let vertices: Vec<usize> = (0..h.num_vertices())
        .map(|v| f.vertices.iter().position(|&w| w == g.vertices[v]))
        .collect::<Option<_>>()
        .unwrap_or_default();
    if vertices.len() != h.num_vertices() || s.iter().collect::<HashSet<_>>().len() != n {
        return false;
    }
    let s = UEtale { arcs: s, vertices };
    validate_u(h, h, &s).is_ok() && s.compose(f) == *g
}

/// Boundary-compatible pairs `(phi0, phi1)` between trees, by trying every
/// element and every port bijection at each vertex.
pub fn brute_tree_maps(h: &Host, g: &Host) -> Vec<(Vec<ArcId>, Vec<usize>)> {
    let hu = h.ug();
    let mut out = Vec::new();
    if hu.num_vertices() == 0 {
        // The edge goes to either orientation of any target edge.
        for a in 0..g.ug().num_arcs() {
            out.push((vec![a, partner(a)], Vec::new()));
        }
        return out;
    }
    let mut phi0 = vec![usize::MAX; hu.num_arcs()];
    let mut phi1 = vec![0; hu.num_vertices()];
    fn go(
        h: &Host,
        g: &Host,
        v: usize,
        phi0: &mut Vec<ArcId>,
        phi1: &mut Vec<usize>,
        out: &mut Vec<(Vec<ArcId>, Vec<usize>)>,
    ) {
        let hu = h.ug();
        if v == hu.num_vertices() {
            out.push((phi0.clone(), phi1.clone()));
            return;
        }
        let ports = h.boundary(h.vertex_elem(v));
        for y in 0..g.len() {
            let b = g.boundary(y);
            if b.len() != ports.len() {
                continue;
            }
            for perm in b.iter().copied().permutations(b.len()) {
                let saved = phi0.clone();
                let ok = ports.iter().zip(&perm).all(|(&p, &t)| {
                    for (s, u) in [(p, t), (partner(p), partner(t))] {
                        if phi0[s] == usize::MAX {
                            phi0[s] = u;
                        } else if phi0[s] != u {
                            return false;
                        }
                    }
                    true
                });
                if ok {
                    phi1[v] = y;
                    go(h, g, v + 1, phi0, phi1, out);
                }
                *phi0 = saved;
            }
        }
    }
    go(h, g, 0, &mut phi0, &mut phi1, &mut out);
    out.sort();
    out.dedup();
    out
}

/// The greatest element below both `x` and `y`, if there is exactly one.
pub fn meet(h: &Host, x: usize, y: usize) -> Option<usize> {
    let below: Vec<usize> = (0..h.len()).filter(|&z| h.leq(z, x) && h.leq(z, y)).collect();
    let tops: Vec<usize> = below
        .iter()
        .copied()
        .filter(|&z| below.iter().all(|&w| w == z || !h.leq(z, w)))
        .collect();
    (tops.len() == 1).then(|| tops[0])
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct TreeMapReport {
    pub pairs: usize,
    pub tree_maps: usize,
    pub graph_maps: usize,
    pub intersections: usize,
    pub failures: Vec<String>,
}

impl TreeMapReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.tree_maps == self.graph_maps
    }

    fn merge(&mut self, o: TreeMapReport) {
        self.pairs += o.pairs;
        self.tree_maps += o.tree_maps;
        self.graph_maps += o.graph_maps;
        self.intersections += o.intersections;
        self.failures.extend(o.failures);
    }
}

/// Tree maps `h -> g` against full tree maps, in both directions, and
/// preservation of intersections.
pub fn tree_map_check(h: &Arc<Host>, g: &Arc<Host>) -> Result<TreeMapReport, OracleError> {
    let name = format!("{} -> {}", h.graph().name(), g.graph().name());
    let mut rep = TreeMapReport {
        pairs: 1,
        ..Default::default()
    };
    let brute = brute_tree_maps(h, g);
    let full = enumerate_graph_maps(h, g, DEFAULT_BUDGET)?;
    rep.tree_maps = brute.len();
    rep.graph_maps = full.len();
    let restricted: HashSet<(Vec<ArcId>, Vec<usize>)> = full.iter().map(|m| m.restrict()).collect();
    if restricted.len() != full.len() {
        rep.failures.push(format!("{name}: distinct full maps share a restriction"));
    }
    for (phi0, phi1) in &brute {
        match extend_tree_map(h, g, phi0, phi1) {
            Ok(m) => {
                if m.restrict() != (phi0.clone(), phi1.clone()) {
                    rep.failures.push(format!("{name}: extension does not restrict back"));
                }
                if !restricted.contains(&m.restrict()) {
                    rep.failures.push(format!("{name}: extension is not an enumerated map"));
                }
            }
            Err(e) => rep.failures.push(format!("{name}: extension failed: {e}")),
        }
    }
    let brute_set: HashSet<_> = brute.into_iter().collect();
    for m in &full {
        let (p0, p1) = m.restrict();
        if !brute_set.contains(&(p0.clone(), p1.clone())) {
            rep.failures.push(format!("{name}: full map restricts outside the tree maps"));
            continue;
        }
        if let Ok(e) = extend_tree_map(h, g, &p0, &p1) {
            if e.phi_hat != m.phi_hat {
                rep.failures.push(format!("{name}: extension differs from the full map"));
            }
        }
        for x in 0..h.len() {
            for y in x + 1..h.len() {
                let Some(z) = meet(h, x, y) else { continue };
                rep.intersections += 1;
                if meet(g, m.phi_hat[x], m.phi_hat[y]) != Some(m.phi_hat[z]) {
                    rep.failures.push(format!("{name}: intersection of {} and {} not preserved", h.display(x), h.display(y)));
                }
            }
        }
    }
    Ok(rep)
}

pub fn tree_map_sweep(trees: &[Arc<Host>], exec: Exec) -> Result<TreeMapReport, OracleError> {
    let rows = exec::map_range(exec, trees.len(), |i| -> Result<TreeMapReport, OracleError> {
        let mut r = TreeMapReport::default();
        for g in trees {
            r.merge(tree_map_check(&trees[i], g)?);
        }
        Ok(r)
    });
    let mut rep = TreeMapReport::default();
    for r in rows {
        rep.merge(r?);
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct FactorReport {
    pub category: String,
    pub morphisms: usize,
    pub failures: Vec<String>,
}

impl FactorReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every site morphism factors as active then inert through an object of the
/// same category, and all such factorizations inside the site are related
/// by automorphisms of the middle object.
pub fn factorization_check(site: &Site, exec: Exec) -> Result<FactorReport, OracleError> {
    let n = site.len();
    let autos: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..site.homs[k][k].len()).filter(|&i| is_iso(&site.homs[k][k][i])).collect())
        .collect();
    let rows = exec::map_range(exec, n, |a| -> Result<Vec<String>, OracleError> {
        let mut bad = Vec::new();
        // Factorizations found inside the site, per target and morphism.
        let mut found: Vec<Vec<Vec<(usize, usize, usize)>>> =
            (0..n).map(|b| vec![Vec::new(); site.homs[a][b].len()]).collect();
        for k in 0..n {
            for (i, f) in site.homs[a][k].iter().enumerate() {
                if !f.is_active() {
                    continue;
                }
                for b in 0..n {
                    for (j, g) in site.homs[k][b].iter().enumerate() {
                        if !g.is_inert() {
                            continue;
                        }
                        match site.compose(a, k, b, i, j) {
                            Some(m) => found[b][m].push((k, i, j)),
                            None => bad.push(format!("{} -> {} -> {}: composite missing", site.name(a), site.name(k), site.name(b))),
                        }
                    }
                }
            }
        }
        for b in 0..n {
            for (mi, m) in site.homs[a][b].iter().enumerate() {
                let what = format!("map {mi} {} -> {}", site.name(a), site.name(b));
                let fz = factorize(m)?;
                let back = fz.active.then(&fz.inert)?;
                if back.phi0 != m.phi0 || back.phi_hat != m.phi_hat {
                    bad.push(format!("{what}: composite differs"));
                }
                if !fz.active.is_active() || !fz.inert.is_inert() {
                    bad.push(format!("{what}: factors have the wrong kind"));
                }
                if !site.cat.contains_map(&fz.active)? || !site.cat.contains_map(&fz.inert)? {
                    bad.push(format!("{what}: a factor leaves {}", site.cat.tag()));
                }
                let fs = &found[b][mi];
                let Some(&(k0, i0, j0)) = fs.first() else {
                    bad.push(format!("{what}: no factorization inside the site"));
                    continue;
                };
                for &(k, i, j) in fs {
                    let related = k == k0
                        && autos[k].iter().any(|&s| {
                            site.compose(a, k, k, i0, s) == Some(i) && site.compose(k, k, b, s, j) == Some(j0)
                        });
                    if !related {
                        bad.push(format!("{what}: two unrelated factorizations"));
                        break;
                    }
                }
            }
        }
        Ok(bad)
    });
    let mut rep = FactorReport {
        category: site.cat.tag().to_string(),
        morphisms: site.morphism_count(),
        failures: Vec::new(),
    };
    for r in rows {
        rep.failures.extend(r?);
    }
    Ok(rep)
}

/// Counts lifts of every directed path of `g` to the realization of `x`
/// with prescribed first and last edges; structured iff every count is one.
pub fn structured_oracle(host: &Host, x: usize) -> Option<bool> {
    let g = host.graph().directed()?;
    if shape(host.graph()).is_acyclic != Some(true) {
        return None;
    }
    let (h, f) = host.realize_directed(x)?;
    let paths = directed_paths(g);
    for p in &paths {
        let (first, last) = (p[0], *p.last().unwrap());
        for h1 in (0..h.num_edges()).filter(|&k| f.edges[k] == first) {
            for h2 in (0..h.num_edges()).filter(|&k| f.edges[k] == last) {
                if count_lifts(&h, &f.edges, p, h1, h2) != 1 {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

/// Edge sequences `e0, e1, ...` with `e_{i+1}` an output of the head of `e_i`.
fn directed_paths(g: &DGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..g.num_edges()).map(|e| vec![e]).collect();
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if let Some(v) = g.head(last) {
            for &e in g.outs(v) {
                let mut q = p.clone();
                q.push(e);
                stack.push(q);
            }
        }
        out.push(p);
    }
    out
}

fn count_lifts(h: &DGraph, fe: &[usize], p: &[usize], h1: usize, h2: usize) -> usize {
    let mut cur = vec![h1];
    for &e in &p[1..] {
        let mut next = Vec::new();
        for &k in &cur {
            if let Some(w) = h.head(k) {
                next.extend(h.outs(w).iter().copied().filter(|&k2| fe[k2] == e));
            }
        }
        cur = next;
    }
    cur.iter().filter(|&&k| k == h2).count()
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct BridgeReport {
    pub pairs: usize,
    pub homs: usize,
    pub failures: Vec<String>,
}

impl BridgeReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Operad maps `C(H) -> C(G)` against tree maps `H -> G`, with the explicit
/// bijection in both directions.
pub fn operad_bridge(site: &Site, exec: Exec) -> Result<BridgeReport, OracleError> {
    let n = site.len();
    let cap = (0..n)
        .flat_map(|a| (0..site.objects[a].ug().num_vertices()).map(move |v| site.objects[a].ug().arity(v)))
        .max()
        .unwrap_or(0)
        .max(2);
    let frees = (0..n)
        .map(|g| free_cyclic(site.objects[g].ug(), cap))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = exec::map_range(exec, n, |h| -> Result<BridgeReport, OracleError> {
        let mut rep = BridgeReport::default();
        for g in 0..n {
            rep.pairs += 1;
            let what = format!("{} -> {}", site.name(h), site.name(g));
            let homs = operad_homs(site.objects[h].ug(), &frees[g].pres)?;
            let maps: &[GraphMap] = &site.homs[h][g];
            rep.homs += homs.len();
            if homs.len() != maps.len() {
                rep.failures.push(format!("{what}: {} operad maps, {} tree maps", homs.len(), maps.len()));
            }
            let hom_set: HashSet<_> = homs.iter().cloned().collect();
            let mut images = HashSet::new();
            for m in maps {
                match tree_map_to_hom(m, &frees[g]) {
                    Some(o) if hom_set.contains(&o) => {
                        images.insert(o.clone());
                        let back = hom_to_tree_map(&o, &site.objects[h], &frees[g])?;
                        if back.phi0 != m.phi0 || back.phi_hat != m.phi_hat {
                            rep.failures.push(format!("{what}: round trip changes a map"));
                        }
                    }
                    _ => rep.failures.push(format!("{what}: tree map has no operad map")),
                }
            }
            if images.len() != homs.len() {
                rep.failures.push(format!("{what}: not a bijection"));
            }
        }
        Ok(rep)
    });
    let mut rep = BridgeReport::default();
    for r in rows {
        let r = r?;
        rep.pairs += r.pairs;
        rep.homs += r.homs;
        rep.failures.extend(r.failures);
    }
    Ok(rep)
}


