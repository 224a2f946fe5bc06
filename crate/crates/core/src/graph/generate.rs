//! Exhaustive generation of connected graphs up to isomorphism.

use std::collections::HashSet;

use super::iso::{certificate, DData, UData};
use super::{DGraph, Graph, UGraph};
use crate::util::Dsu;

/// Size bounds for generated graphs. The arity of a directed vertex is its
/// number of inputs plus outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bounds {
    pub max_vertices: usize,
    pub max_arity: usize,
    pub max_edges: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_vertices: 3,
            max_arity: 3,
            max_edges: 6,
        }
    }
}

/// One kind of edge placement: which arity counters it bumps.
struct Slot {
    bumps: Vec<(usize, usize)>,
}

struct Filler<'a> {
    slots: &'a [Slot],
    caps: &'a [usize],
    exact: bool,
    max_edges: usize,
}

impl Filler<'_> {
    fn run(&self, k: usize, counts: &mut Vec<usize>, used: &mut Vec<usize>, edges: usize, out: &mut dyn FnMut(&[usize])) {
        if k == self.slots.len() {
            if !self.exact || used.iter().zip(self.caps).all(|(u, c)| u == c) {
                out(counts);
            }
            return;
        }
        let mut c = 0;
        loop {
            self.run(k + 1, counts, used, edges + c, out);
            if edges + c + 1 > self.max_edges {
                break;
            }
            let fits = self.slots[k].bumps.iter().all(|&(i, amt)| used[i] + amt <= self.caps[i]);
            if !fits {
                break;
            }
            for &(i, amt) in &self.slots[k].bumps {
                used[i] += amt;
            }
            c += 1;
            counts[k] = c;
        }
        for &(i, amt) in &self.slots[k].bumps {
            used[i] -= amt * c;
        }
        counts[k] = 0;
    }
}

fn connected(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut dsu = Dsu::new(n);
    for (u, w) in pairs {
        dsu.union(u, w);
    }
    dsu.classes() == 1
}

fn u_datas(n: usize, caps: &[usize], exact: bool, max_edges: usize) -> Vec<UData> {
    let mut slots = Vec::new();
    for v in 0..n {
        slots.push(Slot { bumps: vec![(v, 1)] });
        slots.push(Slot { bumps: vec![(v, 2)] });
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            slots.push(Slot {
                bumps: vec![(u, 1), (w, 1)],
            });
            pairs.push((u, w));
        }
    }
    let filler = Filler {
        slots: &slots,
        caps,
        exact,
        max_edges,
    };
    let mut out = Vec::new();
    let mut counts = vec![0; slots.len()];
    let mut used = vec![0; n];
    filler.run(0, &mut counts, &mut used, 0, &mut |c| {
        let mut d = UData {
            floating: 0,
            legs: (0..n).map(|v| c[2 * v]).collect(),
            loops: (0..n).map(|v| c[2 * v + 1]).collect(),
            mult: vec![vec![0; n]; n],
        };
        for (k, &(u, w)) in pairs.iter().enumerate() {
            d.mult[u][w] = c[2 * n + k];
            d.mult[w][u] = c[2 * n + k];
        }
        let linked = pairs.iter().filter(|&&(u, w)| d.mult[u][w] > 0).copied();
        if connected(n, linked) {
            out.push(d);
        }
    });
    out
}

fn d_datas(n: usize, caps: &[usize], exact: bool, max_edges: usize, total_cap: Option<usize>) -> Vec<DData> {
    // Counters 2v (inputs of v) and 2v + 1 (outputs of v); with `total_cap`
    // an extra counter per vertex tracks in + out.
    let tot = |v: usize| 2 * n + v;
    let with_tot = |mut b: Vec<(usize, usize)>| {
        if total_cap.is_some() {
            let extra: Vec<_> = b.iter().map(|&(i, a)| (tot(i / 2), a)).collect();
            b.extend(extra);
        }
        b
    };
    let mut slots = Vec::new();
    for v in 0..n {
        slots.push(Slot { bumps: with_tot(vec![(2 * v, 1)]) });
        slots.push(Slot { bumps: with_tot(vec![(2 * v + 1, 1)]) });
        slots.push(Slot {
            bumps: with_tot(vec![(2 * v, 1), (2 * v + 1, 1)]),
        });
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for w in 0..n {
            if u != w {
                slots.push(Slot {
                    bumps: with_tot(vec![(2 * u + 1, 1), (2 * w, 1)]),
                });
                pairs.push((u, w));
            }
        }
    }
    let mut all_caps = caps.to_vec();
    if let Some(t) = total_cap {
        all_caps.extend(std::iter::repeat_n(t, n));
    }
    let filler = Filler {
        slots: &slots,
        caps: &all_caps,
        exact,
        max_edges,
    };
    let mut out = Vec::new();
    let mut counts = vec![0; slots.len()];
    let mut used = vec![0; all_caps.len()];
    filler.run(0, &mut counts, &mut used, 0, &mut |c| {
        let mut d = DData {
            floating: 0,
            in_legs: (0..n).map(|v| c[3 * v]).collect(),
            out_legs: (0..n).map(|v| c[3 * v + 1]).collect(),
            loops: (0..n).map(|v| c[3 * v + 2]).collect(),
            mult: vec![vec![0; n]; n],
        };
        for (k, &(u, w)) in pairs.iter().enumerate() {
            d.mult[u][w] = c[3 * n + k];
        }
        let linked = pairs.iter().filter(|&&(u, w)| d.mult[u][w] > 0).copied();
        if connected(n, linked) {
            out.push(d);
        }
    });
    out
}

fn dedupe<G: Clone>(graphs: Vec<G>, wrap: impl Fn(&G) -> Graph) -> Vec<G> {
    let mut seen = HashSet::new();
    graphs.into_iter().filter(|g| seen.insert(certificate(&wrap(g)))).collect()
}

/// All connected undirected graphs within `b`, one per isomorphism class,
/// ordered by vertex count and then by certificate.
pub fn connected_ugraphs(b: &Bounds) -> Vec<UGraph> {
    let mut out = Vec::new();
    if b.max_edges >= 1 {
        out.push(super::edge());
    }
    for n in 1..=b.max_vertices {
        let caps = vec![b.max_arity; n];
        let mut batch: Vec<UGraph> = u_datas(n, &caps, false, b.max_edges).iter().map(|d| d.build("g")).collect();
        batch = dedupe(batch, |g| Graph::U(g.clone()));
        batch.sort_by_cached_key(|g| certificate(&Graph::U(g.clone())));
        out.extend(batch);
    }
    name_all(out, |g, s| g.set_name(s), "u")
}

/// All connected directed graphs within `b`, one per isomorphism class.
pub fn connected_dgraphs(b: &Bounds) -> Vec<DGraph> {
    let mut out = Vec::new();
    if b.max_edges >= 1 {
        out.push(super::dedge());
    }
    for n in 1..=b.max_vertices {
        let caps = vec![b.max_arity; 2 * n];
        let mut batch: Vec<DGraph> = d_datas(n, &caps, false, b.max_edges, Some(b.max_arity))
            .iter()
            .map(|d| d.build("g"))
            .collect();
        batch = dedupe(batch, |g| Graph::D(g.clone()));
        batch.sort_by_cached_key(|g| certificate(&Graph::D(g.clone())));
        out.extend(batch);
    }
    name_all(out, |g, s| g.set_name(s), "d")
}

fn name_all<G>(mut gs: Vec<G>, set: impl Fn(&mut G, &str), prefix: &str) -> Vec<G> {
    for (i, g) in gs.iter_mut().enumerate() {
        set(g, &format!("{prefix}{i}"));
    }
    gs
}

/// Connected undirected graphs whose vertex arities are exactly `arities`
/// (in some order), one per isomorphism class. Empty `arities` yields the edge.
pub fn ugraphs_with_arities(arities: &[usize]) -> Vec<UGraph> {
    if arities.is_empty() {
        return vec![super::edge()];
    }
    let total: usize = arities.iter().sum();
    let batch: Vec<UGraph> = u_datas(arities.len(), arities, true, total)
        .iter()
        .map(|d| d.build("h"))
        .collect();
    dedupe(batch, |g| Graph::U(g.clone()))
}

/// Connected directed graphs whose vertex (inputs, outputs) arities are
/// exactly `arities`, one per isomorphism class.
pub fn dgraphs_with_arities(arities: &[(usize, usize)]) -> Vec<DGraph> {
    if arities.is_empty() {
        return vec![super::dedge()];
    }
    let caps: Vec<usize> = arities.iter().flat_map(|&(i, o)| [i, o]).collect();
    let total: usize = caps.iter().sum();
    let batch: Vec<DGraph> = d_datas(arities.len(), &caps, true, total, None)
        .iter()
        .map(|d| d.build("h"))
        .collect();
    dedupe(batch, |g| Graph::D(g.clone()))
}
