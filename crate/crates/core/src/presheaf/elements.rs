//! The directed site against the category of elements of the orientation
//! presheaf on the undirected one.

use std::collections::HashSet;
use std::sync::Arc;

use super::kan::underlying_hosts;
use super::orient::{oriented, pullback};
use super::{Functor, PresheafError, Site};
use crate::exec::{self, Exec};
use crate::maps::{enumerate_graph_maps, MapKey, DEFAULT_BUDGET};
use crate::util::Dsu;

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct ElementsReport {
    pub functor: String,
    /// Pairs `(G, x)` with `G` on the undirected site.
    pub elements: usize,
    /// Orbits of those pairs under automorphisms of `G`.
    pub orbits: usize,
    pub directed_objects: usize,
    pub object_failures: Vec<String>,
    /// Pairs of directed objects compared, and those whose hom-sets differ.
    pub hom_pairs: usize,
    pub hom_failures: Vec<String>,
}

impl ElementsReport {
    pub fn ok(&self) -> bool {
        self.object_failures.is_empty() && self.hom_failures.is_empty()
    }
}

/// Objects: `(G, x) -> G_x` is onto the directed site with fibres the
/// `Aut(G)`-orbits. Morphisms: maps `D -> D'` are exactly the maps
/// `U(D) -> U(D')` preserving the orientation.
pub fn elements_equivalence_check(
    f: Functor,
    c: &Arc<Site>,
    d: &Arc<Site>,
    exec: Exec,
) -> Result<ElementsReport, PresheafError> {
    if c.cat != f.source() || d.cat != f.target() || f == Functor::OmegaToUCyc {
        return Err(PresheafError::WrongSites);
    }
    let mut rep = ElementsReport {
        functor: f.tag().to_string(),
        directed_objects: c.len(),
        ..Default::default()
    };
    let mut hit = vec![false; c.len()];
    for g in 0..d.len() {
        let u = d.objects[g].ug();
        let n = 1usize << u.num_edges();
        let mut target = Vec::with_capacity(n);
        for x in 0..n as u64 {
            let r = c
                .find(&oriented(u, x))
                .ok_or_else(|| PresheafError::SiteTooSmall(format!("{} oriented by {x:b}", d.name(g))))?;
            target.push(r.0);
            hit[r.0] = true;
        }
        let mut dsu = Dsu::new(n);
        for m in &d.homs[g][g] {
            if m.vertex_functor().iter().all(|v| v.is_some()) && is_bijection(&m.phi0) {
                for x in 0..n {
                    dsu.union(x, pullback(x as u64, &m.phi0) as usize);
                }
            }
        }
        rep.elements += n;
        rep.orbits += dsu.classes();
        for x in 0..n {
            for y in x + 1..n {
                if (dsu.find(x) == dsu.find(y)) != (target[x] == target[y]) {
                    rep.object_failures
                        .push(format!("{}: orientations {x:b} and {y:b}", d.name(g)));
                }
            }
        }
    }
    for (h, &seen) in hit.iter().enumerate() {
        if !seen {
            rep.object_failures.push(format!("{} is not an oriented object", c.name(h)));
        }
    }
    let under = underlying_hosts(c)?;
    let n = c.len();
    let rows = exec::map_range(exec, n, |a| -> Result<Vec<String>, PresheafError> {
        let mut bad = Vec::new();
        for b in 0..n {
            let directed: HashSet<MapKey> = c.homs[a][b].iter().map(|m| m.key()).collect();
            let undirected: HashSet<MapKey> = enumerate_graph_maps(&under[a], &under[b], DEFAULT_BUDGET)?
                .into_iter()
                .filter(|m| pullback(0, &m.phi0) == 0)
                .map(|m| m.key())
                .collect();
            if directed != undirected {
                bad.push(format!(
                    "{} -> {}: {} directed, {} orientation-preserving",
                    c.name(a),
                    c.name(b),
                    directed.len(),
                    undirected.len()
                ));
            }
        }
        Ok(bad)
    });
    for r in rows {
        rep.hom_failures.extend(r?);
    }
    rep.hom_pairs = n * n;
    Ok(rep)
}

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = HashSet::new();
    p.iter().all(|&x| seen.insert(x))
}
