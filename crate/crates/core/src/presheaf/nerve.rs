//! The nerve of a presentation: decorations, acted on by evaluation.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::{FinitePresheaf, PresheafError, Site};
use crate::exec::Exec;
use crate::graph::{ArcId, Graph};
use crate::operad::{decorations, evaluate, vertex_tags, Decoration, OperadError, Presentation};

fn label(p: &Presentation, g: &Graph, d: &Decoration) -> String {
    let ops = d.ops.iter().map(|&k| p.ops[k].name.as_str()).join(" ");
    let cols = d.colors.iter().map(|&c| p.colors[c].as_str()).join(",");
    if g.num_vertices() == 0 {
        format!("[{cols}]")
    } else {
        format!("{ops} [{cols}]")
    }
}

/// `N(P)` on a site of the matching direction.
pub fn nerve(p: &Presentation, site: &Arc<Site>, exec: Exec) -> Result<FinitePresheaf, PresheafError> {
    if p.directed() != site.cat.directed() {
        return Err(OperadError::FlavorMismatch.into());
    }
    let mut decos: Vec<Vec<Decoration>> = Vec::with_capacity(site.len());
    for h in &site.objects {
        decos.push(decorations(p, h)?);
    }
    let index: Vec<HashMap<&Decoration, usize>> =
        decos.iter().map(|ds| ds.iter().enumerate().map(|(i, d)| (d, i)).collect()).collect();
    let labels: Vec<Vec<String>> = site
        .objects
        .iter()
        .zip(&decos)
        .map(|(h, ds)| ds.iter().map(|d| label(p, h.graph(), d)).collect())
        .collect();
    let name = format!("N({})", p.name);
    FinitePresheaf::from_fn(&name, site, labels, exec, |a, b, k, x| {
        let m = &site.homs[a][b][k];
        let h = site.objects[a].graph();
        let d = &decos[b][x];
        let colors = match h {
            Graph::U(u) => (0..u.num_arcs()).map(|c| d.colors[m.phi0[c]]).collect(),
            Graph::D(dh) => (0..dh.num_edges()).map(|e| d.colors[m.phi0[2 * e] / 2]).collect(),
        };
        let mut ops = Vec::with_capacity(h.num_vertices());
        for w in 0..h.num_vertices() {
            let y = m.phi_hat[site.objects[a].vertex_elem(w)];
            let blob = evaluate(p, &site.objects[b], d, y, None)?;
            let order: Vec<ArcId> = vertex_tags(h, w).0.iter().map(|&t| m.phi0[t]).collect();
            ops.push(p.reorder(&blob, &order)?);
        }
        let img = Decoration { colors, ops };
        index[a].get(&img).copied().ok_or_else(|| {
            PresheafError::NotFunctorial(format!("pulled back decoration missing at {}", site.name(a)))
        })
    })
}
