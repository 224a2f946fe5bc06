use std::sync::Arc;

use graphcat::etale::UEtale;
use graphcat::exec::Exec;
use graphcat::fixtures;
use graphcat::graph::generate::Bounds;
use graphcat::graph::{dedge, dstar, edge, linear, star, Graph, UGraph};
use graphcat::maps::{
    enumerate_graph_maps, extend_tree_map, factorize, inert_for, validate, Cat, GraphMap, MapError,
    DEFAULT_BUDGET,
};
use graphcat::presheaf::{is_iso, Site};
use graphcat::{EmbElement, Host};

fn host(g: impl Into<Graph>) -> Arc<Host> {
    Arc::new(Host::new(g).unwrap())
}

fn count(h: impl Into<Graph>, g: impl Into<Graph>) -> usize {
    enumerate_graph_maps(&host(h), &host(g), DEFAULT_BUDGET).unwrap().len()
}

#[test]
fn small_hom_counts() {
    assert_eq!(count(edge(), edge()), 2);
    assert_eq!(count(dedge(), dedge()), 1);
    assert_eq!(count(linear(1), linear(2)), 6);
    for (m, n) in [(0, 2), (2, 1), (2, 3)] {
        // Monotone maps [m] -> [n].
        let want = (1..=m + 1).fold(1, |acc, k| acc * (n + k) / k);
        assert_eq!(count(linear(m), linear(n)), want, "L{m} -> L{n}");
    }
}

#[test]
fn identity_is_active_and_inert() {
    for g in [Graph::U(fixtures::fig8()), Graph::D(fixtures::diamond()), Graph::U(edge())] {
        let id = GraphMap::identity(&host(g));
        validate(&id).unwrap();
        assert!(id.is_active() && id.is_inert());
    }
}

#[test]
fn embeddings_give_inert_maps() {
    let g = host(fixtures::fig8());
    for y in 0..g.len() {
        let m = inert_for(&g, y).unwrap();
        validate(&m).unwrap();
        assert!(m.is_inert());
        assert_eq!(m.is_active(), Some(y) == g.max());
    }
}

#[test]
fn covering_fold_is_rejected() {
    let loop1 = UGraph::from_names("loop", &[("p", "p†")], &[("v", &["p", "p†"])]).unwrap();
    let cycle = UGraph::from_names("cycle", &[("b", "b†"), ("d", "d†")], &[("x", &["b", "d†"]), ("y", &["b†", "d"])]).unwrap();
    let (h, g) = (host(cycle), host(loop1));
    let f = UEtale { arcs: vec![0, 1, 0, 1], vertices: vec![0, 0] };
    // Each element goes to the target element with the image boundary.
    let phi_hat = (0..h.len())
        .map(|x| {
            let mut b: Vec<usize> = h.boundary(x).iter().map(|&a| f.arcs[a]).collect();
            b.sort_unstable();
            let edge = matches!(h.elem(x), EmbElement::Edge(_));
            (0..g.len())
                .find(|&y| g.boundary(y) == b.as_slice() && matches!(g.elem(y), EmbElement::Edge(_)) == edge)
                .unwrap()
        })
        .collect();
    let m = GraphMap { source: h, target: g, phi0: f.arcs, phi_hat };
    assert!(matches!(validate(&m), Err(MapError::DisjointnessNotPreserved(..))), "{:?}", validate(&m));
}

#[test]
fn identity_composes_neutrally() {
    let (s2, f8) = (host(star(2)), host(fixtures::fig8()));
    for m in enumerate_graph_maps(&s2, &f8, DEFAULT_BUDGET).unwrap() {
        assert_eq!(GraphMap::identity(&s2).then(&m).unwrap(), m);
        assert_eq!(m.then(&GraphMap::identity(&f8)).unwrap(), m);
    }
}

#[test]
fn active_and_inert_are_closed_under_composition() {
    let site = Site::build_with(Cat::U0, Bounds::default(), Exec::default()).unwrap();
    let n = site.len();
    let (mut inert, mut active) = (0, 0);
    for b in 0..n {
        for a in 0..n {
            for f in &site.homs[a][b] {
                for c in 0..n {
                    for g in &site.homs[b][c] {
                        if f.is_inert() && g.is_inert() {
                            assert!(f.then(g).unwrap().is_inert());
                            inert += 1;
                        }
                        if f.is_active() && g.is_active() {
                            assert!(f.then(g).unwrap().is_active());
                            active += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(inert > 0 && active > 0);
}

#[test]
fn vertex_functor_is_contravariant() {
    let site = Site::build_with(Cat::UCyc, Bounds::default(), Exec::default()).unwrap();
    let n = site.len();
    for a in 0..n {
        for f in &site.homs[a][a] {
            if is_iso(f) && f.phi0.iter().enumerate().all(|(i, &j)| i == j) {
                let vf = f.vertex_functor();
                assert!(vf.iter().enumerate().all(|(i, &v)| v == Some(i)));
            }
        }
        for b in 0..n {
            for f in &site.homs[a][b] {
                for c in 0..n {
                    for g in &site.homs[b][c] {
                        let (vf, vg) = (f.vertex_functor(), g.vertex_functor());
                        let want: Vec<_> = vg.iter().map(|w| w.and_then(|w| vf[w])).collect();
                        assert_eq!(f.then(g).unwrap().vertex_functor(), want);
                    }
                }
            }
        }
    }
}

#[test]
fn star_inclusion_picks_its_vertex() {
    let g = host(fixtures::fig8());
    for v in 0..g.ug().num_vertices() {
        let m = inert_for(&g, g.vertex_elem(v)).unwrap();
        let vf = m.vertex_functor();
        for (w, img) in vf.iter().enumerate() {
            assert_eq!(img.is_some(), w == v);
        }
    }
}

#[test]
fn tree_maps_extend() {
    let t = host(fixtures::path3());
    let n = t.ug().num_vertices();
    let id = extend_tree_map(&t, &t, &(0..t.ug().num_arcs()).collect::<Vec<_>>(), &(0..n).map(|v| t.vertex_elem(v)).collect::<Vec<_>>()).unwrap();
    assert_eq!(id, GraphMap::identity(&t));

    let (l1, l0) = (host(linear(1)), host(linear(0)));
    let s = extend_tree_map(&l1, &l0, &[0, 1, 0, 1], &[l0.edge_elem(0)]).unwrap();
    validate(&s).unwrap();
    assert!(s.is_active());
    assert!(Cat::Delta.contains_map(&s).unwrap());
}

#[test]
fn factorization_of_pure_maps() {
    let g = host(fixtures::fig8());
    let m = inert_for(&g, g.vertex_elem(0)).unwrap();
    let fz = factorize(&m).unwrap();
    assert!(is_iso(&fz.active));
    let s2 = host(star(2));
    let wrap = enumerate_graph_maps(&s2, &g, DEFAULT_BUDGET).unwrap().into_iter().find(|m| m.is_active()).unwrap();
    let fz = factorize(&wrap).unwrap();
    assert!(is_iso(&fz.inert));
    assert_eq!(fz.active.then(&fz.inert).unwrap().phi_hat, wrap.phi_hat);
}

#[test]
fn non_surjective_maps_are_not_active() {
    let g = host(fixtures::fig8());
    for y in 0..g.len() {
        if Some(y) != g.max() {
            assert!(!inert_for(&g, y).unwrap().is_active());
        }
    }
}

#[test]
fn category_membership() {
    for n in 0..4 {
        assert!(Cat::Delta.contains(&Graph::D(linear(n))));
    }
    assert!(Cat::Omega.contains(&Graph::D(dstar(2, 1))));
    assert!(!Cat::Omega.contains(&Graph::D(dstar(1, 2))));
    assert!(Cat::U0.contains(&Graph::U(star(0))));
    assert!(!Cat::UCyc.contains(&Graph::U(star(0))));
    assert!(!Cat::U0.contains(&Graph::U(fixtures::fig8())));
    assert!(Cat::U.contains(&Graph::U(fixtures::fig8())));
}
