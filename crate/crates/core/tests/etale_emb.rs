use graphcat::etale::{
    enumerate_d, enumerate_u, is_embedding_d, is_embedding_u, lift_embedding_directed, validate_d, validate_u,
    DEtale, EtaleError, UEtale,
};
use graphcat::fixtures;
use graphcat::graph::iso::is_isomorphic;
use graphcat::graph::{dedge, dstar, edge, star, DGraph, Graph};
use graphcat::maps::DEFAULT_BUDGET;
use graphcat::{EmbElement, Host, UGraph};

fn looped() -> DGraph {
    DGraph::from_names("loop", &["e"], &[("v", &["e"], &["e"])]).unwrap()
}

fn two_cycle() -> DGraph {
    DGraph::from_names("cycle2", &["a", "b"], &[("u", &["a"], &["b"]), ("w", &["b"], &["a"])]).unwrap()
}

fn identity(g: &UGraph) -> UEtale {
    UEtale {
        arcs: (0..g.num_arcs()).collect(),
        vertices: (0..g.num_vertices()).collect(),
    }
}

#[test]
fn cover_is_etale_but_not_an_embedding() {
    let (h, g) = (two_cycle(), looped());
    let f = DEtale { edges: vec![0, 0], vertices: vec![0, 0] };
    validate_d(&h, &g, &f).unwrap();
    assert!(!is_embedding_d(&h, &g, &f));
}

#[test]
fn embedding_need_not_be_injective_on_edges() {
    let (k, g) = (dstar(1, 1), looped());
    let maps = enumerate_d(&k, &g, DEFAULT_BUDGET).unwrap();
    assert_eq!(maps.len(), 1);
    assert_eq!(maps[0].edges, vec![0, 0]);
    assert!(is_embedding_d(&k, &g, &maps[0]));
}

#[test]
fn identity_is_etale() {
    for g in [fixtures::fig2(), fixtures::fig9(), edge(), star(0)] {
        validate_u(&g, &g, &identity(&g)).unwrap();
    }
}

#[test]
fn arity_mismatch_is_not_etale() {
    let (s1, s2) = (star(1), star(2));
    let f = UEtale { arcs: vec![0, 1], vertices: vec![0] };
    assert!(matches!(validate_u(&s1, &s2, &f), Err(EtaleError::NotPullback(_))));
}

#[test]
fn stars_embed() {
    let g = fixtures::loop_two_legs();
    let h = Host::new(g.clone()).unwrap();
    for v in 0..g.num_vertices() {
        let (s, f) = h.realize(h.vertex_elem(v));
        assert!(is_isomorphic(&Graph::U(s.clone()), &Graph::U(star(g.arity(v)))));
        validate_u(&s, &g, &f).unwrap();
        assert!(is_embedding_u(&s, &g, &f));
    }
}

#[test]
fn counts_of_etale_maps() {
    for g in [fixtures::fig2(), fixtures::fig8(), fixtures::fig9()] {
        assert_eq!(enumerate_u(&edge(), &g, DEFAULT_BUDGET).unwrap().len(), g.num_arcs());
    }
    let d = fixtures::diamond();
    assert_eq!(enumerate_d(&dedge(), &d, DEFAULT_BUDGET).unwrap().len(), d.num_edges());
    assert!(enumerate_u(&star(1), &edge(), DEFAULT_BUDGET).unwrap().is_empty());
}

#[test]
fn lifting_directed_structure() {
    let d = fixtures::diamond();
    let u = d.underlying().clone();
    let l = lift_embedding_directed(&u, &d, &identity(&u)).unwrap();
    assert!(is_isomorphic(&Graph::D(l.graph.clone()), &Graph::D(d.clone())));
    let h = Host::new(u.clone()).unwrap();
    let (e, f) = h.realize(h.edge_elem(0));
    let l = lift_embedding_directed(&e, &d, &f).unwrap();
    assert!(is_isomorphic(&Graph::D(l.graph), &Graph::D(dedge())));
    for v in 0..d.num_vertices() {
        let (s, f) = h.realize(h.vertex_elem(v));
        let l = lift_embedding_directed(&s, &d, &f).unwrap();
        let want = dstar(d.ins(v).len(), d.outs(v).len());
        assert!(is_isomorphic(&Graph::D(l.graph), &Graph::D(want)));
    }
}

#[test]
fn composition_of_embeddings() {
    let g = fixtures::fig8();
    let h = Host::new(g.clone()).unwrap();
    let mut n = 0;
    for y in 0..h.len() {
        let (k, f) = h.realize(y);
        assert_eq!(identity(&k).compose(&f), f);
        let hk = Host::new(k.clone()).unwrap();
        for x in 0..hk.len() {
            let (j, e) = hk.realize(x);
            let fe = e.compose(&f);
            validate_u(&j, &g, &fe).unwrap();
            assert!(is_embedding_u(&j, &g, &fe));
            n += 1;
        }
    }
    assert!(n > 30, "{n}");
}

#[test]
fn emb_of_small_graphs() {
    assert_eq!(Host::new(edge()).unwrap().len(), 1);
    assert_eq!(Host::new(fixtures::loop_two_legs()).unwrap().len(), 5);
    let h = Host::new(fixtures::fig8()).unwrap();
    let (r, f) = h.realize(h.max().unwrap());
    assert_eq!(r.num_arcs(), fixtures::fig8().num_arcs());
    assert!(Host::new(fixtures::fig2()).unwrap().max().is_none());
    assert_eq!(f, identity(&r));
    let (e, _) = h.realize(h.edge_elem(3));
    assert!(is_isomorphic(&Graph::U(e), &Graph::U(edge())));
}

#[test]
fn order_edges_minimal_identity_maximal() {
    let h = Host::new(fixtures::fig9()).unwrap();
    let top = h.max().unwrap();
    for i in 0..h.len() {
        assert!(h.leq(i, top));
        if let EmbElement::Edge(_) = h.elem(i) {
            for j in 0..h.len() {
                assert_eq!(h.leq(j, i), i == j);
            }
        }
    }
}

#[test]
fn tree_unions_are_unique() {
    let h = Host::new(fixtures::path3()).unwrap();
    let g = h.ug();
    let region = |vs: &[&str]| {
        let mut m = 0u64;
        for v in vs {
            m |= 1 << g.find_vertex(v).unwrap();
        }
        h.full_region(m).unwrap()
    };
    let (xy, yz) = (region(&["x", "y"]), region(&["y", "z"]));
    assert_eq!(h.unions(xy, yz), vec![h.max().unwrap()]);
    let (x, y) = (region(&["x"]), region(&["y"]));
    assert!(h.vertex_disjoint(x, y));
    assert!(!h.vertex_disjoint(x, x));
    assert!(h.vertex_disjoint(h.edge_elem(0), h.edge_elem(0)));
}

#[test]
fn boundaries_of_edges_and_loops() {
    let g = fixtures::fig2();
    let h = Host::new(g.clone()).unwrap();
    for e in 0..g.num_edges() {
        assert_eq!(h.boundary(h.edge_elem(e)), &[2 * e, 2 * e + 1]);
    }
    let w = h.vertex_elem(g.find_vertex("w").unwrap());
    let five = g.find_arc("5").unwrap();
    assert!(h.boundary(w).contains(&five) && h.boundary(w).contains(&(five ^ 1)));
}

#[test]
fn edges_and_stars_are_structured() {
    let h = Host::new(fixtures::diamond()).unwrap();
    for i in 0..h.len() {
        if h.vertices_of(i).count_ones() <= 1 {
            assert!(h.is_structured(i).unwrap());
        }
    }
    assert!(Host::new(fixtures::fig2()).unwrap().is_structured(0).is_err());
}
