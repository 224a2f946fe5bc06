use graphcat::fixtures;
use graphcat::graph::{self, iso, shape, subgraph, Graph, GraphError};
use graphcat::Host;

fn names(g: &graphcat::UGraph, arcs: &[usize]) -> Vec<String> {
    let mut v: Vec<String> = arcs.iter().map(|&a| g.arc_name(a).to_string()).collect();
    v.sort();
    v
}

fn sorted(xs: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

#[test]
fn fig2_boundaries() {
    let g = fixtures::fig2();
    assert_eq!(names(&g, &g.boundary()), sorted(&["1", "2", "2†", "3", "7†", "9†"]));
    let h = Host::new(g.clone()).unwrap();
    let w = g.find_vertex("w").unwrap();
    assert_eq!(names(&g, h.boundary(h.vertex_elem(w))), sorted(&["4", "6†", "5", "5†"]));
    assert!(!shape(&Graph::U(g.clone())).is_tree);
}

#[test]
fn fig2_subgraphs() {
    let g = fixtures::fig2();
    let w = g.find_vertex("w").unwrap();
    let e = |n: &str| g.find_arc(n).unwrap() / 2;
    let s = subgraph(&g, &[e("4"), e("5"), e("6")], &[w]).unwrap();
    assert!(!shape(&Graph::U(s.graph.clone())).is_star);
    assert!(matches!(subgraph(&g, &[e("4"), e("6")], &[w]), Err(GraphError::NotClosed(_))));
    assert!(matches!(subgraph(&g, &[], &[]), Err(GraphError::EmptySubgraph)));
}

#[test]
fn emb_counts() {
    assert_eq!(Host::new(graph::edge()).unwrap().len(), 1);
    for n in 0..6 {
        assert_eq!(Host::new(graph::star(n)).unwrap().len(), n + 1);
    }
    assert_eq!(Host::new(fixtures::loop_two_legs()).unwrap().len(), 5);
}

#[test]
fn union_counts() {
    let h = Host::new(fixtures::fig8()).unwrap();
    let u = h.unions(h.vertex_elem(0), h.vertex_elem(1));
    assert_eq!(u.len(), 3);
    assert!(u.contains(&h.max().unwrap()));
    let h = Host::new(fixtures::fig9()).unwrap();
    let v = h.vertex_elem(0);
    assert_eq!(h.unions(v, v).len(), 4);
}

#[test]
fn self_paired_arc_rejected() {
    let r = graphcat::UGraph::from_names("bad", &[("a", "a")], &[]);
    assert_eq!(r.unwrap_err(), GraphError::NotFixpointFree("a".into()));
}

#[test]
fn edge_has_no_vertices() {
    let e = graph::edge();
    assert_eq!((e.num_vertices(), e.num_edges()), (0, 1));
    assert_eq!(e.boundary().len(), 2);
    assert!(shape(&Graph::U(e)).is_edge);
}

#[test]
fn linear_inputs_and_outputs() {
    let l4 = graph::linear(4);
    assert_eq!(l4.graph_inputs(), vec![0]);
    assert_eq!(l4.graph_outputs(), vec![4]);
    let d = graph::dedge();
    assert_eq!(d.graph_inputs(), d.graph_outputs());
    assert!(iso::is_isomorphic(&Graph::D(graph::linear(0)), &Graph::D(d)));
    let s = shape(&Graph::D(graph::linear(3)));
    assert!(s.is_tree && s.is_linear && s.is_acyclic == Some(true));
}

#[test]
fn input_reused_rejected() {
    let r = graphcat::DGraph::from_names("bad", &["e"], &[("u", &["e"], &[]), ("v", &["e"], &[])]);
    assert!(matches!(r, Err(GraphError::EdgeInputReused(_))), "{r:?}");
}

#[test]
fn stars() {
    let s = graph::dstar(4, 2);
    assert_eq!(s.num_vertices(), 1);
    assert_eq!((s.ins(0).len(), s.outs(0).len()), (4, 2));
    let s0 = graph::star(0);
    assert_eq!((s0.num_vertices(), s0.num_arcs()), (1, 0));
    for (n, m) in [(1, 1), (2, 3), (0, 2)] {
        let under = Graph::U(graph::dstar(n, m).underlying().clone());
        assert!(iso::is_isomorphic(&under, &Graph::U(graph::star(n + m))));
    }
    let l1 = Graph::U(graph::linear(1).underlying().clone());
    assert!(iso::is_isomorphic(&l1, &Graph::U(graph::star(2))));
    assert!(iso::find_iso(&Graph::U(graph::star(2)), &Graph::U(graph::edge())).is_none());
}

#[test]
fn diamond_shape() {
    let s = shape(&Graph::D(fixtures::diamond()));
    assert!(s.is_connected && s.is_acyclic == Some(true));
    assert!(!s.is_simply_connected && !s.is_tree);
}

#[test]
fn iso_with_itself() {
    for g in [Graph::U(fixtures::fig2()), Graph::D(fixtures::diamond())] {
        let i = iso::find_iso(&g, &g).unwrap();
        assert_eq!(i.vertices.len(), g.num_vertices());
        assert!(iso::is_isomorphic(&g, &iso::canonical_form(&g)));
    }
}

mod props {
    use super::*;
    use graphcat::graph::generate::{connected_dgraphs, connected_ugraphs, Bounds};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn pool() -> &'static Vec<Graph> {
        static POOL: OnceLock<Vec<Graph>> = OnceLock::new();
        POOL.get_or_init(|| {
            let b = Bounds { max_vertices: 3, max_arity: 4, max_edges: 5 };
            connected_ugraphs(&b)
                .into_iter()
                .map(Graph::U)
                .chain(connected_dgraphs(&b).into_iter().map(Graph::D))
                .collect()
        })
    }

    fn shuffled(n: usize, seed: u64) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        let mut s = seed | 1;
        for i in (1..n).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            v.swap(i, (s % (i as u64 + 1)) as usize);
        }
        v
    }

    proptest! {
        #[test]
        fn relabelling_keeps_certificate(i in 0usize..10_000, seed in any::<u64>(), flips in any::<u64>(), rot in 0usize..4) {
            let g = &pool()[i % pool().len()];
            let ep = shuffled(g.num_edges(), seed);
            let vp = shuffled(g.num_vertices(), seed.rotate_left(17));
            let flip: Vec<bool> = (0..g.num_edges()).map(|e| !g.is_directed() && flips >> e & 1 == 1).collect();
            let h = iso::relabel(g, &ep, &flip, &vp, rot);
            prop_assert_eq!(iso::certificate(g), iso::certificate(&h));
            prop_assert!(iso::find_iso(g, &h).is_some());
            let c = iso::canonical_form(&h);
            prop_assert_eq!(iso::certificate(&c), iso::certificate(g));
        }

        #[test]
        fn distinct_pool_graphs_are_not_isomorphic(i in 0usize..10_000, j in 0usize..10_000) {
            let (g, h) = (&pool()[i % pool().len()], &pool()[j % pool().len()]);
            prop_assert_eq!(iso::is_isomorphic(g, h), i % pool().len() == j % pool().len());
        }
    }
}
