use std::path::PathBuf;
use std::sync::Arc;

use graphcat::exec::Exec;
use graphcat::graph::generate::{connected_dgraphs, connected_ugraphs, Bounds};
use graphcat::maps::{enumerate_graph_maps, validate, Cat, DEFAULT_BUDGET};
use graphcat::presheaf::{terminal, Site};
use graphcat::text::{
    parse_document, parse_elem, resolve_map, resolve_presheaf, write_graph, write_map, write_map_table, write_presheaf,
    ElemText, TextError,
};
use graphcat::{fixtures, Host};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

const DOCS: &[&str] = &[
    "fig2.graph",
    "fig8.graph",
    "fig9.graph",
    "diamond.graph",
    "path3.graph",
    "star3.graph",
    "dstar1-2.graph",
    "maps.txt",
    "cycle_maps.txt",
    "operads.txt",
    "presheaf.txt",
];

#[test]
fn fixtures_round_trip() {
    for name in DOCS {
        let doc = parse_document(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let text = doc.to_text();
        let again = parse_document(&text).unwrap_or_else(|e| panic!("{name} rewritten: {e}\n{text}"));
        assert_eq!(again.graphs, doc.graphs, "{name}");
        assert_eq!(again.maps, doc.maps, "{name}");
        assert_eq!(again.presheaves, doc.presheaves, "{name}");
        assert_eq!(again.to_text(), text, "{name}");
    }
}

#[test]
fn figure_fixtures_match_builders() {
    let doc = parse_document(&fixture("fig2.graph")).unwrap();
    assert_eq!(doc.graphs[0], graphcat::Graph::U(fixtures::fig2()));
    let doc = parse_document(&fixture("diamond.graph")).unwrap();
    assert_eq!(doc.graphs[0], graphcat::Graph::D(fixtures::diamond()));
}

#[test]
fn broken_fixture_is_rejected() {
    assert!(matches!(parse_document(&fixture("broken.graph")), Err(TextError::Graph { .. })));
}

#[test]
fn fixture_maps_are_valid() {
    for name in ["maps.txt", "cycle_maps.txt"] {
        let doc = parse_document(&fixture(name)).unwrap();
        for m in &doc.maps {
            let h = Arc::new(Host::new(doc.graph(&m.source).unwrap().clone()).unwrap());
            let g = Arc::new(Host::new(doc.graph(&m.target).unwrap().clone()).unwrap());
            let gm = resolve_map(m, &h, &g).unwrap_or_else(|e| panic!("{}: {e}", m.name));
            validate(&gm).unwrap();
        }
    }
}

#[test]
fn written_maps_resolve_to_themselves() {
    let s2 = Arc::new(Host::new(graphcat::graph::star(2)).unwrap());
    let f8 = Arc::new(Host::new(fixtures::fig8()).unwrap());
    let maps = enumerate_graph_maps(&s2, &f8, DEFAULT_BUDGET).unwrap();
    assert!(!maps.is_empty());
    for (i, m) in maps.iter().enumerate() {
        for text in [write_map(m, "f", Some("U")), write_map_table(m, "f", None)] {
            let src = format!("{}\n{}\n{}", write_graph(s2.graph()), write_graph(f8.graph()), text);
            let doc = parse_document(&src).unwrap_or_else(|e| panic!("map {i}: {e}\n{src}"));
            assert_eq!(&resolve_map(&doc.maps[0], &s2, &f8).unwrap(), m);
        }
    }
}

#[test]
fn presheaf_text_round_trip() {
    let b = Bounds { max_vertices: 2, max_arity: 2, max_edges: 3 };
    let site = Arc::new(Site::build_with(Cat::Omega, b, Exec::default()).unwrap());
    let doc = parse_document(&fixture("presheaf.txt")).unwrap();
    let x = resolve_presheaf(&doc.presheaves[0], &site).unwrap();
    assert_eq!(x.action, terminal(&site).action);
    let again = parse_document(&write_presheaf(&x)).unwrap();
    assert_eq!(resolve_presheaf(&again.presheaves[0], &site).unwrap().action, x.action);
}

#[test]
fn elements_parse() {
    assert_eq!(parse_elem("emb {edge a}").unwrap(), ElemText::Edge("a".into()));
    assert_eq!(
        parse_elem("{vertices x y; uncut b}").unwrap(),
        ElemText::Region { vertices: vec!["x".into(), "y".into()], uncut: vec!["b".into()] }
    );
    assert_eq!(parse_elem("{vertices v}").unwrap(), ElemText::Region { vertices: vec!["v".into()], uncut: vec![] });
    let odd = ElemText::Edge("in".into());
    assert_eq!(parse_elem(&odd.to_string()).unwrap(), odd);
    assert!(parse_elem("{edge}").is_err());
}

#[test]
fn every_element_prints_and_parses() {
    for g in [fixtures::fig2(), fixtures::fig9()] {
        let h = Host::new(g).unwrap();
        for i in 0..h.len() {
            let t = ElemText::of(&h, i);
            assert_eq!(parse_elem(&t.to_string()).unwrap().resolve(&h).unwrap(), i);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn generated_graphs_round_trip(i in 0usize..10_000) {
        let b = Bounds { max_vertices: 3, max_arity: 3, max_edges: 4 };
        let pool: Vec<graphcat::Graph> = connected_ugraphs(&b)
            .into_iter()
            .map(graphcat::Graph::U)
            .chain(connected_dgraphs(&b).into_iter().map(graphcat::Graph::D))
            .collect();
        let g = &pool[i % pool.len()];
        let doc = parse_document(&write_graph(g)).unwrap();
        prop_assert_eq!(&doc.graphs[0], g);
    }
}
