use std::sync::{Arc, OnceLock};

use graphcat::exec::Exec;
use graphcat::fixtures;
use graphcat::graph::generate::Bounds;
use graphcat::graph::iso::is_isomorphic;
use graphcat::graph::{dedge, dstar, edge, linear, star, Graph};
use graphcat::maps::Cat;
use graphcat::presheaf::{
    canonical_orientation, elementary_over, elementary_sieve, is_segal, kan_check, left_kan_formula, orient,
    orientation_presheaf, paired_sites, representable, restrict, root, segal_map, terminal, Functor, Site,
};

fn o0_u0() -> &'static (Arc<Site>, Arc<Site>) {
    static SITES: OnceLock<(Arc<Site>, Arc<Site>)> = OnceLock::new();
    SITES.get_or_init(|| paired_sites(Functor::O0ToU0, Bounds::default(), Exec::default()).unwrap())
}

fn site(cat: Cat) -> Arc<Site> {
    Arc::new(Site::build_with(cat, Bounds::default(), Exec::default()).unwrap())
}

#[test]
fn elementary_cover_has_one_piece_per_vertex_and_edge() {
    let s = site(Cat::U0);
    for g in 0..s.len() {
        let el = elementary_over(&s, g).unwrap();
        let gr = s.objects[g].graph();
        assert_eq!(el.objects.len(), gr.num_vertices() + gr.num_edges());
        assert_eq!((0..el.objects.len()).filter(|&i| el.is_star(&s, i)).count(), gr.num_vertices());
    }
}

#[test]
fn terminal_is_segal_and_sieve_is_not() {
    for cat in [Cat::U0, Cat::UCyc, Cat::Omega] {
        let s = site(cat);
        assert!(is_segal(&terminal(&s), Exec::default()).unwrap().ok());
        let rep = is_segal(&elementary_sieve(&s), Exec::default()).unwrap();
        assert!(!rep.ok());
        assert!(rep.failures.iter().all(|f| f.1 == 0 && f.2 == 1));
    }
}

#[test]
fn segal_map_on_delta_splits_chains() {
    let s = site(Cat::Delta);
    let l2 = s.find(&Graph::D(linear(2))).unwrap().0;
    let l1 = s.find(&Graph::D(linear(1))).unwrap().0;
    // Maps into L1 from L2 are determined by their restrictions to the two
    // vertices and three edges.
    let m = segal_map(&representable(&s, l1), l2).unwrap();
    assert!(m.bijective);
    assert_eq!(m.images.len(), s.homs[l2][l1].len());
}

#[test]
fn orientation_presheaf_counts_and_is_segal() {
    for cat in [Cat::U, Cat::U0] {
        let s = site(cat);
        let o = orientation_presheaf(&s).unwrap();
        o.validate(Exec::default()).unwrap();
        for g in 0..s.len() {
            assert_eq!(o.size(g), 1 << s.objects[g].graph().num_edges());
        }
        assert!(is_segal(&o, Exec::default()).unwrap().ok());
    }
    assert!(orientation_presheaf(&site(Cat::Omega)).is_err());
}

#[test]
fn orienting_an_edge() {
    let d = orient(&edge(), 0);
    assert!(is_isomorphic(&Graph::D(d), &Graph::D(dedge())));
    assert!(is_isomorphic(&Graph::D(orient(&edge(), 1)), &Graph::D(dedge())));
}

#[test]
fn canonical_orientation_recovers_the_graph() {
    for d in [fixtures::diamond(), linear(3), dstar(2, 3), dstar(1, 2)] {
        let back = orient(d.underlying(), canonical_orientation(&d));
        assert!(is_isomorphic(&Graph::D(back), &Graph::D(d.clone())), "{}", d.name());
    }
}

#[test]
fn rooting_trees() {
    for n in 0..4 {
        let u = linear(n).underlying().clone();
        let lin = u
            .boundary()
            .into_iter()
            .filter(|&r| is_isomorphic(&Graph::D(orient(&u, root(&u, r).unwrap())), &Graph::D(linear(n))))
            .count();
        assert_eq!(lin, 2, "L{n}");
    }
    let s = star(3);
    for r in s.boundary() {
        assert!(is_isomorphic(&Graph::D(orient(&s, root(&s, r).unwrap())), &Graph::D(dstar(2, 1))));
    }
    let p = fixtures::path3();
    let inner = (0..p.num_arcs()).find(|&a| !p.boundary().contains(&a)).unwrap();
    assert!(root(&p, inner).is_err());
}

#[test]
fn restricted_orientations() {
    let (c, d) = o0_u0();
    let o = orientation_presheaf(d).unwrap();
    let r = restrict(Functor::O0ToU0, &o, c, Exec::default()).unwrap();
    r.validate(Exec::default()).unwrap();
    for h in 0..c.len() {
        assert_eq!(r.size(h), 1 << c.objects[h].graph().num_edges());
    }
}

#[test]
fn kan_extension_of_the_point() {
    let (c, d) = o0_u0();
    let t = terminal(c);
    let f = left_kan_formula(Functor::O0ToU0, &t, d, Exec::default()).unwrap();
    let e = d.find(&Graph::U(edge())).unwrap().0;
    assert_eq!(f.presheaf.size(e), 2);
    let s3 = d.find(&Graph::U(star(3))).unwrap().0;
    assert_eq!(f.presheaf.size(s3), 8);
    assert_eq!(f.presheaf.action, orientation_presheaf(d).unwrap().action);
    let checks = kan_check(Functor::O0ToU0, &[t], d, Exec::default()).unwrap();
    assert!(checks[0].ok(), "{:?}", checks[0]);
    assert_eq!(checks[0].orientation_match, Some(true));
}

#[test]
fn rooted_summands_on_trees() {
    let (c, d) = paired_sites(Functor::OmegaToUCyc, Bounds::default(), Exec::default()).unwrap();
    let f = left_kan_formula(Functor::OmegaToUCyc, &terminal(&c), &d, Exec::default()).unwrap();
    for g in 0..d.len() {
        assert_eq!(f.presheaf.size(g), d.objects[g].ug().boundary().len());
    }
}

#[test]
fn functor_tags_parse() {
    for f in Functor::ALL {
        assert_eq!(Functor::parse(f.tag()), Some(f));
        assert_eq!(Functor::parse(&f.tag().replace('-', "-to-")), Some(f));
    }
    assert_eq!(Functor::parse("U-O"), None);
}
