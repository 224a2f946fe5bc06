use std::sync::Arc;

use itertools::Itertools;

use graphcat::exec::Exec;
use graphcat::graph::generate::Bounds;
use graphcat::graph::{edge, star};
use graphcat::maps::Cat;
use graphcat::operad::{
    battery, decorations, evaluate, fork, free_cyclic, io_modular, operad_homs, parity_modular, terminal, valued,
    validate, Flavor, OperadError,
};
use graphcat::presheaf::{nerve, Site};
use graphcat::{EmbElement, Host};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn battery_is_valid() {
    let ops = battery();
    assert!(ops.len() >= 5);
    for p in &ops {
        validate(p).unwrap_or_else(|e| panic!("{}: {e}", p.name));
    }
}

#[test]
fn terminal_is_valid_in_every_flavor() {
    for f in Flavor::ALL {
        validate(&terminal(f, 4)).unwrap();
    }
}

#[test]
fn free_on_edge_and_star() {
    let c = free_cyclic(&edge(), 4).unwrap();
    assert_eq!(c.pres.ops.len(), 2);
    validate(&c.pres).unwrap();
    let c = free_cyclic(&star(2), 4).unwrap();
    assert_eq!(c.pres.ops.len(), 6);
    validate(&c.pres).unwrap();
}

#[test]
fn free_counts_are_boundary_orderings() {
    let g = fork();
    let c = free_cyclic(&g, 4).unwrap();
    validate(&c.pres).unwrap();
    let h = Host::new(g).unwrap();
    let expected: usize = (0..h.len())
        .map(|x| match h.elem(x) {
            EmbElement::Edge(_) => 2,
            _ => factorial(h.boundary(x).len()),
        })
        .sum();
    assert_eq!(c.pres.ops.len(), expected);
}

#[test]
fn augmentation_iff_empty_boundary() {
    for n in 0..4 {
        let c = free_cyclic(&star(n), 4).unwrap();
        let empty = c.pres.ops.iter().any(|o| o.arity() == 0);
        assert_eq!(empty, n == 0, "star {n}");
    }
}

#[test]
fn free_rejects_cycles() {
    let g = graphcat::fixtures::fig8();
    assert!(matches!(free_cyclic(&g, 4), Err(OperadError::NotATree)));
}

#[test]
fn non_associative_values_rejected() {
    // Commutative and unital on {0, 1, 2} but (1 1) 2 = 0 while 1 (1 2) = 1.
    let table = [[0, 1, 2], [1, 1, 0], [2, 0, 1]];
    let p = valued("skew", Flavor::AugCyclic, &["x"], &[0], 3, &["a", "b", "c"], 0, |a, b| table[a][b], |a| a);
    assert!(matches!(validate(&p), Err(OperadError::AssociativityViolated(_))), "{:?}", validate(&p));
}

#[test]
fn homs_out_of_an_edge_pick_an_arc() {
    for g in [star(3), fork()] {
        let c = free_cyclic(&g, 4).unwrap();
        assert_eq!(operad_homs(&edge(), &c.pres).unwrap().len(), g.num_arcs());
    }
}

#[test]
fn free_nerve_is_representable() {
    let site = Arc::new(Site::build_with(Cat::U0, Bounds::default(), Exec::default()).unwrap());
    for g in [site.len() - 1, site.len() / 2] {
        let c = free_cyclic(site.objects[g].ug(), 6).unwrap();
        let n = nerve(&c.pres, &site, Exec::default()).unwrap();
        for h in 0..site.len() {
            assert_eq!(n.size(h), site.homs[h][g].len(), "{} -> {}", site.name(h), site.name(g));
        }
    }
}

#[test]
fn nerves_are_functorial() {
    let site = Arc::new(Site::build_with(Cat::U, Bounds::default(), Exec::default()).unwrap());
    for p in [parity_modular(5), io_modular(5)] {
        nerve(&p, &site, Exec::default()).unwrap().validate(Exec::default()).unwrap();
    }
}

#[test]
fn evaluation_ignores_collapse_order() {
    let b = Bounds { max_vertices: 3, max_arity: 3, max_edges: 5 };
    let site = Site::build_with(Cat::U, b, Exec::default()).unwrap();
    let mut checked = 0;
    for p in [parity_modular(5), io_modular(5)] {
        for h in &site.objects {
            let Some(x) = h.max() else { continue };
            let EmbElement::Region { uncut, .. } = h.elem(x) else { continue };
            let zs: Vec<usize> = (0..64).filter(|e| uncut >> e & 1 == 1).collect();
            for d in decorations(&p, h).unwrap() {
                let first = evaluate(&p, h, &d, x, None).unwrap();
                for order in zs.iter().copied().permutations(zs.len()) {
                    let other = evaluate(&p, h, &d, x, Some(&order)).unwrap();
                    assert_eq!(p.reorder(&other, &first.tags).unwrap(), first.op);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn nerve_flavor_must_match_site() {
    let site = Arc::new(Site::build_with(Cat::Omega, Bounds::default(), Exec::default()).unwrap());
    assert!(nerve(&parity_modular(3), &site, Exec::default()).is_err());
}
