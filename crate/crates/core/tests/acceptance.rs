//! One line per acceptance criterion; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use graphcat::exec::Exec;
use graphcat::fixtures;
use graphcat::graph::generate::{connected_dgraphs, connected_ugraphs, Bounds};
use graphcat::graph::{shape, Graph};
use graphcat::maps::Cat;
use graphcat::operad::{battery, small_category, Flavor, Presentation};
use graphcat::oracle::{emb_oracle, factorization_check, operad_bridge, structured_oracle, tree_map_sweep, Domains};
use graphcat::presheaf::{
    elementary_sieve, elements_equivalence_check, is_segal, kan_check, nerve, orientation_presheaf, paired_sites,
    representable, segal_transfer_check, terminal, FinitePresheaf, Functor, Site,
};
use graphcat::text::ElemText;
use graphcat::{Host, UGraph};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn exec() -> Exec {
    Exec::default()
}

fn names(g: &UGraph, arcs: &[usize]) -> Vec<String> {
    let mut v: Vec<String> = arcs.iter().map(|&a| g.arc_name(a).to_string()).collect();
    v.sort();
    v
}

fn sorted(xs: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = xs.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn boundaries() -> Outcome {
    let g = fixtures::fig2();
    let h = Host::new(g.clone()).map_err(err)?;
    let dg = names(&g, &g.boundary());
    check(dg == sorted(&["1", "2", "2†", "3", "7†", "9†"]), format!("boundary of G is {dg:?}"))?;
    let w = ElemText::Region { vertices: vec!["w".into()], uncut: vec![] }.resolve(&h)?;
    let dw = names(&g, h.boundary(w));
    check(dw == sorted(&["4", "6†", "5", "5†"]), format!("boundary of the w inclusion is {dw:?}"))?;
    Ok(format!("∂G = {{{}}}, ∂ι_w = {{{}}}", dg.join(", "), dw.join(", ")))
}

fn unions() -> Outcome {
    let h = Host::new(fixtures::fig8()).map_err(err)?;
    let u = h.unions(h.vertex_elem(0), h.vertex_elem(1));
    check(u.len() == 3, format!("fig8 has {} unions", u.len()))?;
    let whole = h.max().ok_or("fig8 has no greatest element")?;
    check(u.contains(&whole), "identity is not among the fig8 unions")?;
    let h9 = Host::new(fixtures::fig9()).map_err(err)?;
    let v = h9.vertex_elem(0);
    let n9 = h9.unions(v, v).len();
    check(n9 == 4, format!("fig9 self-union count {n9}"))?;
    Ok(format!("fig8: {} unions with the identity, fig9: {n9}", u.len()))
}

fn emb_encoding() -> Outcome {
    let b = Bounds { max_vertices: 3, max_arity: 12, max_edges: 6 };
    let us = connected_ugraphs(&b);
    let ds = connected_dgraphs(&b);
    let mut doms = Domains::default();
    let (mut elements, mut bad) = (0, Vec::new());
    for g in us.into_iter().map(Graph::U).chain(ds.into_iter().map(Graph::D)) {
        let r = emb_oracle(&g, &mut doms).map_err(err)?;
        elements += r.elements;
        if !r.ok() {
            bad.push(format!("{}: {}", r.host, r.discrepancies.join("; ")));
        }
    }
    check(bad.is_empty(), format!("{} graphs disagree, first {}", bad.len(), bad.first().cloned().unwrap_or_default()))?;
    Ok(format!("{elements} elements agree with brute force"))
}

fn tree_maps() -> Outcome {
    let b = Bounds { max_vertices: 4, max_arity: 3, max_edges: 9 };
    let trees: Vec<Arc<Host>> = connected_ugraphs(&b)
        .into_iter()
        .map(Graph::U)
        .filter(|g| shape(g).is_tree)
        .map(|g| Host::new(g).map(Arc::new))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let r = tree_map_sweep(&trees, exec()).map_err(err)?;
    check(r.ok(), format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))?;
    check(r.tree_maps == r.graph_maps && r.tree_maps > 0, "extension count differs from brute force")?;
    Ok(format!(
        "{} trees, {} pairs, {} maps, {} intersections",
        trees.len(),
        r.pairs,
        r.tree_maps,
        r.intersections
    ))
}

fn delta_bounds() -> Bounds {
    Bounds { max_vertices: 4, ..Bounds::default() }
}

fn factorization() -> Outcome {
    let mut out = Vec::new();
    for cat in Cat::ALL {
        let b = if cat == Cat::Delta { delta_bounds() } else { Bounds::default() };
        let s = Site::build_with(cat, b, exec()).map_err(err)?;
        let r = factorization_check(&s, exec()).map_err(err)?;
        check(r.ok(), format!("{}: {:?}", r.category, r.failures.first()))?;
        out.push(format!("{} {}", r.category, r.morphisms));
    }
    Ok(format!("maps checked: {}", out.join(", ")))
}

fn bridge() -> Outcome {
    let s = Site::build_with(Cat::U0, Bounds::default(), exec()).map_err(err)?;
    let r = operad_bridge(&s, exec()).map_err(err)?;
    check(r.ok(), format!("{:?}", r.failures.first()))?;
    check(r.homs > 0, "no maps compared")?;
    Ok(format!("{} tree pairs, {} maps matched", r.pairs, r.homs))
}

/// Composable chains of length `n` in a one-colored-per-object category
/// presentation, counted from its unary operations.
fn chains(p: &Presentation, n: usize) -> usize {
    let k = p.colors.len();
    let mut a = vec![vec![0usize; k]; k];
    for op in &p.ops {
        if op.arity() == 2 && op.n_in == 1 {
            a[op.ports[0]][op.ports[1]] += 1;
        }
    }
    let mut v = vec![1usize; k];
    for _ in 0..n {
        v = (0..k).map(|i| (0..k).map(|j| a[i][j] * v[j]).sum()).collect();
    }
    v.iter().sum()
}

fn nerves() -> Outcome {
    let ops = battery();
    let flavors: std::collections::BTreeSet<&str> = ops.iter().map(|p| p.flavor.tag()).collect();
    check(ops.len() >= 5 && flavors.len() >= 4, "battery too small")?;
    let mut sites: std::collections::HashMap<Cat, Arc<Site>> = Default::default();
    for p in &ops {
        let cat = p.flavor.site();
        let s = match sites.get(&cat) {
            Some(s) => s.clone(),
            None => {
                let s = Arc::new(Site::build_with(cat, Bounds::default(), exec()).map_err(err)?);
                sites.insert(cat, s.clone());
                s
            }
        };
        let n = nerve(p, &s, exec()).map_err(err)?;
        let r = is_segal(&n, exec()).map_err(err)?;
        check(r.ok(), format!("N({}) fails at {:?}", p.name, r.failures.first()))?;
    }
    let cat = small_category();
    check(cat.flavor == Flavor::Dioperad, "category presentation is not directed")?;
    let delta = Arc::new(Site::build_with(Cat::Delta, delta_bounds(), exec()).map_err(err)?);
    let n = nerve(&cat, &delta, exec()).map_err(err)?;
    let r = is_segal(&n, exec()).map_err(err)?;
    check(r.ok(), format!("N(category) on Delta fails at {:?}", r.failures.first()))?;
    for a in 0..delta.len() {
        let k = delta.objects[a].graph().num_vertices();
        check(n.size(a) == chains(&cat, k), format!("|N_{k}| = {} but {} chains", n.size(a), chains(&cat, k)))?;
    }
    Ok(format!(
        "{} operads over {} flavors Segal; Delta nerve Segal with chain counts for n <= {}",
        ops.len(),
        flavors.len(),
        delta_bounds().max_vertices
    ))
}

fn kan() -> Outcome {
    let mut out = Vec::new();
    for f in Functor::ALL {
        let (c, d) = paired_sites(f, Bounds::default(), exec()).map_err(err)?;
        let mut zs: Vec<FinitePresheaf> = vec![terminal(&c), elementary_sieve(&c)];
        for a in c.elementary().into_iter().chain([c.len() - 1]) {
            zs.push(representable(&c, a));
        }
        // Omega objects are trees, so any directed flavor decorates them.
        let fits = |p: &&Presentation| p.flavor.site() == c.cat || (c.cat == Cat::Omega && p.flavor == Flavor::Dioperad);
        for p in battery().iter().filter(fits) {
            zs.push(nerve(p, &c, exec()).map_err(err)?);
        }
        let reps = kan_check(f, &zs, &d, exec()).map_err(err)?;
        for r in &reps {
            check(r.ok(), format!("{} {}: {:?}", r.functor, r.presheaf, r.bijection_failures.first()))?;
        }
        if f != Functor::OmegaToUCyc {
            check(reps[0].orientation_match == Some(true), format!("{}: f_!(*) is not the orientation presheaf", f.tag()))?;
        }

        let ys: Vec<FinitePresheaf> = zs.iter().filter(|z| z.name != "elementary-sieve").cloned().collect();
        let mut xs = vec![terminal(&d), elementary_sieve(&d)];
        if f != Functor::OmegaToUCyc {
            xs.push(orientation_presheaf(&d).map_err(err)?);
        }
        for p in battery().iter().filter(|p| !p.directed() && p.flavor.site() == d.cat) {
            xs.push(nerve(p, &d, exec()).map_err(err)?);
        }
        let t = segal_transfer_check(f, &ys, &xs, &c, &d, exec()).map_err(err)?;
        check(t.ok(), format!("{}: transfer {:?} {:?}", f.tag(), t.pushed, t.restricted))?;
        check(t.pushed.iter().any(|p| p.1), format!("{}: no Segal input to push", f.tag()))?;
        check(
            t.restricted.iter().any(|x| x.1) && t.restricted.iter().any(|x| !x.1),
            format!("{}: restriction not tested in both directions", f.tag()),
        )?;
        out.push(format!("{} ({} presheaves, {} objects)", f.tag(), reps.len(), d.len()));
    }
    Ok(out.join("; "))
}

fn ssb() -> Outcome {
    let s = Site::build_with(Cat::O, Bounds::default(), exec()).map_err(err)?;
    let mut trees = 0;
    for h in &s.objects {
        if !shape(h.graph()).is_tree {
            continue;
        }
        trees += 1;
        let st = h.structured().map_err(err)?;
        check(st.len() == h.len(), format!("{}: {} of {} structured", h.graph().name(), st.len(), h.len()))?;
        for x in 0..h.len() {
            check(structured_oracle(h, x) == Some(true), format!("{}: oracle rejects element {x}", h.graph().name()))?;
        }
    }
    check(trees > 0, "no tree objects")?;
    let d = Host::new(fixtures::diamond()).map_err(err)?;
    let cut = ElemText::Region { vertices: vec!["u".into(), "v".into()], uncut: vec!["p".into()] }.resolve(&d)?;
    check(!d.is_structured(cut).map_err(err)?, "diamond one-edge region accepted")?;
    check(structured_oracle(&d, cut) == Some(false), "oracle accepts the diamond one-edge region")?;
    Ok(format!("{trees} tree objects; diamond cut region rejected"))
}

fn elements() -> Outcome {
    let mut out = Vec::new();
    for f in [Functor::OToU, Functor::O0ToU0] {
        let (c, d) = paired_sites(f, Bounds::default(), exec()).map_err(err)?;
        let r = elements_equivalence_check(f, &c, &d, exec()).map_err(err)?;
        check(
            r.ok(),
            format!("{}: {:?} {:?}", r.functor, r.object_failures.first(), r.hom_failures.first()),
        )?;
        out.push(format!("{} {} orbits, {} hom pairs", r.functor, r.orbits, r.hom_pairs));
    }
    Ok(out.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("boundaries", boundaries),
        ("unions", unions),
        ("emb encoding", emb_encoding),
        ("tree maps", tree_maps),
        ("factorization", factorization),
        ("operad bridge", bridge),
        ("nerves are Segal", nerves),
        ("left Kan extension", kan),
        ("structured subgraphs", ssb),
        ("category of elements", elements),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
