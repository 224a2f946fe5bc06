//! Small presentations used as test subjects.

use std::collections::HashMap;

use itertools::Itertools;

use super::{compose_tags, contract_tags, free_cyclic, ColorId, Flavor, OpId, Presentation};
use crate::graph::UGraph;

/// All profiles `(ports, n_in)` of arity at most `cap` allowed by the flavor.
fn profiles(flavor: Flavor, n_colors: usize, cap: usize) -> Vec<(Vec<ColorId>, usize)> {
    let mut out = Vec::new();
    let lo = if flavor == Flavor::Cyclic { 1 } else { 0 };
    for n in lo..=cap {
        for seq in (0..n).map(|_| 0..n_colors).multi_cartesian_product() {
            if flavor.directed() {
                for n_in in 0..=n {
                    out.push((seq.clone(), n_in));
                }
            } else {
                out.push((seq.clone(), n));
            }
        }
        if n == 0 {
            out.push((Vec::new(), 0));
        }
    }
    out.dedup();
    out
}

fn op_name(p: &Presentation, value: &str, ports: &[ColorId], n_in: usize) -> String {
    let c = |cs: &[ColorId]| cs.iter().map(|&c| p.colors[c].as_str()).join(",");
    if p.directed() {
        format!("{value}.{}~{}", c(&ports[..n_in]), c(&ports[n_in..]))
    } else {
        format!("{value}.{}", c(ports))
    }
}

/// An operad with one operation per profile and value, where composition
/// and contraction act on values through the given functions and the
/// symmetric groups act trivially on values.
pub fn valued(
    name: &str,
    flavor: Flavor,
    colors: &[&str],
    involution: &[ColorId],
    cap: usize,
    values: &[&str],
    unit: usize,
    compose: impl Fn(usize, usize) -> usize,
    contract: impl Fn(usize) -> usize,
) -> Presentation {
    let mut p = Presentation::new(name, flavor, colors, involution, cap);
    let mut index: HashMap<(Vec<ColorId>, usize, usize), OpId> = HashMap::new();
    for (ports, n_in) in profiles(flavor, colors.len(), cap) {
        for (v, label) in values.iter().enumerate() {
            let nm = op_name(&p, label, &ports, n_in);
            let k = p.add_op(&nm, &ports, n_in);
            index.insert((ports.clone(), n_in, v), k);
        }
    }
    let value_of: Vec<usize> = {
        let mut v = vec![0; p.ops.len()];
        for (&(_, _, val), &k) in &index {
            v[k] = val;
        }
        v
    };
    for c in 0..colors.len() {
        let ports = if p.directed() { vec![c, c] } else { vec![p.inv(c), c] };
        let n_in = if p.directed() { 1 } else { 2 };
        p.units[c] = Some(index[&(ports, n_in, unit)]);
    }
    let d = p.directed();
    for a in 0..p.ops.len() {
        for s in p.perms_of(a) {
            if s.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            let o = &p.ops[a];
            let ports: Vec<ColorId> = s.iter().map(|&i| o.ports[i]).collect();
            let r = index[&(ports, o.n_in, value_of[a])];
            p.act.insert((a, s), r);
        }
    }
    for a in 0..p.ops.len() {
        for b in 0..p.ops.len() {
            let (oa, ob) = (&p.ops[a], &p.ops[b]);
            let n = oa.arity() + ob.arity();
            if n < 2 || n - 2 > cap || (flavor == Flavor::Cyclic && n == 2) {
                continue;
            }
            for i in 0..oa.arity() {
                for j in 0..ob.arity() {
                    if !p.composable(a, i, b, j) {
                        continue;
                    }
                    let (ports, n_in) = compose_tags(&oa.ports, oa.n_in, i, &ob.ports, ob.n_in, j, d);
                    let r = index[&(ports, n_in, compose(value_of[a], value_of[b]))];
                    p.compose.insert((a, i, b, j), r);
                }
            }
        }
    }
    if flavor.has_contraction() {
        for a in 0..p.ops.len() {
            let n = p.ops[a].arity();
            for i in 0..n {
                for j in 0..n {
                    if !p.contractible(a, i, j) {
                        continue;
                    }
                    let o = &p.ops[a];
                    let (ports, n_in) = contract_tags(&o.ports, o.n_in, i, j, d);
                    let r = index[&(ports, n_in, contract(value_of[a]))];
                    p.contract.insert((a, i, j), r);
                }
            }
        }
    }
    p
}

/// One operation for every profile over a single self-dual color.
pub fn terminal(flavor: Flavor, cap: usize) -> Presentation {
    valued(
        &format!("terminal-{}", flavor.tag()),
        flavor,
        &["x"],
        &[0],
        cap,
        &["t"],
        0,
        |_, _| 0,
        |_| 0,
    )
}

/// Terminal modular operad on two colors exchanged by the involution.
pub fn io_modular(cap: usize) -> Presentation {
    valued("io-modular", Flavor::Modular, &["i", "o"], &[1, 0], cap, &["t"], 0, |_, _| 0, |_| 0)
}

/// Two operations per profile, counting loops and decorations mod 2.
pub fn parity_modular(cap: usize) -> Presentation {
    valued(
        "parity-modular",
        Flavor::Modular,
        &["x"],
        &[0],
        cap,
        &["even", "odd"],
        0,
        |a, b| a ^ b,
        |a| a ^ 1,
    )
}

/// A category with objects `x, y, z`, arrows `f, g: x -> y`, `s: y -> z`
/// and `h = s f = s g`, as a dioperad with unary operations only.
pub fn small_category() -> Presentation {
    let mut p = Presentation::new("category", Flavor::Dioperad, &["x", "y", "z"], &[0, 1, 2], 2);
    let arrows = [
        ("id_x", 0, 0),
        ("id_y", 1, 1),
        ("id_z", 2, 2),
        ("f", 0, 1),
        ("g", 0, 1),
        ("s", 1, 2),
        ("h", 0, 2),
    ];
    for (n, a, b) in arrows {
        p.add_op(n, &[a, b], 1);
    }
    for c in 0..3 {
        p.units[c] = Some(c);
    }
    let find = |n: &str| arrows.iter().position(|a| a.0 == n).unwrap();
    // `second ∘ first`
    let comp = |second: usize, first: usize| -> Option<usize> {
        let (s, f) = (arrows[second], arrows[first]);
        if f.2 != s.1 {
            return None;
        }
        if second < 3 {
            return Some(first);
        }
        if first < 3 {
            return Some(second);
        }
        match (s.0, f.0) {
            ("s", "f") | ("s", "g") => Some(find("h")),
            _ => None,
        }
    };
    for a in 0..arrows.len() {
        for b in 0..arrows.len() {
            if let Some(r) = comp(a, b) {
                p.compose.insert((a, 0, b, 1), r);
            }
        }
    }
    p
}

/// A tree with a vertex of arity three next to one of arity two.
pub fn fork() -> UGraph {
    UGraph::from_names(
        "fork",
        &[("a", "a†"), ("b", "b†"), ("c", "c†"), ("d", "d†")],
        &[("u", &["a†", "b", "c"]), ("v", &["b†", "d"])],
    )
    .expect("fork")
}

/// The presentations whose nerves are checked, with arity caps large
/// enough for every intermediate result on the default sites.
pub fn battery() -> Vec<Presentation> {
    vec![
        terminal(Flavor::Modular, 5),
        terminal(Flavor::AugCyclic, 5),
        terminal(Flavor::Cyclic, 5),
        io_modular(5),
        parity_modular(5),
        free_cyclic(&fork(), 4).expect("fork is a tree").pres,
        terminal(Flavor::Dioperad, 5),
        small_category(),
        terminal(Flavor::Wheeled, 5),
    ]
}
