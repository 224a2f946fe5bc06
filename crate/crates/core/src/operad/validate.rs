//! Checks the axioms of a presentation by direct table lookups.

use std::collections::HashMap;

use super::eval::collapse;
use super::{block_perms, compose_tags, contract_tags, match_perm, Blob, ColorId, Flavor, OpId, OperadError, Perm, Presentation};
use crate::exec::{self, Exec};

/// Runs every check, stopping at the first failure.
pub fn validate(p: &Presentation) -> Result<(), OperadError> {
    validate_with(p, Exec::default())
}

pub fn validate_with(p: &Presentation, exec: Exec) -> Result<(), OperadError> {
    structure(p)?;
    units(p)?;
    entries(p)?;
    actions(p)?;
    completeness(p)?;
    equivariance(p)?;
    identities(p)?;
    associativity(p, exec)
}

fn structure(p: &Presentation) -> Result<(), OperadError> {
    let nc = p.colors.len();
    if p.involution.len() != nc || p.units.len() != nc {
        return Err(OperadError::Unknown("color tables have the wrong length".into()));
    }
    for c in 0..nc {
        if p.involution[c] >= nc || p.involution[p.involution[c]] != c {
            return Err(OperadError::BadInvolution(p.colors[c].clone()));
        }
        if p.directed() && p.involution[c] != c {
            return Err(OperadError::DirectedInvolution);
        }
    }
    let mut counts: HashMap<(Vec<ColorId>, usize), usize> = HashMap::new();
    for (k, o) in p.ops.iter().enumerate() {
        if o.ports.iter().any(|&c| c >= nc) || o.n_in > o.arity() {
            return Err(OperadError::Unknown(o.name.clone()));
        }
        if !p.directed() && o.n_in != o.arity() {
            return Err(OperadError::Unknown(o.name.clone()));
        }
        if o.arity() > p.cap {
            return Err(OperadError::ArityCapExceeded(o.name.clone()));
        }
        if p.flavor == Flavor::Cyclic && o.arity() == 0 {
            return Err(OperadError::AugmentationForbidden(o.name.clone()));
        }
        let n = counts.entry((o.ports.clone(), o.n_in)).or_default();
        *n += 1;
        if *n > p.profile_limit {
            return Err(OperadError::OpSetTooLarge(p.profile_string(k)));
        }
    }
    Ok(())
}

fn units(p: &Presentation) -> Result<(), OperadError> {
    for c in 0..p.colors.len() {
        let u = p.units[c].ok_or_else(|| OperadError::MissingUnit(p.colors[c].clone()))?;
        let o = p.ops.get(u).ok_or_else(|| OperadError::MissingUnit(p.colors[c].clone()))?;
        let want = if p.directed() { vec![c, c] } else { vec![p.inv(c), c] };
        let want_in = if p.directed() { 1 } else { 2 };
        if o.ports != want || o.n_in != want_in {
            return Err(OperadError::BadUnit(o.name.clone()));
        }
    }
    Ok(())
}

fn permuted(p: &Presentation, op: OpId, sigma: &[usize]) -> Vec<ColorId> {
    sigma.iter().map(|&k| p.ops[op].ports[k]).collect()
}

/// Every listed entry is well typed.
fn entries(p: &Presentation) -> Result<(), OperadError> {
    let n = p.ops.len();
    for (&(a, ref s), &b) in &p.act {
        if a >= n || b >= n {
            return Err(OperadError::Unknown(format!("action entry {a} {b}")));
        }
        let o = &p.ops[a];
        if !block_perms(o.n_in, o.arity()).contains(s) {
            return Err(OperadError::ActionLawViolated(format!("{} {:?} is not a permutation of its ports", o.name, s)));
        }
        if p.ops[b].ports != permuted(p, a, s) || p.ops[b].n_in != o.n_in {
            return Err(OperadError::ProfileMismatch(format!("{} {:?}", o.name, s)));
        }
    }
    for (&(a, i, b, j), &r) in &p.compose {
        if a >= n || b >= n || r >= n {
            return Err(OperadError::Unknown(format!("composition entry {a} {b} {r}")));
        }
        let name = p.compose_name(a, i, b, j);
        if !p.composable(a, i, b, j) {
            return Err(OperadError::BadComposition(name));
        }
        let (pa, pb) = (&p.ops[a], &p.ops[b]);
        let (cols, n_in) = compose_tags(&pa.ports, pa.n_in, i, &pb.ports, pb.n_in, j, p.directed());
        if p.ops[r].ports != cols || p.ops[r].n_in != n_in {
            return Err(OperadError::ProfileMismatch(name));
        }
    }
    if !p.flavor.has_contraction() {
        if let Some((&(a, _, _), _)) = p.contract.iter().next() {
            return Err(OperadError::FlavorLacksContraction(p.ops[a].name.clone()));
        }
    }
    for (&(a, i, j), &r) in &p.contract {
        if a >= n || r >= n {
            return Err(OperadError::Unknown(format!("contraction entry {a} {r}")));
        }
        let name = format!("{} {i} {j}", p.ops[a].name);
        if !p.contractible(a, i, j) {
            return Err(OperadError::BadContraction(name));
        }
        let pa = &p.ops[a];
        let (cols, n_in) = contract_tags(&pa.ports, pa.n_in, i, j, p.directed());
        if p.ops[r].ports != cols || p.ops[r].n_in != n_in {
            return Err(OperadError::ProfileMismatch(name));
        }
    }
    Ok(())
}

/// The action is total and `(x·σ)·τ = x·(στ)`.
fn actions(p: &Presentation) -> Result<(), OperadError> {
    for a in 0..p.ops.len() {
        let perms = p.perms_of(a);
        let gens = p.generators_of(a);
        for s in &perms {
            let b = p.act_on(a, s)?;
            for t in &gens {
                let st: Perm = t.iter().map(|&k| s[k]).collect();
                if p.act_on(b, t)? != p.act_on(a, &st)? {
                    return Err(OperadError::ActionLawViolated(format!("{} {:?} {:?}", p.ops[a].name, s, t)));
                }
            }
        }
    }
    Ok(())
}

fn result_allowed(p: &Presentation, arity: usize) -> bool {
    arity <= p.cap && !(p.flavor == Flavor::Cyclic && arity == 0)
}

/// Ports grouped by `(color, is input)`.
fn port_index(p: &Presentation) -> HashMap<(ColorId, bool), Vec<(OpId, usize)>> {
    let mut m: HashMap<(ColorId, bool), Vec<(OpId, usize)>> = HashMap::new();
    for (k, o) in p.ops.iter().enumerate() {
        for (i, &c) in o.ports.iter().enumerate() {
            m.entry((c, p.directed() && i < o.n_in)).or_default().push((k, i));
        }
    }
    m
}

/// Ports that can be glued to port `i` of `a`.
fn partners<'a>(
    p: &Presentation,
    idx: &'a HashMap<(ColorId, bool), Vec<(OpId, usize)>>,
    a: OpId,
    i: usize,
) -> &'a [(OpId, usize)] {
    let o = &p.ops[a];
    let key = if p.directed() {
        (o.ports[i], i >= o.n_in)
    } else {
        (p.inv(o.ports[i]), false)
    };
    idx.get(&key).map_or(&[], |v| v.as_slice())
}

fn completeness(p: &Presentation) -> Result<(), OperadError> {
    for a in 0..p.ops.len() {
        for b in 0..p.ops.len() {
            for i in 0..p.ops[a].arity() {
                for j in 0..p.ops[b].arity() {
                    if p.composable(a, i, b, j) && result_allowed(p, p.ops[a].arity() + p.ops[b].arity() - 2) {
                        p.compose_ops(a, i, b, j)?;
                    }
                }
            }
        }
        if p.flavor.has_contraction() {
            let n = p.ops[a].arity();
            for i in 0..n {
                for j in 0..n {
                    if p.contractible(a, i, j) {
                        p.contract_op(a, i, j)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn inverse_at(s: &[usize], i: usize) -> usize {
    s.iter().position(|&k| k == i).unwrap()
}

/// Composition and contraction commute with the action, checked on
/// generators of the permutation groups.
fn equivariance(p: &Presentation) -> Result<(), OperadError> {
    let d = p.directed();
    for (&(a, i, b, j), &r) in &p.compose {
        let (pa, pb) = (&p.ops[a], &p.ops[b]);
        let ta: Vec<usize> = (0..pa.arity()).collect();
        let tb: Vec<usize> = (pa.arity()..pa.arity() + pb.arity()).collect();
        let (base, _) = compose_tags(&ta, pa.n_in, i, &tb, pb.n_in, j, d);
        for s in p.generators_of(a) {
            let a2 = p.act_on(a, &s)?;
            let i2 = inverse_at(&s, i);
            let r2 = p.compose_ops(a2, i2, b, j)?;
            let ta2: Vec<usize> = s.iter().map(|&k| ta[k]).collect();
            let (t2, _) = compose_tags(&ta2, pa.n_in, i2, &tb, pb.n_in, j, d);
            let rho = match_perm(&base, &t2).unwrap();
            if p.act_on(r, &rho)? != r2 {
                return Err(OperadError::EquivarianceViolated(format!("{} acted by {:?}", p.compose_name(a, i, b, j), s)));
            }
        }
        for s in p.generators_of(b) {
            let b2 = p.act_on(b, &s)?;
            let j2 = inverse_at(&s, j);
            let r2 = p.compose_ops(a, i, b2, j2)?;
            let tb2: Vec<usize> = s.iter().map(|&k| tb[k]).collect();
            let (t2, _) = compose_tags(&ta, pa.n_in, i, &tb2, pb.n_in, j2, d);
            let rho = match_perm(&base, &t2).unwrap();
            if p.act_on(r, &rho)? != r2 {
                return Err(OperadError::EquivarianceViolated(format!("{} acted by {:?}", p.compose_name(a, i, b, j), s)));
            }
        }
    }
    for (&(a, i, j), &r) in &p.contract {
        let pa = &p.ops[a];
        let ta: Vec<usize> = (0..pa.arity()).collect();
        let (base, _) = contract_tags(&ta, pa.n_in, i, j, d);
        for s in p.generators_of(a) {
            let a2 = p.act_on(a, &s)?;
            let ta2: Vec<usize> = s.iter().map(|&k| ta[k]).collect();
            let blob = p.contract_blob(
                &Blob { op: a2, tags: ta2 },
                inverse_at(&s, i),
                inverse_at(&s, j),
            )?;
            let rho = match_perm(&base, &blob.tags).unwrap();
            if p.act_on(r, &rho)? != blob.op {
                return Err(OperadError::EquivarianceViolated(format!("contraction {} {i} {j} acted by {:?}", pa.name, s)));
            }
        }
    }
    Ok(())
}

fn identities(p: &Presentation) -> Result<(), OperadError> {
    for a in 0..p.ops.len() {
        let o = &p.ops[a];
        let tags: Vec<usize> = (0..o.arity()).collect();
        for i in 0..o.arity() {
            let c = o.ports[i];
            let u = p.units[c].unwrap();
            let x = Blob { op: a, tags: tags.clone() };
            let results = if p.directed() {
                if i < o.n_in {
                    let unit = Blob { op: u, tags: vec![i, 99] };
                    vec![p.compose_blobs(&x, i, &unit, 1)?]
                } else {
                    let unit = Blob { op: u, tags: vec![99, i] };
                    vec![p.compose_blobs(&unit, 0, &x, i)?]
                }
            } else {
                let unit = Blob { op: u, tags: vec![99, i] };
                vec![p.compose_blobs(&x, i, &unit, 0)?, p.compose_blobs(&unit, 0, &x, i)?]
            };
            for r in results {
                if p.reorder(&r, &tags)? != a {
                    return Err(OperadError::IdentityLawViolated(format!("{} at port {i}", o.name)));
                }
            }
        }
    }
    Ok(())
}

/// A connected graph with two internal edges, decorated by operations.
struct Config {
    blobs: Vec<Blob<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Config {
    fn describe(&self, p: &Presentation) -> String {
        let names: Vec<&str> = self.blobs.iter().map(|b| p.ops[b.op].name.as_str()).collect();
        format!("{names:?} glued along {:?}", self.edges)
    }
}

fn blob(op: OpId, k: usize, p: &Presentation) -> Blob<usize> {
    Blob {
        op,
        tags: (0..p.ops[op].arity()).map(|i| 16 * k + i).collect(),
    }
}

/// The edge between port `i` of blob `x` and port `j` of blob `y`, input
/// first for directed flavors.
fn edge(p: &Presentation, x: &Blob<usize>, i: usize, y: &Blob<usize>, j: usize) -> (usize, usize) {
    if p.directed() && i >= p.ops[x.op].n_in {
        (y.tags[j], x.tags[i])
    } else {
        (x.tags[i], y.tags[j])
    }
}

fn check_config(p: &Presentation, c: &Config) -> Result<(), OperadError> {
    let first = collapse(p, c.blobs.clone(), &c.edges, Some(&[0, 1]))?;
    let second = collapse(p, c.blobs.clone(), &c.edges, Some(&[1, 0]))?;
    if p.reorder(&second, &first.tags)? != first.op {
        return Err(OperadError::AssociativityViolated(c.describe(p)));
    }
    Ok(())
}

/// Both collapse orders agree on every graph with two internal edges whose
/// intermediate results stay within the cap.
fn associativity(p: &Presentation, exec: Exec) -> Result<(), OperadError> {
    let idx = port_index(p);
    let ok = |n: usize| result_allowed(p, n);
    let results = exec::map_range(exec, p.ops.len(), |q| -> Result<(), OperadError> {
        let nq = p.ops[q].arity();
        // Three vertices: q in the middle.
        for j in 0..nq {
            for j2 in j + 1..nq {
                for &(a, i) in partners(p, &idx, q, j) {
                    let na = p.ops[a].arity();
                    if !ok(na + nq - 2) {
                        continue;
                    }
                    for &(b, k) in partners(p, &idx, q, j2) {
                        let nb = p.ops[b].arity();
                        if !ok(nq + nb - 2) || !ok(na + nq + nb - 4) {
                            continue;
                        }
                        let (x, y, z) = (blob(a, 0, p), blob(q, 1, p), blob(b, 2, p));
                        let edges = vec![edge(p, &y, j, &x, i), edge(p, &y, j2, &z, k)];
                        check_config(p, &Config { blobs: vec![x, y, z], edges })?;
                    }
                }
            }
        }
        if !p.flavor.has_contraction() {
            return Ok(());
        }
        let contractible: Vec<(usize, usize)> = (0..nq)
            .flat_map(|i| (0..nq).map(move |j| (i, j)))
            .filter(|&(i, j)| p.contractible(q, i, j))
            .collect();
        // One vertex, two loops.
        if ok(nq.saturating_sub(4)) && nq >= 4 {
            for (m, &(i1, j1)) in contractible.iter().enumerate() {
                for &(i2, j2) in &contractible[m + 1..] {
                    if [i2, j2].iter().any(|x| *x == i1 || *x == j1) {
                        continue;
                    }
                    let y = blob(q, 0, p);
                    let edges = vec![edge(p, &y, i1, &y, j1), edge(p, &y, i2, &y, j2)];
                    check_config(p, &Config { blobs: vec![y], edges })?;
                }
            }
        }
        // One loop at q and one edge to another vertex.
        for &(i1, j1) in &contractible {
            for k in (0..nq).filter(|&k| k != i1 && k != j1) {
                for &(b, l) in partners(p, &idx, q, k) {
                    let nb = p.ops[b].arity();
                    if nq + nb < 4 || !ok(nq + nb - 2) || !ok(nq + nb - 4) {
                        continue;
                    }
                    let (y, z) = (blob(q, 0, p), blob(b, 1, p));
                    let edges = vec![edge(p, &y, i1, &y, j1), edge(p, &y, k, &z, l)];
                    check_config(p, &Config { blobs: vec![y, z], edges })?;
                }
            }
        }
        // Two vertices joined by two edges.
        for j1 in 0..nq {
            for j2 in j1 + 1..nq {
                for &(b, i1) in partners(p, &idx, q, j1) {
                    let nb = p.ops[b].arity();
                    if nq + nb < 4 || !ok(nq + nb - 2) || !ok(nq + nb - 4) {
                        continue;
                    }
                    for &(b2, i2) in partners(p, &idx, q, j2) {
                        if b2 != b || i2 == i1 {
                            continue;
                        }
                        let (y, z) = (blob(q, 0, p), blob(b, 1, p));
                        let edges = vec![edge(p, &y, j1, &z, i1), edge(p, &y, j2, &z, i2)];
                        check_config(p, &Config { blobs: vec![y, z], edges })?;
                    }
                }
            }
        }
        Ok(())
    });
    results.into_iter().collect()
}
