use std::path::{Path, PathBuf};
use std::sync::Arc;

use itertools::Itertools;
use serde_json::json;

use graphcat::dot::to_dot;
use graphcat::etale::{validate_d, validate_u, DEtale};
use graphcat::graph::generate::{connected_dgraphs, connected_ugraphs, Bounds};
use graphcat::graph::{shape, Graph};
use graphcat::maps::{enumerate_graph_maps, factorize, Cat, GraphMap};
use graphcat::operad::{battery, free_cyclic, validate_with};
use graphcat::oracle::{emb_oracle, factorization_check, operad_bridge, structured_oracle, tree_map_sweep, Domains};
use graphcat::presheaf::{
    elements_equivalence_check, is_segal, left_kan_formula, left_kan_oracle, nerve, oriented, paired_sites, root,
    Functor, Site,
};
use graphcat::text::{
    parse_elem, resolve_etale, resolve_presheaf, write_graph, write_map, write_map_table, write_operad,
    write_presheaf, ElemText,
};
use graphcat::Host;

use crate::config::Config;
use crate::report::{CliError, Report};
use crate::workspace::{parse_cat, Workspace};
use crate::Command;

pub fn run(cmd: &Command, cfg: &Config) -> Result<Report, CliError> {
    match cmd {
        Command::Validate { files } => validate(files, cfg),
        Command::Emb { file, graph } => emb(file, graph.as_deref(), cfg),
        Command::Unions { file, pair, graph } => unions(file, pair, graph.as_deref(), cfg),
        Command::Ssb { file, graph } => ssb(file, graph.as_deref(), cfg),
        Command::MapCheck { files, map } => map_check(files, map.as_deref(), cfg),
        Command::Compose { files, first, second } => compose(files, first, second, cfg),
        Command::Factorize { files, map } => factor(files, map, cfg),
        Command::ExtendTreeMap { files, map } => extend(files, map, cfg),
        Command::OperadCheck { files, operad, battery } => operad_check(files, operad.as_deref(), *battery, cfg),
        Command::FreeCyclic { graph, files, cap, emit } => free(graph, files, *cap, *emit, cfg),
        Command::Nerve { operad, files, site, emit } => nerve_cmd(operad, files, site.as_deref(), *emit, cfg),
        Command::Segal { presheaf, site, files } => segal(presheaf, site, files, cfg),
        Command::Orient { graph, files, orientation, root } => {
            orient_cmd(graph, files, orientation.as_deref(), root.as_deref(), cfg)
        }
        Command::Kan { functor, presheaf, object, files, oracle } => kan(functor, presheaf, object, files, *oracle, cfg),
        Command::ElementsCheck { functor } => elements(functor, cfg),
        Command::SiteBuild { site, out, check } => site_build(site, out.as_ref(), check.as_ref(), cfg),
        Command::ExportDot { name, files, dir } => export_dot(name, files, dir, cfg),
        Command::Oracle { which } => oracle(which, cfg),
    }
}

fn functor(s: &str) -> Result<Functor, CliError> {
    Functor::parse(s).ok_or_else(|| CliError::Usage(format!("unknown functor `{s}`; use O-to-U, O0-to-U0 or Omega-to-Ucyc")))
}

fn arc_list(h: &Host, arcs: &[usize]) -> String {
    arcs.iter().map(|&a| h.ug().arc_name(a)).join(", ")
}

fn validate(files: &[PathBuf], cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let mut rep = Report::new("validate");
    let doc = ws.doc.clone();
    for g in &doc.graphs {
        match Host::new(g.clone()) {
            Ok(h) => rep.line(format!(
                "ok graph {}: {} vertices, {} edges, {} elements",
                g.name(),
                g.num_vertices(),
                g.num_edges(),
                h.len()
            )),
            Err(e) => rep.fail(format!("FAIL graph {}: {e}", g.name())),
        }
    }
    for e in &doc.etales {
        let (h, g) = (ws.graph(Some(&e.source))?, ws.graph(Some(&e.target))?);
        let checked = resolve_etale(e, &h, &g).map_err(|e| e.to_string()).and_then(|f| {
            match (&h, &g) {
                (Graph::D(hd), Graph::D(gd)) => {
                    let d = DEtale {
                        edges: (0..hd.num_edges()).map(|k| f.arcs[2 * k] / 2).collect(),
                        vertices: f.vertices.clone(),
                    };
                    validate_d(hd, gd, &d)
                }
                _ => validate_u(h.ug(), g.ug(), &f),
            }
            .map_err(|e| e.to_string())
        });
        match checked {
            Ok(()) => rep.line(format!("ok etale {}", e.name)),
            Err(msg) => rep.fail(format!("FAIL etale {}: {msg}", e.name)),
        }
    }
    for t in &doc.maps {
        match ws.map(t).and_then(|m| {
            let cat = parse_cat(&t.cat)?;
            Ok((cat, cat.contains_map(&m)?))
        }) {
            Ok((_, true)) => rep.line(format!("ok map {} in {}", t.name, t.cat)),
            Ok((cat, false)) => rep.fail(format!("FAIL map {}: not a morphism of {}", t.name, cat.tag())),
            Err(e) => rep.fail(format!("FAIL map {}: {e}", t.name)),
        }
    }
    for p in &doc.operads {
        match validate_with(p, cfg.exec) {
            Ok(()) => rep.line(format!("ok operad {}: {} operations", p.name, p.ops.len())),
            Err(e) => rep.fail(format!("FAIL operad {}: {e}", p.name)),
        }
    }
    for t in &doc.presheaves {
        let site = ws.site(parse_cat(&t.site)?)?;
        match resolve_presheaf(t, &site) {
            Ok(x) => rep.line(format!(
                "ok presheaf {} on {}: {} elements",
                t.name,
                t.site,
                (0..site.len()).map(|a| x.size(a)).sum::<usize>()
            )),
            Err(e) => rep.fail(format!("FAIL presheaf {}: {e}", t.name)),
        }
    }
    rep.set(
        "counts",
        json!({
            "graphs": doc.graphs.len(),
            "etales": doc.etales.len(),
            "maps": doc.maps.len(),
            "operads": doc.operads.len(),
            "presheaves": doc.presheaves.len(),
        }),
    );
    Ok(rep)
}

fn emb(file: &PathBuf, graph: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(std::slice::from_ref(file), cfg)?;
    let g = ws.graph(graph)?;
    let h = Host::new(g.clone())?;
    let mut rep = Report::new("emb");
    let boundary = h.ug().boundary();
    rep.line(format!("graph {}: boundary {{{}}}", g.name(), arc_list(&h, &boundary)));
    let mut elems = Vec::new();
    for i in 0..h.len() {
        rep.line(format!("{} boundary {{{}}}", h.display(i), arc_list(&h, h.boundary(i))));
        elems.push(json!({
            "element": h.display(i),
            "boundary": h.boundary(i).iter().map(|&a| h.ug().arc_name(a)).collect::<Vec<_>>(),
        }));
    }
    rep.set("graph", g.name());
    rep.set("boundary", boundary.iter().map(|&a| h.ug().arc_name(a)).collect::<Vec<_>>());
    rep.set("elements", elems);
    Ok(rep)
}

/// An element given as `emb {...}`, a vertex name (its star) or an edge name.
fn element(h: &Host, s: &str) -> Result<usize, CliError> {
    if s.trim_start().starts_with("emb") || s.trim_start().starts_with('{') {
        let t = parse_elem(s).map_err(|e| CliError::Usage(e.to_string()))?;
        return t.resolve(h).map_err(CliError::Invalid);
    }
    if let Some(v) = h.ug().find_vertex(s) {
        return Ok(h.vertex_elem(v));
    }
    ElemText::Edge(s.to_string()).resolve(h).map_err(CliError::Usage)
}

fn unions(file: &PathBuf, pair: &[String], graph: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(std::slice::from_ref(file), cfg)?;
    let [a, b] = pair else {
        return Err(CliError::Usage("--pair takes two elements".into()));
    };
    let h = Host::new(ws.graph(graph)?)?;
    let (x, y) = (element(&h, a)?, element(&h, b)?);
    let us = h.unions(x, y);
    let mut rep = Report::new("unions");
    rep.line(format!("{} unions of {} and {}", us.len(), h.display(x), h.display(y)));
    for &u in &us {
        rep.line(format!("  {}", h.display(u)));
    }
    rep.set("count", us.len());
    rep.set("unions", us.iter().map(|&u| h.display(u)).collect::<Vec<_>>());
    Ok(rep)
}

fn ssb(file: &PathBuf, graph: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(std::slice::from_ref(file), cfg)?;
    let h = Host::new(ws.graph(graph)?)?;
    let structured = h.structured()?;
    let mut rep = Report::new("ssb");
    rep.line(format!("{} of {} elements are structured", structured.len(), h.len()));
    for i in 0..h.len() {
        let mark = if structured.contains(&i) { "structured" } else { "not structured" };
        rep.line(format!("  {} {mark}", h.display(i)));
    }
    rep.set("structured", structured.iter().map(|&i| h.display(i)).collect::<Vec<_>>());
    rep.set("elements", h.len());
    Ok(rep)
}

fn map_check(files: &[PathBuf], name: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let maps: Vec<_> = match name {
        Some(n) => vec![ws.map_text(n)?],
        None => ws.doc.maps.clone(),
    };
    let mut rep = Report::new("map-check");
    let mut rows = Vec::new();
    for t in &maps {
        let m = match ws.map(t) {
            Ok(m) => m,
            Err(e) => {
                rep.fail(format!("FAIL {}: {e}", t.name));
                continue;
            }
        };
        let cat = parse_cat(&t.cat)?;
        let member = cat.contains_map(&m)?;
        let homs = enumerate_graph_maps(&m.source, &m.target, cfg.budget)?.len();
        let line = format!(
            "{} {}: {} -> {} in {}, active {}, inert {}, {} maps in the hom-set",
            if member { "ok" } else { "FAIL" },
            t.name,
            t.source,
            t.target,
            cat.tag(),
            m.is_active(),
            m.is_inert(),
            homs
        );
        if member {
            rep.line(line);
        } else {
            rep.fail(line);
        }
        rows.push(json!({
            "map": t.name, "category": cat.tag(), "member": member,
            "active": m.is_active(), "inert": m.is_inert(), "hom_count": homs,
        }));
    }
    rep.set("maps", rows);
    Ok(rep)
}

fn compose(files: &[PathBuf], first: &str, second: &str, cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let (t1, t2) = (ws.map_text(first)?, ws.map_text(second)?);
    if t1.target != t2.source {
        return Err(CliError::Invalid(format!("{first} ends at {} but {second} starts at {}", t1.target, t2.source)));
    }
    let (f, g) = (ws.map(&t1)?, ws.map(&t2)?);
    let gf = f.then(&g)?;
    gf.validate()?;
    let name = format!("{second}.{first}");
    let mut rep = Report::new("compose");
    let text = write_map(&gf, &name, Some(&t1.cat));
    rep.lines.extend(text.lines().map(String::from));
    rep.set("map", text);
    Ok(rep)
}

fn factor(files: &[PathBuf], name: &str, cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let t = ws.map_text(name)?;
    let m = ws.map(&t)?;
    let fz = factorize(&m)?;
    let back = fz.active.then(&fz.inert)?;
    let mut rep = Report::new("factorize");
    if back.phi0 != m.phi0 || back.phi_hat != m.phi_hat {
        rep.fail("FAIL inert after active differs from the map");
    }
    // Renamed so the output can be read back next to the inputs.
    let mid = Arc::new(Host::new(fz.active.target.graph().clone().with_name(&format!("{name}.mid")))?);
    let a = GraphMap { target: mid.clone(), ..fz.active };
    let i = GraphMap { source: mid.clone(), ..fz.inert };
    let active = write_map_table(&a, &format!("{name}.active"), Some(&t.cat));
    let inert = write_map_table(&i, &format!("{name}.inert"), Some(&t.cat));
    rep.line(write_graph(mid.graph()).trim_end().to_string());
    rep.lines.extend(active.lines().map(String::from));
    rep.lines.extend(inert.lines().map(String::from));
    rep.set("middle", write_graph(mid.graph()));
    rep.set("active", active);
    rep.set("inert", inert);
    Ok(rep)
}

fn extend(files: &[PathBuf], name: &str, cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let t = ws.map_text(name)?;
    if t.vertices.is_empty() {
        return Err(CliError::Usage(format!("map {name} has no vertex lines to extend")));
    }
    let h = ws.graph(Some(&t.source))?;
    let g = ws.graph(Some(&t.target))?;
    if !shape(&h).is_tree || !shape(&g).is_tree {
        return Err(CliError::Invalid(format!("{} -> {} is not a map of trees", t.source, t.target)));
    }
    let m = ws.map(&t)?;
    let text = write_map_table(&m, name, Some(&t.cat));
    let mut rep = Report::new("extend-tree-map");
    rep.lines.extend(text.lines().map(String::from));
    rep.set("map", text);
    Ok(rep)
}

fn operad_check(files: &[PathBuf], name: Option<&str>, with_battery: bool, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(files, cfg)?;
    let mut ps = match name {
        Some(n) => vec![ws.operad(n)?],
        None => ws.doc.operads.clone(),
    };
    if with_battery {
        ps.extend(battery());
    }
    if ps.is_empty() {
        return Err(CliError::Usage("no operads given".into()));
    }
    let mut rep = Report::new("operad-check");
    let mut rows = Vec::new();
    for p in &ps {
        let r = validate_with(p, cfg.exec);
        match &r {
            Ok(()) => rep.line(format!("ok {} ({}): {} operations", p.name, p.flavor.tag(), p.ops.len())),
            Err(e) => rep.fail(format!("FAIL {} ({}): {e}", p.name, p.flavor.tag())),
        }
        rows.push(json!({
            "operad": p.name, "flavor": p.flavor.tag(), "operations": p.ops.len(),
            "valid": r.is_ok(), "error": r.err().map(|e| e.to_string()),
        }));
    }
    rep.set("operads", rows);
    Ok(rep)
}

fn free(graph: &str, files: &[PathBuf], cap: usize, emit: bool, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(files, cfg)?;
    let g = ws.graph(Some(graph))?;
    let c = free_cyclic(g.ug(), cap)?;
    let mut rep = Report::new("free-cyclic");
    rep.line(format!("C({}): {} colors, {} operations up to arity {cap}", g.name(), c.pres.colors.len(), c.pres.ops.len()));
    let mut per: Vec<(String, usize)> = Vec::new();
    for (x, run) in &(0..c.pres.ops.len()).chunk_by(|&k| c.elem_of[k]) {
        per.push((c.host.display(x), run.count()));
    }
    for (x, n) in &per {
        rep.line(format!("  {x}: {n} orderings"));
    }
    if emit {
        rep.lines.extend(write_operad(&c.pres).lines().map(String::from));
    }
    rep.set("operations", c.pres.ops.len());
    rep.set("per_element", per);
    Ok(rep)
}

fn nerve_site(ws: &mut Workspace, p: &graphcat::operad::Presentation, site: Option<&str>) -> Result<Arc<Site>, CliError> {
    let cat = match site {
        Some(s) => parse_cat(s)?,
        None => p.flavor.site(),
    };
    ws.site(cat)
}

fn nerve_cmd(operad: &str, files: &[PathBuf], site: Option<&str>, emit: bool, cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let p = ws.operad(operad)?;
    let s = nerve_site(&mut ws, &p, site)?;
    let n = nerve(&p, &s, cfg.exec)?;
    let mut rep = Report::new("nerve");
    let total: usize = (0..s.len()).map(|a| n.size(a)).sum();
    rep.line(format!("nerve of {} on {}: {} objects, {} elements", p.name, s.cat.tag(), s.len(), total));
    match n.validate(cfg.exec) {
        Ok(()) => rep.line("functorial"),
        Err(e) => rep.fail(format!("FAIL {e}")),
    }
    if emit {
        rep.lines.extend(write_presheaf(&n).lines().map(String::from));
    }
    rep.set("site", s.cat.tag());
    rep.set("sizes", (0..s.len()).map(|a| (s.name(a).to_string(), n.size(a))).collect::<Vec<_>>());
    Ok(rep)
}

fn segal(spec: &str, site: &str, files: &[PathBuf], cfg: &Config) -> Result<Report, CliError> {
    let mut ws = Workspace::load(files, cfg)?;
    let s = ws.site(parse_cat(site)?)?;
    let x = ws.presheaf(spec, &s)?;
    let r = is_segal(&x, cfg.exec)?;
    let mut rep = Report::new("segal");
    if r.ok() {
        rep.line(format!("{} is Segal on {} ({} objects)", x.name, s.cat.tag(), r.objects));
    } else {
        rep.fail(format!("{} is not Segal on {}: {} objects fail", x.name, s.cat.tag(), r.failures.len()));
        for (g, n, l, inj) in r.failures.iter().take(10) {
            rep.line(format!("  {g}: |X| = {n}, |limit| = {l}, injective {inj}"));
        }
    }
    rep.set("presheaf", &x.name);
    rep.set("objects", r.objects);
    rep.set("failures", &r.failures);
    Ok(rep)
}

fn orient_cmd(graph: &str, files: &[PathBuf], bits: Option<&str>, root_arc: Option<&str>, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(files, cfg)?;
    let g = ws.graph(Some(graph))?;
    let Graph::U(u) = &g else {
        return Err(CliError::Usage(format!("{graph} is already directed")));
    };
    let x = match (bits, root_arc) {
        (Some(b), _) => u64::from_str_radix(b, 2).map_err(|_| CliError::Usage(format!("`{b}` is not a bit string")))?,
        (None, Some(r)) => {
            let a = u.find_arc(r).ok_or_else(|| CliError::Usage(format!("unknown arc `{r}`")))?;
            root(u, a)?
        }
        (None, None) => 0,
    };
    if u.num_edges() < 64 && x >> u.num_edges() != 0 {
        return Err(CliError::Usage(format!("orientation has bits beyond the {} edges", u.num_edges())));
    }
    let d = oriented(u, x);
    let mut rep = Report::new("orient");
    let text = write_graph(&d);
    rep.lines.extend(text.lines().map(String::from));
    rep.set("orientation", format!("{x:b}"));
    rep.set("graph", text);
    Ok(rep)
}

fn kan(f: &str, spec: &str, object: &str, files: &[PathBuf], with_oracle: bool, cfg: &Config) -> Result<Report, CliError> {
    let f = functor(f)?;
    let mut ws = Workspace::load(files, cfg)?;
    let (c, d) = paired_sites(f, cfg.bounds, cfg.exec)?;
    let z = ws.presheaf(spec, &c)?;
    let g = ws.object(&d, object)?;
    let k = left_kan_formula(f, &z, &d, cfg.exec)?;
    let mut rep = Report::new("kan");
    let summands = k.orientations[g].len();
    let elements = k.presheaf.size(g);
    rep.line(format!(
        "{}_!{} at {}: {summands} summands, {elements} elements",
        f.tag(),
        z.name,
        d.name(g)
    ));
    for (i, &(r, _)) in k.reps[g].iter().enumerate() {
        let x = k.orientations[g][i];
        rep.line(format!("  orientation {x:b}: {} with {} elements", c.name(r), z.size(r)));
    }
    rep.set("summands", summands);
    rep.set("elements", elements);
    if with_oracle {
        let (_, col) = left_kan_oracle(f, &z, &d, g)?;
        if col.classes == elements {
            rep.line(format!("colimit oracle: {} classes", col.classes));
        } else {
            rep.fail(format!("FAIL colimit oracle has {} classes", col.classes));
        }
        rep.set("oracle_classes", col.classes);
    }
    Ok(rep)
}

fn elements(f: &str, cfg: &Config) -> Result<Report, CliError> {
    let f = functor(f)?;
    if f == Functor::OmegaToUCyc {
        return Err(CliError::Usage("elements-check takes O-to-U or O0-to-U0".into()));
    }
    let (c, d) = paired_sites(f, cfg.bounds, cfg.exec)?;
    let r = elements_equivalence_check(f, &c, &d, cfg.exec)?;
    let mut rep = Report::new("elements-check");
    let line = format!(
        "{}: {} elements in {} orbits for {} directed objects, {} hom pairs",
        r.functor, r.elements, r.orbits, r.directed_objects, r.hom_pairs
    );
    if r.ok() {
        rep.line(line);
    } else {
        rep.fail(line);
        for s in r.object_failures.iter().chain(&r.hom_failures).take(10) {
            rep.line(format!("  {s}"));
        }
    }
    rep.set("report", &r);
    Ok(rep)
}

fn site_build(site: &str, out: Option<&PathBuf>, check: Option<&PathBuf>, cfg: &Config) -> Result<Report, CliError> {
    let mut rep = Report::new("site-build");
    if let Some(path) = check {
        let text = std::fs::read_to_string(cfg.resolve(path))?;
        let m = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("bad manifest: {e}")))?;
        match Site::check_manifest(&m) {
            Ok(s) => rep.line(format!("manifest matches: {} objects, {} maps", s.len(), s.morphism_count())),
            Err(e) => rep.fail(format!("FAIL {e}")),
        }
        return Ok(rep);
    }
    let cat = parse_cat(site)?;
    let mut ws = Workspace::load(&[], cfg)?;
    let s = ws.site(cat)?;
    let m = s.manifest();
    rep.line(format!("site {}: {} objects, {} maps", cat.tag(), s.len(), s.morphism_count()));
    let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    if let Some(path) = out {
        std::fs::write(cfg.resolve(path), format!("{text}\n"))?;
        rep.line(format!("wrote {}", path.display()));
    }
    rep.set("manifest", m);
    Ok(rep)
}

fn export_dot(name: &str, files: &[PathBuf], dir: &Path, cfg: &Config) -> Result<Report, CliError> {
    let ws = Workspace::load(files, cfg)?;
    let g = ws.graph(Some(name))?;
    let path = cfg.resolve(dir).join(format!("{name}.dot"));
    std::fs::write(&path, to_dot(&g))?;
    let mut rep = Report::new("export-dot");
    rep.line(format!("wrote {}", path.display()));
    rep.set("file", path.display().to_string());
    Ok(rep)
}

fn oracle(which: &str, cfg: &Config) -> Result<Report, CliError> {
    let all = which == "all";
    let known = ["emb", "tree-maps", "factorization", "bridge", "ssb", "all"];
    if !known.contains(&which) {
        return Err(CliError::Usage(format!("unknown oracle `{which}`; one of {}", known.join(", "))));
    }
    let b = cfg.bounds;
    let mut rep = Report::new("oracle");
    if all || which == "emb" {
        let eb = Bounds { max_arity: 2 * b.max_edges, ..b };
        let gs: Vec<Graph> = connected_ugraphs(&eb)
            .into_iter()
            .map(Graph::U)
            .chain(connected_dgraphs(&eb).into_iter().map(Graph::D))
            .collect();
        let mut doms = Domains::default();
        let mut bad = Vec::new();
        for g in &gs {
            let r = emb_oracle(g, &mut doms)?;
            if !r.ok() {
                bad.push(format!("{}: {}", r.host, r.discrepancies.join("; ")));
            }
        }
        let line = format!("emb: {} graphs, {} disagree", gs.len(), bad.len());
        if bad.is_empty() { rep.line(line) } else { rep.fail(line) }
        rep.set("emb", json!({"graphs": gs.len(), "failures": bad}));
    }
    if all || which == "tree-maps" {
        let tb = Bounds { max_vertices: 4, max_arity: 3, max_edges: 9 };
        let trees: Vec<Arc<Host>> = connected_ugraphs(&tb)
            .into_iter()
            .map(Graph::U)
            .filter(|g| shape(g).is_tree)
            .map(|g| Host::new(g).map(Arc::new))
            .collect::<Result<_, _>>()?;
        let r = tree_map_sweep(&trees, cfg.exec)?;
        let line = format!(
            "tree-maps: {} pairs, {} tree maps, {} graph maps, {} intersections",
            r.pairs, r.tree_maps, r.graph_maps, r.intersections
        );
        if r.ok() { rep.line(line) } else { rep.fail(line) }
        rep.set("tree_maps", &r);
    }
    if all || which == "factorization" {
        let mut rows = Vec::new();
        for cat in Cat::ALL {
            let cb = if cat == Cat::Delta { Bounds { max_vertices: b.max_vertices.max(4), ..b } } else { b };
            let s = Site::build_with(cat, cb, cfg.exec)?;
            let r = factorization_check(&s, cfg.exec)?;
            let line = format!("factorization {}: {} maps, {} failures", r.category, r.morphisms, r.failures.len());
            if r.ok() { rep.line(line) } else { rep.fail(line) }
            rows.push(r);
        }
        rep.set("factorization", rows);
    }
    if all || which == "bridge" {
        let s = Site::build_with(Cat::U0, b, cfg.exec)?;
        let r = operad_bridge(&s, cfg.exec)?;
        let line = format!("bridge: {} pairs, {} operad maps, {} failures", r.pairs, r.homs, r.failures.len());
        if r.ok() { rep.line(line) } else { rep.fail(line) }
        rep.set("bridge", &r);
    }
    if all || which == "ssb" {
        let s = Site::build_with(Cat::O, b, cfg.exec)?;
        let (mut n, mut bad) = (0, 0);
        for h in &s.objects {
            if shape(h.graph()).is_acyclic != Some(true) {
                continue;
            }
            for x in 0..h.len() {
                n += 1;
                if structured_oracle(h, x) != Some(h.is_structured(x)?) {
                    bad += 1;
                }
            }
        }
        let line = format!("ssb: {n} elements, {bad} disagree");
        if bad == 0 { rep.line(line) } else { rep.fail(line) }
        rep.set("ssb", json!({"elements": n, "failures": bad}));
    }
    Ok(rep)
}
