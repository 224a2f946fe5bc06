//! Restriction and left Kan extension along the functors that forget
//! directions or roots.

use std::collections::HashMap;
use std::sync::Arc;

use super::orient::{oriented, orientation_iso, pullback, root};
use super::{invert, is_segal, orientation_presheaf, FinitePresheaf, Orientation, PresheafError, Site};
use crate::emb::Host;
use crate::etale::UEtale;
use crate::exec::{self, Exec};
use crate::graph::Graph;
use crate::maps::{enumerate_graph_maps, push_forward, Cat, GraphMap, MapKey, DEFAULT_BUDGET};
use crate::util::Dsu;

/// A functor from a directed site to an undirected one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Functor {
    OToU,
    O0ToU0,
    OmegaToUCyc,
}

impl Functor {
    pub const ALL: [Functor; 3] = [Functor::OToU, Functor::O0ToU0, Functor::OmegaToUCyc];

    pub fn source(&self) -> Cat {
        match self {
            Functor::OToU => Cat::O,
            Functor::O0ToU0 => Cat::O0,
            Functor::OmegaToUCyc => Cat::Omega,
        }
    }

    pub fn target(&self) -> Cat {
        match self {
            Functor::OToU => Cat::U,
            Functor::O0ToU0 => Cat::U0,
            Functor::OmegaToUCyc => Cat::UCyc,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Functor::OToU => "O-U",
            Functor::O0ToU0 => "O0-U0",
            Functor::OmegaToUCyc => "Omega-Ucyc",
        }
    }

    /// Accepts the tag, also spelled with `-to-`.
    pub fn parse(s: &str) -> Option<Functor> {
        let s = s.replace("-to-", "-");
        Functor::ALL.into_iter().find(|f| f.tag().eq_ignore_ascii_case(&s))
    }

    fn check(&self, c: &Site, d: &Site) -> Result<(), PresheafError> {
        if c.cat != self.source() || d.cat != self.target() {
            return Err(PresheafError::WrongSites);
        }
        Ok(())
    }

    /// The orientations indexing the summands at `g`: all of them, or the
    /// rooted ones for trees.
    pub fn orientations(&self, g: &Graph) -> Result<Vec<Orientation>, PresheafError> {
        let u = g.ug();
        match self {
            Functor::OmegaToUCyc => u.boundary().into_iter().map(|r| root(u, r)).collect(),
            _ => Ok((0..1u64 << u.num_edges()).collect()),
        }
    }
}

/// An oriented copy of a site object together with its representative.
#[derive(Clone, Debug)]
struct Summand {
    x: Orientation,
    host: Arc<Host>,
    /// Arcs of `G` for the arcs of `U(G_x)`, and the inverse.
    to_g: Vec<usize>,
    from_g: Vec<usize>,
    rep: (usize, UEtale),
}

fn summands(f: Functor, c: &Site, g: &Graph) -> Result<Vec<Summand>, PresheafError> {
    let u = g.ug();
    f.orientations(g)?
        .into_iter()
        .map(|x| {
            let gx = oriented(u, x);
            let rep = c
                .find(&gx)
                .ok_or_else(|| PresheafError::SiteTooSmall(format!("{} oriented by {x:b}", g.name())))?;
            let to_g = orientation_iso(x, u.num_edges());
            Ok(Summand {
                x,
                host: Arc::new(Host::new(gx).map_err(crate::maps::MapError::from)?),
                from_g: invert(&to_g),
                to_g,
                rep,
            })
        })
        .collect()
}

/// `f_!Z` computed by the coproduct formula.
#[derive(Clone, Debug)]
pub struct KanFormula {
    pub functor: Functor,
    pub presheaf: FinitePresheaf,
    /// Per object: the orientation of each summand and where it starts.
    pub orientations: Vec<Vec<Orientation>>,
    pub offsets: Vec<Vec<usize>>,
    /// Per object and summand: the representative of `G_x` and an iso to it.
    pub reps: Vec<Vec<(usize, UEtale)>>,
}

impl KanFormula {
    /// The summand and `Z`-element of an element at `g`.
    pub fn split(&self, g: usize, e: usize) -> (usize, usize) {
        let off = &self.offsets[g];
        let s = off.partition_point(|&o| o <= e) - 1;
        (s, e - off[s])
    }
}

pub fn left_kan_formula(
    f: Functor,
    z: &FinitePresheaf,
    d: &Arc<Site>,
    exec: Exec,
) -> Result<KanFormula, PresheafError> {
    let c = &z.site;
    f.check(c, d)?;
    let sums: Vec<Vec<Summand>> = (0..d.len())
        .map(|g| summands(f, c, d.objects[g].graph()))
        .collect::<Result<_, _>>()?;
    let mut offsets = Vec::with_capacity(d.len());
    let mut labels = Vec::with_capacity(d.len());
    for (g, ss) in sums.iter().enumerate() {
        let u = d.objects[g].ug();
        let mut off = Vec::with_capacity(ss.len());
        let mut ls = Vec::new();
        for s in ss {
            off.push(ls.len());
            let tag: String = match f {
                Functor::OmegaToUCyc => {
                    let r = u.boundary().into_iter().find(|&r| root(u, r).ok() == Some(s.x)).unwrap();
                    u.arc_name(r).to_string()
                }
                _ => (0..u.num_edges()).map(|e| if (s.x >> e) & 1 == 0 { '+' } else { '-' }).collect(),
            };
            ls.extend(z.labels[s.rep.0].iter().map(|l| format!("{tag}|{l}")));
        }
        off.push(ls.len());
        offsets.push(off);
        labels.push(ls);
    }
    let pos: Vec<HashMap<Orientation, usize>> = sums
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.x, i)).collect())
        .collect();
    let name = format!("{}_!{}", f.tag(), z.name);
    let offs = &offsets;
    let presheaf = FinitePresheaf::from_fn(&name, d, labels, exec, |a, b, k, e| {
        let psi = &d.homs[a][b][k];
        let off = &offs[b];
        let si = off.partition_point(|&o| o <= e) - 1;
        let s = &sums[b][si];
        let x2 = pullback(s.x, &psi.phi0);
        let &si2 = pos[a].get(&x2).ok_or_else(|| {
            PresheafError::NotFunctorial(format!("{} pulls back to an unlisted orientation", d.name(a)))
        })?;
        let s2 = &sums[a][si2];
        let phi0: Vec<usize> = s2.to_g.iter().map(|&t| s.from_g[psi.phi0[t]]).collect();
        let k2 = c
            .transport(&s2.host, &s2.rep, &s.host, &s.rep, &phi0, &psi.phi_hat)
            .ok_or_else(|| PresheafError::SiteTooSmall(format!("lift of a map into {}", d.name(b))))?;
        Ok(offs[a][si2] + z.act(s2.rep.0, s.rep.0, k2, e - off[si]))
    })?;
    Ok(KanFormula {
        functor: f,
        presheaf,
        orientations: sums.iter().map(|ss| ss.iter().map(|s| s.x).collect()).collect(),
        offsets,
        reps: sums.into_iter().map(|ss| ss.into_iter().map(|s| s.rep).collect()).collect(),
    })
}

/// The comma category `f ↓ G` restricted to the site: maps `G -> U(H)` for
/// every object `H`, and the zig-zag generators between them.
#[derive(Clone, Debug)]
pub struct KanOracle {
    pub g: usize,
    pub maps: Vec<Vec<GraphMap>>,
    index: Vec<HashMap<MapKey, usize>>,
    /// `(H', φ', H, k, φ)` with `φ = U(k) ∘ φ'` for the `k`-th map `H' -> H`.
    gens: Vec<[u32; 5]>,
}

/// Underlying hosts of a directed site.
pub fn underlying_hosts(c: &Site) -> Result<Vec<Arc<Host>>, PresheafError> {
    c.objects
        .iter()
        .map(|h| Ok(Arc::new(Host::new(Graph::U(h.ug().clone())).map_err(crate::maps::MapError::from)?)))
        .collect()
}

impl KanOracle {
    pub fn build(c: &Site, d: &Site, under: &[Arc<Host>], g: usize) -> Result<KanOracle, PresheafError> {
        let src = &d.objects[g];
        let mut maps = Vec::with_capacity(c.len());
        for uh in under {
            maps.push(enumerate_graph_maps(src, uh, DEFAULT_BUDGET)?);
        }
        let index: Vec<HashMap<MapKey, usize>> = maps
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.key(), i)).collect())
            .collect();
        let mut gens = Vec::new();
        for h2 in 0..c.len() {
            for (p2, m) in maps[h2].iter().enumerate() {
                for h in 0..c.len() {
                    for (k, kk) in c.homs[h2][h].iter().enumerate() {
                        let key: MapKey = (
                            m.phi0.iter().map(|&a| kk.phi0[a]).collect(),
                            m.phi_hat.iter().map(|&y| kk.phi_hat[y]).collect(),
                        );
                        let p = *index[h].get(&key).ok_or_else(|| {
                            PresheafError::NotFunctorial(format!("composite into {} is not a map", c.name(h)))
                        })?;
                        gens.push([h2 as u32, p2 as u32, h as u32, k as u32, p as u32]);
                    }
                }
            }
        }
        Ok(KanOracle { g, maps, index, gens })
    }

    pub fn generators(&self) -> usize {
        self.gens.len()
    }

    pub fn find(&self, h: usize, key: &MapKey) -> Option<usize> {
        self.index[h].get(key).copied()
    }

    /// The colimit of `Z` over the comma category.
    pub fn colimit(&self, z: &FinitePresheaf) -> Colimit {
        let mut offsets = Vec::with_capacity(self.maps.len());
        let mut n = 0;
        for (h, ms) in self.maps.iter().enumerate() {
            offsets.push(n);
            n += ms.len() * z.size(h);
        }
        let id = |h: usize, p: usize, x: usize| offsets[h] + p * z.size(h) + x;
        let mut dsu = Dsu::new(n);
        for &[h2, p2, h, k, p] in &self.gens {
            let (h2, p2, h, k, p) = (h2 as usize, p2 as usize, h as usize, k as usize, p as usize);
            for x in 0..z.size(h) {
                dsu.union(id(h, p, x), id(h2, p2, z.act(h2, h, k, x)));
            }
        }
        let mut reps: HashMap<usize, usize> = HashMap::new();
        let mut class = Vec::with_capacity(n);
        for i in 0..n {
            let r = dsu.find(i);
            let next = reps.len();
            class.push(*reps.entry(r).or_insert(next));
        }
        Colimit {
            offsets,
            sizes: (0..self.maps.len()).map(|h| z.size(h)).collect(),
            classes: reps.len(),
            class,
        }
    }
}

/// Classes of `∐ Z_H` over the comma category, numbered by first
/// appearance.
#[derive(Clone, Debug)]
pub struct Colimit {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    pub classes: usize,
    class: Vec<usize>,
}

impl Colimit {
    pub fn class_of(&self, h: usize, p: usize, x: usize) -> usize {
        self.class[self.offsets[h] + p * self.sizes[h] + x]
    }
}

/// `f_!Z` at one object by the colimit.
pub fn left_kan_oracle(
    f: Functor,
    z: &FinitePresheaf,
    d: &Site,
    g: usize,
) -> Result<(KanOracle, Colimit), PresheafError> {
    f.check(&z.site, d)?;
    let under = underlying_hosts(&z.site)?;
    let o = KanOracle::build(&z.site, d, &under, g)?;
    let col = o.colimit(z);
    Ok((o, col))
}

/// Comparison of the formula with the colimit for one presheaf.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct KanCheck {
    pub functor: String,
    pub presheaf: String,
    pub objects: usize,
    pub elements: usize,
    pub classes: usize,
    pub generators: usize,
    pub bijection_failures: Vec<String>,
    pub naturality_failures: usize,
    pub functorial: bool,
    /// For a terminal `Z`: whether the formula's tables equal those of the
    /// orientation presheaf.
    pub orientation_match: Option<bool>,
}

impl KanCheck {
    pub fn ok(&self) -> bool {
        self.bijection_failures.is_empty()
            && self.naturality_failures == 0
            && self.functorial
            && self.orientation_match != Some(false)
    }
}

/// The comma element `(R, φ_x, z)` of a formula element at `g`.
fn comma_key(form: &KanFormula, c: &Site, d: &Site, g: usize, s: usize) -> (usize, MapKey) {
    let (r, iso) = &form.reps[g][s];
    let to_g = orientation_iso(form.orientations[g][s], d.objects[g].graph().num_edges());
    let from_g = invert(&to_g);
    let phi0: Vec<usize> = from_g.iter().map(|&t| iso.arcs[t]).collect();
    let host_g = &d.objects[g];
    let gx = Host::new(oriented(host_g.ug(), form.orientations[g][s])).expect("oriented host");
    let phi_hat: Vec<usize> = (0..host_g.len()).map(|y| push_forward(&gx, &c.objects[*r], iso, y)).collect();
    (*r, (phi0, phi_hat))
}

/// Checks the formula against the colimit for each `Z` (all on the same
/// directed site): a bijection at every object, compatible with every map.
pub fn kan_check(
    f: Functor,
    zs: &[FinitePresheaf],
    d: &Arc<Site>,
    exec: Exec,
) -> Result<Vec<KanCheck>, PresheafError> {
    let Some(first) = zs.first() else {
        return Ok(Vec::new());
    };
    let c = first.site.clone();
    if zs.iter().any(|z| !Arc::ptr_eq(&z.site, &c)) {
        return Err(PresheafError::WrongSites);
    }
    f.check(&c, d)?;
    let forms: Vec<KanFormula> = zs
        .iter()
        .map(|z| left_kan_formula(f, z, d, exec))
        .collect::<Result<_, _>>()?;
    let under = underlying_hosts(&c)?;
    // Per object: the comma maps, the colimit of each Z, and the comma key of
    // each summand.
    type Row = (KanOracle, Vec<Colimit>, Vec<(usize, usize)>, usize);
    let rows: Vec<Row> = exec::map_range(exec, d.len(), |g| -> Result<Row, PresheafError> {
        let mut o = KanOracle::build(&c, d, &under, g)?;
        let cols: Vec<Colimit> = zs.iter().map(|z| o.colimit(z)).collect();
        let keys = (0..forms[0].orientations[g].len())
            .map(|s| {
                let (r, key) = comma_key(&forms[0], &c, d, g, s);
                let p = o.find(r, &key).ok_or_else(|| {
                    PresheafError::NotFunctorial(format!("summand {s} at {} is not a comma object", d.name(g)))
                })?;
                Ok((r, p))
            })
            .collect::<Result<_, PresheafError>>()?;
        let n = o.gens.len();
        // The generators are only needed for the colimits.
        o.gens = Vec::new();
        Ok((o, cols, keys, n))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let generators = rows.iter().map(|r| r.3).sum();
    let oriented_ref = if f != Functor::OmegaToUCyc { Some(orientation_presheaf(d)?) } else { None };
    let mut out = Vec::new();
    for (zi, (z, form)) in zs.iter().zip(&forms).enumerate() {
        let fp = &form.presheaf;
        let class_of = |g: usize, e: usize| {
            let (s, x) = form.split(g, e);
            let (r, p) = rows[g].2[s];
            rows[g].1[zi].class_of(r, p, x)
        };
        let mut rep = KanCheck {
            functor: f.tag().to_string(),
            presheaf: z.name.clone(),
            objects: d.len(),
            generators,
            functorial: fp.validate(exec).is_ok(),
            ..Default::default()
        };
        for g in 0..d.len() {
            let col = &rows[g].1[zi];
            rep.elements += fp.size(g);
            rep.classes += col.classes;
            let mut hit = vec![false; col.classes];
            for e in 0..fp.size(g) {
                let k = class_of(g, e);
                if std::mem::replace(&mut hit[k], true) {
                    rep.bijection_failures.push(format!("{}: two summands in one class", d.name(g)));
                }
            }
            if hit.iter().any(|h| !h) {
                rep.bijection_failures.push(format!("{}: class missed by the formula", d.name(g)));
            }
        }
        for g2 in 0..d.len() {
            for g in 0..d.len() {
                for (k, psi) in d.homs[g2][g].iter().enumerate() {
                    for e in 0..fp.size(g) {
                        let (s, x) = form.split(g, e);
                        let (r, p) = rows[g].2[s];
                        let m = &rows[g].0.maps[r][p];
                        let key: MapKey = (
                            psi.phi0.iter().map(|&a| m.phi0[a]).collect(),
                            psi.phi_hat.iter().map(|&y| m.phi_hat[y]).collect(),
                        );
                        let want = rows[g2].0.find(r, &key).map(|p2| rows[g2].1[zi].class_of(r, p2, x));
                        if want != Some(class_of(g2, fp.act(g2, g, k, e))) {
                            rep.naturality_failures += 1;
                        }
                    }
                }
            }
        }
        if let Some(o) = &oriented_ref {
            if (0..c.len()).all(|h| z.size(h) == 1) {
                rep.orientation_match = Some(o.action == fp.action);
            }
        }
        out.push(rep);
    }
    Ok(out)
}

/// `f*X`: the value at `H` is the value of `X` at the representative of
/// `U(H)`, with actions transported along the chosen isomorphisms.
pub fn restrict(f: Functor, x: &FinitePresheaf, c: &Arc<Site>, exec: Exec) -> Result<FinitePresheaf, PresheafError> {
    let d = &x.site;
    f.check(c, d)?;
    let under = underlying_hosts(c)?;
    let reps: Vec<(usize, UEtale)> = under
        .iter()
        .map(|h| d.find(h.graph()).ok_or_else(|| PresheafError::SiteTooSmall(h.graph().name().to_string())))
        .collect::<Result<_, _>>()?;
    let labels = reps.iter().map(|r| x.labels[r.0].clone()).collect();
    FinitePresheaf::from_fn(&format!("{}*{}", f.tag(), x.name), c, labels, exec, |a, b, k, v| {
        let m = &c.homs[a][b][k];
        let k2 = d
            .transport(&under[a], &reps[a], &under[b], &reps[b], &m.phi0, &m.phi_hat)
            .ok_or_else(|| PresheafError::SiteTooSmall(format!("image of a map into {}", c.name(b))))?;
        Ok(x.act(reps[a].0, reps[b].0, k2, v))
    })
}

/// Segal transfer along `f`.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct TransferReport {
    pub functor: String,
    /// `(Y, Y Segal, f_!Y Segal)`.
    pub pushed: Vec<(String, bool, bool)>,
    /// `(X, X Segal, f*X Segal)`.
    pub restricted: Vec<(String, bool, bool)>,
}

impl TransferReport {
    pub fn ok(&self) -> bool {
        self.pushed.iter().all(|&(_, y, fy)| !y || fy) && self.restricted.iter().all(|&(_, x, fx)| x == fx)
    }
}

pub fn segal_transfer_check(
    f: Functor,
    ys: &[FinitePresheaf],
    xs: &[FinitePresheaf],
    c: &Arc<Site>,
    d: &Arc<Site>,
    exec: Exec,
) -> Result<TransferReport, PresheafError> {
    f.check(c, d)?;
    let mut rep = TransferReport {
        functor: f.tag().to_string(),
        ..Default::default()
    };
    for y in ys {
        let pushed = left_kan_formula(f, y, d, exec)?.presheaf;
        rep.pushed.push((y.name.clone(), is_segal(y, exec)?.ok(), is_segal(&pushed, exec)?.ok()));
    }
    for x in xs {
        let fx = restrict(f, x, c, exec)?;
        rep.restricted.push((x.name.clone(), is_segal(x, exec)?.ok(), is_segal(&fx, exec)?.ok()));
    }
    Ok(rep)
}
