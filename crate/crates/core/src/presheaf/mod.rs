//! Finite truncations of the graph categories and set-valued presheaves on
//! them: the Segal condition, orientations, restriction and left Kan
//! extension along the direction-forgetting functors.

mod elements;
mod kan;
mod nerve;
mod orient;
mod segal;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::emb::Host;
use crate::exec::{self, Exec};
use crate::graph::generate::{connected_dgraphs, connected_ugraphs, Bounds};
use crate::graph::iso::{certificate, find_iso};
use crate::graph::{linear, Graph};
use crate::maps::{enumerate_graph_maps, push_forward, Cat, GraphMap, MapError, DEFAULT_BUDGET};
use crate::etale::UEtale;

pub use elements::{elements_equivalence_check, ElementsReport};
pub use kan::{
    left_kan_formula, left_kan_oracle, kan_check, restrict, segal_transfer_check, Functor, KanCheck, KanFormula,
    KanOracle, TransferReport,
};
pub use nerve::nerve;
pub use orient::{canonical_orientation, orient, orientation_presheaf, oriented, orientation_iso, root, Orientation};
pub use segal::{elementary_over, is_segal, segal_limit_join, segal_map, Elementary, SegalMap, SegalReport};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresheafError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Operad(#[from] crate::operad::OperadError),
    #[error("site does not contain a graph isomorphic to {0}")]
    SiteTooSmall(String),
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("presheaf tables have the wrong shape: {0}")]
    BadTables(String),
    #[error("{0} is not a boundary arc")]
    NotBoundaryArc(String),
    #[error("sites do not match the functor")]
    WrongSites,
    #[error("manifest mismatch: {0}")]
    Manifest(String),
}

/// A finite full subcategory: representatives of isomorphism classes of
/// graphs within bounds, closed under realizing embedding elements, with all
/// morphisms between them.
#[derive(Debug)]
pub struct Site {
    pub cat: Cat,
    pub bounds: Bounds,
    pub objects: Vec<Arc<Host>>,
    /// `homs[a][b]` lists the maps `a -> b`.
    pub homs: Vec<Vec<Vec<GraphMap>>>,
    index: Vec<Vec<HashMap<u64, Vec<usize>>>>,
    by_cert: HashMap<Vec<usize>, usize>,
}

fn key_hash(phi0: &[usize], phi_hat: &[usize]) -> u64 {
    let mut h = DefaultHasher::new();
    phi0.hash(&mut h);
    phi_hat.hash(&mut h);
    h.finish()
}

/// Serializable description of a site, enough to rebuild and compare it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub category: String,
    pub bounds: Bounds,
    pub objects: Vec<ManifestObject>,
    pub morphisms: usize,
    pub hom_counts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ManifestObject {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub certificate: Vec<usize>,
}

/// Candidate objects of a category within bounds.
pub fn site_graphs(cat: Cat, b: &Bounds) -> Vec<Graph> {
    let all: Vec<Graph> = match cat {
        Cat::Delta => (0..=b.max_vertices).map(|n| Graph::D(linear(n))).collect(),
        _ if cat.directed() => connected_dgraphs(b).into_iter().map(Graph::D).collect(),
        _ => connected_ugraphs(b).into_iter().map(Graph::U).collect(),
    };
    all.into_iter().filter(|g| cat.contains(g)).collect()
}

impl Site {
    pub fn build(cat: Cat, bounds: Bounds) -> Result<Site, PresheafError> {
        Site::build_with(cat, bounds, Exec::default())
    }

    pub fn build_with(cat: Cat, bounds: Bounds, exec: Exec) -> Result<Site, PresheafError> {
        Site::from_graphs(cat, bounds, site_graphs(cat, &bounds), exec)
    }

    /// A site on the given graphs, closed under realization of elements.
    pub fn from_graphs(cat: Cat, bounds: Bounds, graphs: Vec<Graph>, exec: Exec) -> Result<Site, PresheafError> {
        let (objects, by_cert) = close(cat, graphs)?;
        let n = objects.len();
        let rows = exec::map_range(exec, n, |a| -> Result<Vec<Vec<GraphMap>>, PresheafError> {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let mut maps = enumerate_graph_maps(&objects[a], &objects[b], DEFAULT_BUDGET)?;
                if cat == Cat::G {
                    let mut keep = Vec::new();
                    for m in maps {
                        if cat.contains_map(&m)? {
                            keep.push(m);
                        }
                    }
                    maps = keep;
                }
                row.push(maps);
            }
            Ok(row)
        });
        let homs: Vec<Vec<Vec<GraphMap>>> = rows.into_iter().collect::<Result<_, _>>()?;
        let index = homs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|maps| {
                        let mut m: HashMap<u64, Vec<usize>> = HashMap::new();
                        for (k, f) in maps.iter().enumerate() {
                            m.entry(key_hash(&f.phi0, &f.phi_hat)).or_default().push(k);
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        Ok(Site {
            cat,
            bounds,
            objects,
            homs,
            index,
            by_cert,
        })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        self.objects[a].graph().name()
    }

    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|h| h.graph().name() == name)
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.iter().flatten().map(|v| v.len()).sum()
    }

    /// Index of the map `a -> b` with the given tables.
    pub fn lookup(&self, a: usize, b: usize, phi0: &[usize], phi_hat: &[usize]) -> Option<usize> {
        let cands = self.index[a][b].get(&key_hash(phi0, phi_hat))?;
        cands
            .iter()
            .copied()
            .find(|&k| self.homs[a][b][k].phi0 == phi0 && self.homs[a][b][k].phi_hat == phi_hat)
    }

    /// The index of `g ∘ f` for `f: a -> b`, `g: b -> c`.
    pub fn compose(&self, a: usize, b: usize, c: usize, f: usize, g: usize) -> Option<usize> {
        let (f, g) = (&self.homs[a][b][f], &self.homs[b][c][g]);
        let phi0: Vec<usize> = f.phi0.iter().map(|&x| g.phi0[x]).collect();
        let phi_hat: Vec<usize> = f.phi_hat.iter().map(|&x| g.phi_hat[x]).collect();
        self.lookup(a, c, &phi0, &phi_hat)
    }

    pub fn identity(&self, a: usize) -> usize {
        let h = &self.objects[a];
        let id: Vec<usize> = (0..h.ug().num_arcs()).collect();
        let idh: Vec<usize> = (0..h.len()).collect();
        self.lookup(a, a, &id, &idh).expect("identity is a morphism")
    }

    /// The representative isomorphic to `g`, with an isomorphism `g -> rep`.
    pub fn find(&self, g: &Graph) -> Option<(usize, UEtale)> {
        let &a = self.by_cert.get(&certificate(g))?;
        let iso = find_iso(g, self.objects[a].graph())?;
        Some((
            a,
            UEtale {
                arcs: iso.arcs,
                vertices: iso.vertices,
            },
        ))
    }

    /// Transports a map `g -> h` between arbitrary graphs along isomorphisms
    /// `g -> rep_a` and `h -> rep_b`, returning its index in the site.
    pub fn transport(
        &self,
        src: &Host,
        src_iso: &(usize, UEtale),
        tgt: &Host,
        tgt_iso: &(usize, UEtale),
        phi0: &[usize],
        phi_hat: &[usize],
    ) -> Option<usize> {
        let (a, ia) = src_iso;
        let (b, ib) = tgt_iso;
        let (ra, rb) = (&self.objects[*a], &self.objects[*b]);
        let inv_arcs = invert(&ia.arcs);
        let inv_vs = invert(&ia.vertices);
        let inv = UEtale {
            arcs: inv_arcs.clone(),
            vertices: inv_vs,
        };
        let p0: Vec<usize> = inv_arcs.iter().map(|&x| ib.arcs[phi0[x]]).collect();
        let ph: Vec<usize> = (0..ra.len())
            .map(|y| push_forward(tgt, rb, ib, phi_hat[push_forward(ra, src, &inv, y)]))
            .collect();
        self.lookup(*a, *b, &p0, &ph)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            version: MANIFEST_VERSION,
            category: self.cat.tag().to_string(),
            bounds: self.bounds,
            objects: self
                .objects
                .iter()
                .map(|h| ManifestObject {
                    name: h.graph().name().to_string(),
                    vertices: h.graph().num_vertices(),
                    edges: h.graph().num_edges(),
                    certificate: certificate(h.graph()),
                })
                .collect(),
            morphisms: self.morphism_count(),
            hom_counts: self.homs.iter().map(|r| r.iter().map(|v| v.len()).collect()).collect(),
        }
    }

    /// Rebuilds the site a manifest describes and compares.
    pub fn check_manifest(m: &Manifest) -> Result<Site, PresheafError> {
        if m.version != MANIFEST_VERSION {
            return Err(PresheafError::Manifest(format!("version {}", m.version)));
        }
        let cat = Cat::parse(&m.category).ok_or_else(|| PresheafError::Manifest(m.category.clone()))?;
        let s = Site::build(cat, m.bounds)?;
        let got = s.manifest();
        if got != *m {
            return Err(PresheafError::Manifest("rebuilt site differs".into()));
        }
        Ok(s)
    }

    /// Objects that are edges or stars.
    pub fn elementary(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| {
                let sh = crate::graph::shape(self.objects[a].graph());
                sh.is_edge || sh.is_star
            })
            .collect()
    }
}

/// Representatives of the given graphs in `cat` together with
/// realizations of all their elements, repeated until nothing new appears.
fn close(cat: Cat, graphs: Vec<Graph>) -> Result<(Vec<Arc<Host>>, HashMap<Vec<usize>, usize>), PresheafError> {
    let mut objects: Vec<Arc<Host>> = Vec::new();
    let mut by_cert = HashMap::new();
    let mut queue: Vec<Graph> = graphs;
    let mut qi = 0;
    while qi < queue.len() {
        let g = queue[qi].clone();
        qi += 1;
        if !cat.contains(&g) {
            continue;
        }
        let c = certificate(&g);
        if by_cert.contains_key(&c) {
            continue;
        }
        let name = g.name().to_string();
        let h = Host::new(g).map_err(MapError::from)?;
        for x in 0..h.len() {
            let r = match h.graph() {
                Graph::D(_) => Graph::D(h.realize_directed(x).unwrap().0),
                Graph::U(_) => Graph::U(h.realize(x).0),
            };
            if !by_cert.contains_key(&certificate(&r)) {
                queue.push(r.with_name(&format!("{name}.{x}")));
            }
        }
        by_cert.insert(c, objects.len());
        objects.push(Arc::new(h));
    }
    Ok((objects, by_cert))
}

/// Object lists for a directed site and an undirected one, each closed under
/// realization and under orienting or forgetting along `f`.
pub fn paired_graphs(f: Functor, bounds: &Bounds) -> Result<(Vec<Graph>, Vec<Graph>), PresheafError> {
    let (mut cg, mut dg) = (site_graphs(f.source(), bounds), site_graphs(f.target(), bounds));
    loop {
        let (cs, _) = close(f.source(), cg.clone())?;
        let (ds, _) = close(f.target(), dg.clone())?;
        let mut grew = false;
        let dcerts: HashSet<Vec<usize>> = ds.iter().map(|h| certificate(h.graph())).collect();
        for h in &cs {
            let u = Graph::U(h.ug().clone());
            if !dcerts.contains(&certificate(&u)) {
                dg.push(u.with_name(&format!("U{}", h.graph().name())));
                grew = true;
            }
        }
        let ccerts: HashSet<Vec<usize>> = cs.iter().map(|h| certificate(h.graph())).collect();
        for h in &ds {
            for x in f.orientations(h.graph())? {
                let o = Graph::D(orient(h.ug(), x));
                if !ccerts.contains(&certificate(&o)) {
                    cg.push(o.with_name(&format!("{}_{x:b}", h.graph().name())));
                    grew = true;
                }
            }
        }
        if !grew {
            let names = |hs: Vec<Arc<Host>>| hs.iter().map(|h| h.graph().clone()).collect();
            return Ok((names(cs), names(ds)));
        }
    }
}

/// The two sites of `f` at the given bounds.
pub fn paired_sites(f: Functor, bounds: Bounds, exec: Exec) -> Result<(Arc<Site>, Arc<Site>), PresheafError> {
    let (cg, dg) = paired_graphs(f, &bounds)?;
    Ok((
        Arc::new(Site::from_graphs(f.source(), bounds, cg, exec)?),
        Arc::new(Site::from_graphs(f.target(), bounds, dg, exec)?),
    ))
}

pub(crate) fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// A set-valued presheaf given by its values and the action of every map.
#[derive(Clone, Debug)]
pub struct FinitePresheaf {
    pub name: String,
    pub site: Arc<Site>,
    pub labels: Vec<Vec<String>>,
    /// `action[a][b][k][x]` is the image in `X_a` of `x ∈ X_b` along the
    /// `k`-th map `a -> b`.
    pub action: Vec<Vec<Vec<Vec<u32>>>>,
}

impl FinitePresheaf {
    /// Builds the action tables from a function `(a, b, k, x) -> y`.
    pub fn from_fn<F>(name: &str, site: &Arc<Site>, labels: Vec<Vec<String>>, exec: Exec, f: F) -> Result<Self, PresheafError>
    where
        F: Fn(usize, usize, usize, usize) -> Result<usize, PresheafError> + Sync + Send,
    {
        let n = site.len();
        let rows = exec::map_range(exec, n, |a| -> Result<Vec<Vec<Vec<u32>>>, PresheafError> {
            (0..n)
                .map(|b| {
                    (0..site.homs[a][b].len())
                        .map(|k| (0..labels[b].len()).map(|x| f(a, b, k, x).map(|y| y as u32)).collect())
                        .collect()
                })
                .collect()
        });
        Ok(FinitePresheaf {
            name: name.to_string(),
            site: site.clone(),
            labels,
            action: rows.into_iter().collect::<Result<_, _>>()?,
        })
    }

    pub fn size(&self, a: usize) -> usize {
        self.labels[a].len()
    }

    /// `X(k)(x)` for the `k`-th map `a -> b`.
    pub fn act(&self, a: usize, b: usize, k: usize, x: usize) -> usize {
        self.action[a][b][k][x] as usize
    }

    /// Checks table shapes, identities and composition over the whole site.
    pub fn validate(&self, exec: Exec) -> Result<(), PresheafError> {
        let s = &self.site;
        let n = s.len();
        if self.labels.len() != n || self.action.len() != n {
            return Err(PresheafError::BadTables(self.name.clone()));
        }
        for a in 0..n {
            for b in 0..n {
                if self.action[a][b].len() != s.homs[a][b].len() {
                    return Err(PresheafError::BadTables(format!("{} -> {}", s.name(a), s.name(b))));
                }
                for t in &self.action[a][b] {
                    if t.len() != self.size(b) || t.iter().any(|&y| y as usize >= self.size(a)) {
                        return Err(PresheafError::BadTables(format!("{} -> {}", s.name(a), s.name(b))));
                    }
                }
            }
            let id = s.identity(a);
            if self.action[a][a][id].iter().enumerate().any(|(x, &y)| x != y as usize) {
                return Err(PresheafError::NotFunctorial(format!("identity of {}", s.name(a))));
            }
        }
        let res = exec::map_range(exec, n, |a| -> Result<(), PresheafError> {
            for b in 0..n {
                for f in 0..s.homs[a][b].len() {
                    for c in 0..n {
                        for g in 0..s.homs[b][c].len() {
                            let gf = s
                                .compose(a, b, c, f, g)
                                .ok_or_else(|| PresheafError::NotFunctorial("site not closed under composition".into()))?;
                            let direct = &self.action[a][c][gf];
                            let (xf, xg) = (&self.action[a][b][f], &self.action[b][c][g]);
                            if (0..self.size(c)).any(|z| direct[z] != xf[xg[z] as usize]) {
                                return Err(PresheafError::NotFunctorial(format!(
                                    "{} -> {} -> {}",
                                    s.name(a),
                                    s.name(b),
                                    s.name(c)
                                )));
                            }
                        }
                    }
                }
            }
            Ok(())
        });
        res.into_iter().collect()
    }
}

/// The presheaf with one element everywhere.
pub fn terminal(site: &Arc<Site>) -> FinitePresheaf {
    let labels = vec![vec!["*".to_string()]; site.len()];
    FinitePresheaf::from_fn("terminal", site, labels, Exec::Sequential, |_, _, _, _| Ok(0)).unwrap()
}

/// The presheaf `Hom(-, G)`.
pub fn representable(site: &Arc<Site>, g: usize) -> FinitePresheaf {
    let labels: Vec<Vec<String>> = (0..site.len())
        .map(|a| (0..site.homs[a][g].len()).map(|k| format!("{}#{k}", site.name(a))).collect())
        .collect();
    FinitePresheaf::from_fn(&format!("hom(-,{})", site.name(g)), site, labels, Exec::default(), |a, b, k, x| {
        site.compose(a, b, g, k, x)
            .ok_or_else(|| PresheafError::NotFunctorial("site not closed under composition".into()))
    })
    .unwrap()
}

/// The subterminal presheaf of objects admitting a map to an edge or star.
/// Elementary objects are inhabited, so it fails the Segal condition at
/// every empty object.
pub fn elementary_sieve(site: &Arc<Site>) -> FinitePresheaf {
    let el = site.elementary();
    let labels = (0..site.len())
        .map(|a| {
            if el.iter().any(|&k| !site.homs[a][k].is_empty()) {
                vec!["*".to_string()]
            } else {
                Vec::new()
            }
        })
        .collect();
    FinitePresheaf::from_fn("elementary-sieve", site, labels, Exec::default(), |_, _, _, _| Ok(0)).unwrap()
}

/// Both tables are bijections.
pub fn is_iso(m: &GraphMap) -> bool {
    let bij = |p: &[usize], n: usize| p.len() == n && p.iter().collect::<HashSet<_>>().len() == n;
    bij(&m.phi0, m.target.ug().num_arcs()) && bij(&m.phi_hat, m.target.len())
}

/// Elements of `X` that are distinct in the tables, as a sanity check.
pub fn distinct_labels(x: &FinitePresheaf) -> bool {
    x.labels.iter().all(|l| l.iter().collect::<HashSet<_>>().len() == l.len())
}
