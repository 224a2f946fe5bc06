//! Elementary covers, Segal limits and the Segal condition.

use super::{FinitePresheaf, PresheafError, Site};
use crate::exec::{self, Exec};

/// The inert maps from edges and stars into a graph, one per element, and
/// the maps between them over the graph.
#[derive(Clone, Debug)]
pub struct Elementary {
    /// `(site object K, index of the inert map K -> G, element of G)`,
    /// stars first.
    pub objects: Vec<(usize, usize, usize)>,
    /// `(i, i', j)`: the `j`-th map `K_i -> K_i'` lying over `G`.
    pub morphisms: Vec<(usize, usize, usize)>,
}

impl Elementary {
    pub fn is_star(&self, site: &Site, i: usize) -> bool {
        site.objects[self.objects[i].0].graph().num_vertices() == 1
    }
}

pub fn elementary_over(site: &Site, g: usize) -> Result<Elementary, PresheafError> {
    let host = &site.objects[g];
    let elem_objs = site.elementary();
    let mut wanted: Vec<usize> = (0..host.graph().num_vertices()).map(|v| host.vertex_elem(v)).collect();
    wanted.extend((0..host.graph().num_edges()).map(|e| host.edge_elem(e)));
    let mut objects = Vec::new();
    for y in wanted {
        let found = elem_objs.iter().find_map(|&k| {
            let top = site.objects[k].max()?;
            site.homs[k][g]
                .iter()
                .position(|m| m.is_inert() && m.phi_hat[top] == y)
                .map(|i| (k, i, y))
        });
        let f = found.ok_or_else(|| PresheafError::SiteTooSmall(format!("elementary piece {} of {}", host.display(y), site.name(g))))?;
        objects.push(f);
    }
    let mut morphisms = Vec::new();
    for (i, &(ki, mi, _)) in objects.iter().enumerate() {
        for (i2, &(ki2, mi2, _)) in objects.iter().enumerate() {
            let target = &site.homs[ki][g][mi];
            let over = &site.homs[ki2][g][mi2];
            for (j, m) in site.homs[ki][ki2].iter().enumerate() {
                let same = m.phi0.iter().zip(&target.phi0).all(|(&a, &b)| over.phi0[a] == b)
                    && m.phi_hat.iter().zip(&target.phi_hat).all(|(&a, &b)| over.phi_hat[a] == b);
                if same {
                    morphisms.push((i, i2, j));
                }
            }
        }
    }
    Ok(Elementary { objects, morphisms })
}

/// Compatible families over the elementary cover, by constraint
/// propagation: choosing a value at a star forces the values at the edges
/// mapping into it.
pub fn segal_limit(x: &FinitePresheaf, el: &Elementary) -> Vec<Vec<usize>> {
    let n = el.objects.len();
    let mut into: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut out_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(i, i2, j) in &el.morphisms {
        into[i2].push((i, j));
        out_of[i].push((i2, j));
    }
    let mut st = Solver {
        x,
        el,
        into,
        out_of,
        val: vec![None; n],
        trail: Vec::new(),
        out: Vec::new(),
    };
    st.next(0);
    st.out.sort();
    st.out
}

struct Solver<'a> {
    x: &'a FinitePresheaf,
    el: &'a Elementary,
    into: Vec<Vec<(usize, usize)>>,
    out_of: Vec<Vec<(usize, usize)>>,
    val: Vec<Option<usize>>,
    trail: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl Solver<'_> {
    fn image(&self, i: usize, i2: usize, j: usize, v: usize) -> usize {
        let (a, b) = (self.el.objects[i].0, self.el.objects[i2].0);
        self.x.act(a, b, j, v)
    }

    /// Assigns `v` to `i` and everything it forces; false on a conflict.
    fn set(&mut self, i: usize, v: usize) -> bool {
        self.val[i] = Some(v);
        self.trail.push(i);
        for k in 0..self.out_of[i].len() {
            let (i2, j) = self.out_of[i][k];
            if let Some(w) = self.val[i2] {
                if self.image(i, i2, j, w) != v {
                    return false;
                }
            }
        }
        for k in 0..self.into[i].len() {
            let (i0, j) = self.into[i][k];
            let forced = self.image(i0, i, j, v);
            match self.val[i0] {
                Some(w) if w != forced => return false,
                Some(_) => {}
                None => {
                    if !self.set(i0, forced) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.val[i] = None;
        }
    }

    fn next(&mut self, from: usize) {
        let Some(i) = (from..self.val.len()).find(|&i| self.val[i].is_none()) else {
            self.out.push(self.val.iter().map(|v| v.unwrap()).collect());
            return;
        };
        let size = self.x.size(self.el.objects[i].0);
        for v in 0..size {
            let mark = self.trail.len();
            if self.set(i, v) {
                self.next(i + 1);
            }
            self.undo(mark);
        }
    }
}

/// The same limit by joining one object at a time and filtering by every
/// constraint whose ends are both joined.
pub fn segal_limit_join(x: &FinitePresheaf, el: &Elementary) -> Vec<Vec<usize>> {
    let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
    for i in 0..el.objects.len() {
        let size = x.size(el.objects[i].0);
        let mut next = Vec::new();
        for t in &partial {
            for v in 0..size {
                let mut t2 = t.clone();
                t2.push(v);
                let ok = el.morphisms.iter().all(|&(a, b, j)| {
                    if a > i || b > i || (a != i && b != i) {
                        return true;
                    }
                    x.act(el.objects[a].0, el.objects[b].0, j, t2[b]) == t2[a]
                });
                if ok {
                    next.push(t2);
                }
            }
        }
        partial = next;
    }
    partial.sort();
    partial
}

/// The Segal map at one object, its limit, and whether it is a bijection.
#[derive(Clone, Debug)]
pub struct SegalMap {
    pub images: Vec<Vec<usize>>,
    pub limit: Vec<Vec<usize>>,
    pub injective: bool,
    pub bijective: bool,
}

pub fn segal_map(x: &FinitePresheaf, g: usize) -> Result<SegalMap, PresheafError> {
    let el = elementary_over(&x.site, g)?;
    let images: Vec<Vec<usize>> = (0..x.size(g))
        .map(|v| el.objects.iter().map(|&(k, m, _)| x.act(k, g, m, v)).collect())
        .collect();
    let limit = segal_limit(x, &el);
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let injective = sorted.len() == images.len();
    let bijective = injective && sorted == limit;
    Ok(SegalMap {
        images,
        limit,
        injective,
        bijective,
    })
}

/// Outcome of checking the Segal condition at every object.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct SegalReport {
    pub presheaf: String,
    pub objects: usize,
    /// `(object, |X_G|, |limit|, injective)` for each failure, in site order.
    pub failures: Vec<(String, usize, usize, bool)>,
}

impl SegalReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn is_segal(x: &FinitePresheaf, exec: Exec) -> Result<SegalReport, PresheafError> {
    let site = &x.site;
    let rows = exec::map_range(exec, site.len(), |g| segal_map(x, g).map(|m| (g, m)));
    let mut rep = SegalReport {
        presheaf: x.name.clone(),
        objects: site.len(),
        failures: Vec::new(),
    };
    for r in rows {
        let (g, m) = r?;
        if !m.bijective {
            rep.failures.push((site.name(g).to_string(), x.size(g), m.limit.len(), m.injective));
        }
    }
    Ok(rep)
}
