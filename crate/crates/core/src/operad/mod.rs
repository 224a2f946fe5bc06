//! Colored operads of several flavors, presented by finite tables.
//!
//! Operations carry an ordered list of ports, each with a color. For the
//! directed flavors the first `n_in` ports are inputs and the rest outputs;
//! for the undirected flavors `n_in` equals the arity. Permutations act on
//! the right: `(p·σ).ports[k] = p.ports[σ[k]]`.

mod battery;
mod eval;
mod free;
mod validate;

use std::collections::HashMap;

pub use battery::*;
pub use eval::{check_decoration, collapse, decorations, evaluate, tag_color, vertex_tags, DecoratedGraph, Decoration};
pub use free::{free_cyclic, hom_to_tree_map, operad_homs, tree_map_to_hom, FreeCyclic, OperadHom};
pub use validate::{validate, validate_with};

pub type ColorId = usize;
pub type OpId = usize;
pub type Perm = Vec<usize>;

/// Default largest arity that tables must cover.
pub const DEFAULT_CAP: usize = 4;
/// Default largest number of operations sharing one profile.
pub const DEFAULT_PROFILE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperadError {
    #[error("involution is not self-inverse at color {0}")]
    BadInvolution(String),
    #[error("directed flavors need the identity involution")]
    DirectedInvolution,
    #[error("unknown color or operation: {0}")]
    Unknown(String),
    #[error("operation {0} exceeds the arity cap")]
    ArityCapExceeded(String),
    #[error("profile {0} has more operations than allowed")]
    OpSetTooLarge(String),
    #[error("cyclic flavor cannot have the empty-profile operation {0}")]
    AugmentationForbidden(String),
    #[error("no identity for color {0}")]
    MissingUnit(String),
    #[error("identity {0} has the wrong profile")]
    BadUnit(String),
    #[error("action of {0} is missing")]
    MissingAction(String),
    #[error("action law fails: {0}")]
    ActionLawViolated(String),
    #[error("composition {0} is missing")]
    MissingComposition(String),
    #[error("composition {0} is not between matching ports")]
    BadComposition(String),
    #[error("contraction {0} is missing")]
    MissingContraction(String),
    #[error("contraction {0} is not between matching ports")]
    BadContraction(String),
    #[error("flavor has no contractions, needed for {0}")]
    FlavorLacksContraction(String),
    #[error("result of {0} has the wrong profile")]
    ProfileMismatch(String),
    #[error("equivariance fails: {0}")]
    EquivarianceViolated(String),
    #[error("associativity fails: {0}")]
    AssociativityViolated(String),
    #[error("identity law fails: {0}")]
    IdentityLawViolated(String),
    #[error("decoration does not match the coloring at {0}")]
    DecorationMismatch(String),
    #[error("presentation and graph differ in directedness")]
    FlavorMismatch,
    #[error("graph is not a tree")]
    NotATree,
    #[error("decorated graph is not connected")]
    Disconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    AugCyclic,
    Cyclic,
    Modular,
    Dioperad,
    Wheeled,
}

impl Flavor {
    pub const ALL: [Flavor; 5] = [
        Flavor::AugCyclic,
        Flavor::Cyclic,
        Flavor::Modular,
        Flavor::Dioperad,
        Flavor::Wheeled,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Flavor::AugCyclic => "augcyclic",
            Flavor::Cyclic => "cyclic",
            Flavor::Modular => "modular",
            Flavor::Dioperad => "dioperad",
            Flavor::Wheeled => "wheeled",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        Flavor::ALL.into_iter().find(|f| f.tag().eq_ignore_ascii_case(s))
    }

    pub fn directed(&self) -> bool {
        matches!(self, Flavor::Dioperad | Flavor::Wheeled)
    }

    pub fn has_contraction(&self) -> bool {
        matches!(self, Flavor::Modular | Flavor::Wheeled)
    }

    /// The graph category whose nerve this flavor is tested on.
    pub fn site(&self) -> crate::maps::Cat {
        use crate::maps::Cat;
        match self {
            Flavor::AugCyclic => Cat::U0,
            Flavor::Cyclic => Cat::UCyc,
            Flavor::Modular => Cat::U,
            Flavor::Dioperad => Cat::O0,
            Flavor::Wheeled => Cat::O,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    pub name: String,
    pub ports: Vec<ColorId>,
    pub n_in: usize,
}

impl Op {
    pub fn arity(&self) -> usize {
        self.ports.len()
    }
}

/// A finitely tabulated operad. Composition keys are `(p, i, q, j)` with
/// port indices; in the directed flavors `i` is an input of `p` and `j` an
/// output of `q`. Contraction keys are `(p, i, j)` with `i < j`, or in the
/// directed flavors `i` an input and `j` an output.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub flavor: Flavor,
    pub colors: Vec<String>,
    pub involution: Vec<ColorId>,
    pub cap: usize,
    pub profile_limit: usize,
    pub ops: Vec<Op>,
    pub units: Vec<Option<OpId>>,
    pub act: HashMap<(OpId, Perm), OpId>,
    pub compose: HashMap<(OpId, usize, OpId, usize), OpId>,
    pub contract: HashMap<(OpId, usize, usize), OpId>,
}

/// An operation together with a label on each of its ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blob<T> {
    pub op: OpId,
    pub tags: Vec<T>,
}

impl Presentation {
    pub fn new(name: &str, flavor: Flavor, colors: &[&str], involution: &[ColorId], cap: usize) -> Presentation {
        Presentation {
            name: name.to_string(),
            flavor,
            colors: colors.iter().map(|c| c.to_string()).collect(),
            involution: involution.to_vec(),
            cap,
            profile_limit: DEFAULT_PROFILE_LIMIT,
            ops: Vec::new(),
            units: vec![None; colors.len()],
            act: HashMap::new(),
            compose: HashMap::new(),
            contract: HashMap::new(),
        }
    }

    pub fn directed(&self) -> bool {
        self.flavor.directed()
    }

    pub fn add_op(&mut self, name: &str, ports: &[ColorId], n_in: usize) -> OpId {
        self.ops.push(Op {
            name: name.to_string(),
            ports: ports.to_vec(),
            n_in: if self.directed() { n_in } else { ports.len() },
        });
        self.ops.len() - 1
    }

    pub fn find_op(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn find_color(&self, name: &str) -> Option<ColorId> {
        self.colors.iter().position(|c| c == name)
    }

    pub fn inv(&self, c: ColorId) -> ColorId {
        self.involution[c]
    }

    /// Whether port `i` of `p` can be glued to port `j` of `q`.
    pub fn composable(&self, p: OpId, i: usize, q: OpId, j: usize) -> bool {
        let (a, b) = (&self.ops[p], &self.ops[q]);
        if i >= a.arity() || j >= b.arity() {
            return false;
        }
        if self.directed() {
            i < a.n_in && j >= b.n_in && a.ports[i] == b.ports[j]
        } else {
            a.ports[i] == self.inv(b.ports[j])
        }
    }

    /// Whether ports `i` and `j` of `p` can be glued together.
    pub fn contractible(&self, p: OpId, i: usize, j: usize) -> bool {
        let a = &self.ops[p];
        if i >= a.arity() || j >= a.arity() || i == j {
            return false;
        }
        if self.directed() {
            i < a.n_in && j >= a.n_in && a.ports[i] == a.ports[j]
        } else {
            i < j && a.ports[i] == self.inv(a.ports[j])
        }
    }

    /// Operations indexed by their profile `(ports, n_in)`.
    pub fn by_profile(&self) -> HashMap<(Vec<ColorId>, usize), Vec<OpId>> {
        let mut m: HashMap<(Vec<ColorId>, usize), Vec<OpId>> = HashMap::new();
        for (k, o) in self.ops.iter().enumerate() {
            m.entry((o.ports.clone(), o.n_in)).or_default().push(k);
        }
        m
    }

    pub fn act_on(&self, p: OpId, sigma: &[usize]) -> Result<OpId, OperadError> {
        if sigma.iter().enumerate().all(|(k, &s)| k == s) {
            return Ok(p);
        }
        self.act
            .get(&(p, sigma.to_vec()))
            .copied()
            .ok_or_else(|| OperadError::MissingAction(format!("{} {:?}", self.ops[p].name, sigma)))
    }

    pub fn compose_ops(&self, p: OpId, i: usize, q: OpId, j: usize) -> Result<OpId, OperadError> {
        self.compose
            .get(&(p, i, q, j))
            .copied()
            .ok_or_else(|| OperadError::MissingComposition(self.compose_name(p, i, q, j)))
    }

    pub fn contract_op(&self, p: OpId, i: usize, j: usize) -> Result<OpId, OperadError> {
        if !self.flavor.has_contraction() {
            return Err(OperadError::FlavorLacksContraction(self.ops[p].name.clone()));
        }
        self.contract
            .get(&(p, i, j))
            .copied()
            .ok_or_else(|| OperadError::MissingContraction(format!("{} {i} {j}", self.ops[p].name)))
    }

    pub(crate) fn compose_name(&self, p: OpId, i: usize, q: OpId, j: usize) -> String {
        format!("{} {i} {j} {}", self.ops[p].name, self.ops[q].name)
    }

    /// Glues port `i` of `a` to port `j` of `b`.
    pub fn compose_blobs<T: Clone>(&self, a: &Blob<T>, i: usize, b: &Blob<T>, j: usize) -> Result<Blob<T>, OperadError> {
        let (p, q) = (&self.ops[a.op], &self.ops[b.op]);
        let n = p.arity() + q.arity() - 2;
        if n > self.cap {
            return Err(OperadError::ArityCapExceeded(self.compose_name(a.op, i, b.op, j)));
        }
        let op = self.compose_ops(a.op, i, b.op, j)?;
        let (tags, _) = compose_tags(&a.tags, p.n_in, i, &b.tags, q.n_in, j, self.directed());
        Ok(Blob { op, tags })
    }

    /// Glues ports `i` and `j` of `a`, given in either order.
    pub fn contract_blob<T: Clone>(&self, a: &Blob<T>, i: usize, j: usize) -> Result<Blob<T>, OperadError> {
        let p = &self.ops[a.op];
        let (i, j) = if self.directed() {
            if i < p.n_in {
                (i, j)
            } else {
                (j, i)
            }
        } else {
            (i.min(j), i.max(j))
        };
        let op = self.contract_op(a.op, i, j)?;
        let (tags, _) = contract_tags(&a.tags, p.n_in, i, j, self.directed());
        Ok(Blob { op, tags })
    }

    /// The operation of `b` reordered so that its ports carry `order`.
    pub fn reorder<T: PartialEq + std::fmt::Debug>(&self, b: &Blob<T>, order: &[T]) -> Result<OpId, OperadError> {
        let sigma = match_perm(&b.tags, order)
            .ok_or_else(|| OperadError::ProfileMismatch(format!("{:?} vs {:?}", b.tags, order)))?;
        self.act_on(b.op, &sigma)
    }

    /// Permutations acting on an operation: all of them, or the block
    /// preserving ones in the directed flavors.
    pub fn perms_of(&self, p: OpId) -> Vec<Perm> {
        let o = &self.ops[p];
        block_perms(o.n_in, o.arity())
    }

    /// Generators of `perms_of`: adjacent transpositions within a block.
    pub fn generators_of(&self, p: OpId) -> Vec<Perm> {
        let o = &self.ops[p];
        let n = o.arity();
        (0..n.saturating_sub(1))
            .filter(|&k| k + 1 != o.n_in)
            .map(|k| {
                let mut s: Perm = (0..n).collect();
                s.swap(k, k + 1);
                s
            })
            .collect()
    }

    /// Fills in the action table from the given entries by composing
    /// permutations. Conflicting entries are an action-law violation.
    pub fn close_actions(&mut self) -> Result<(), OperadError> {
        let mut known: Vec<HashMap<Perm, OpId>> = vec![HashMap::new(); self.ops.len()];
        for (&(p, ref s), &q) in &self.act {
            known[p].insert(s.clone(), q);
        }
        let base: Vec<Vec<(Perm, OpId)>> = known.iter().map(|m| m.iter().map(|(s, &q)| (s.clone(), q)).collect()).collect();
        for (p, kp) in known.iter_mut().enumerate() {
            kp.insert((0..self.ops[p].arity()).collect(), p);
        }
        // Breadth first over words in the given generators.
        loop {
            let mut changed = false;
            for p in 0..self.ops.len() {
                let entries: Vec<(Perm, OpId)> = known[p].iter().map(|(s, &q)| (s.clone(), q)).collect();
                for (s, q) in entries {
                    for (t, r) in &base[q] {
                        let st: Perm = t.iter().map(|&k| s[k]).collect();
                        match known[p].get(&st) {
                            Some(&x) if x != *r => {
                                return Err(OperadError::ActionLawViolated(format!(
                                    "{} {:?}",
                                    self.ops[p].name, st
                                )))
                            }
                            Some(_) => {}
                            None => {
                                known[p].insert(st, *r);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.act.clear();
        for (p, m) in known.into_iter().enumerate() {
            for (s, q) in m {
                if s.iter().enumerate().any(|(k, &x)| k != x) {
                    self.act.insert((p, s), q);
                }
            }
        }
        Ok(())
    }

    pub fn profile_string(&self, p: OpId) -> String {
        let o = &self.ops[p];
        let names: Vec<&str> = o.ports.iter().map(|&c| self.colors[c].as_str()).collect();
        if self.directed() {
            format!("({} -> {})", names[..o.n_in].join(" "), names[o.n_in..].join(" "))
        } else {
            format!("({})", names.join(" "))
        }
    }
}

/// Port labels after gluing port `i` of `p` to port `j` of `q`, and the
/// number of inputs of the result.
///
/// Undirected: `p[..i] q[j+1..] q[..j] p[i+1..]`. Directed (`i` an input of
/// `p`, `j` an output of `q`): the inputs of `q` replace input `i` of `p`,
/// and the outputs of `p` replace output `j` of `q`.
pub fn compose_tags<T: Clone>(
    p: &[T],
    p_in: usize,
    i: usize,
    q: &[T],
    q_in: usize,
    j: usize,
    directed: bool,
) -> (Vec<T>, usize) {
    let mut out = Vec::with_capacity(p.len() + q.len() - 2);
    if directed {
        out.extend_from_slice(&p[..i]);
        out.extend_from_slice(&q[..q_in]);
        out.extend_from_slice(&p[i + 1..p_in]);
        let n_in = out.len();
        out.extend_from_slice(&q[q_in..j]);
        out.extend_from_slice(&p[p_in..]);
        out.extend_from_slice(&q[j + 1..]);
        (out, n_in)
    } else {
        out.extend_from_slice(&p[..i]);
        out.extend_from_slice(&q[j + 1..]);
        out.extend_from_slice(&q[..j]);
        out.extend_from_slice(&p[i + 1..]);
        let n = out.len();
        (out, n)
    }
}

/// Port labels after gluing ports `i` and `j` of one operation.
pub fn contract_tags<T: Clone>(p: &[T], n_in: usize, i: usize, j: usize, directed: bool) -> (Vec<T>, usize) {
    let out: Vec<T> = p
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, t)| t.clone())
        .collect();
    let n = if directed { n_in - 1 } else { out.len() };
    (out, n)
}

/// `σ` with `to[k] = from[σ[k]]`, when `to` is a rearrangement of `from`.
pub fn match_perm<T: PartialEq>(from: &[T], to: &[T]) -> Option<Perm> {
    if from.len() != to.len() {
        return None;
    }
    let mut used = vec![false; from.len()];
    let mut sigma = Vec::with_capacity(to.len());
    for t in to {
        let k = (0..from.len()).find(|&k| !used[k] && from[k] == *t)?;
        used[k] = true;
        sigma.push(k);
    }
    Some(sigma)
}

/// All permutations of `0..n` preserving the blocks `0..n_in` and `n_in..n`.
pub fn block_perms(n_in: usize, n: usize) -> Vec<Perm> {
    let ins: Vec<usize> = (0..n_in).collect();
    let outs: Vec<usize> = (n_in..n).collect();
    let mut out = Vec::new();
    for a in itertools::Itertools::permutations(ins.iter().copied(), ins.len()) {
        for b in itertools::Itertools::permutations(outs.iter().copied(), outs.len()) {
            let mut s = a.clone();
            s.extend(b);
            out.push(s);
        }
    }
    out
}
