//! Line-oriented text formats for graphs, étale maps, graph maps, operads and
//! presheaves. A file holds any number of blocks; `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;

use crate::emb::{EmbElement, Host};
use crate::etale::UEtale;
use crate::graph::{edge_of, partner, shape, ArcId, DGraph, Graph, GraphError, UGraph};
use crate::maps::{extend_tree_map, search, validate, Constraints, GraphMap, MapError, DEFAULT_BUDGET};
use crate::operad::{Flavor, OpId, OperadError, Presentation, DEFAULT_CAP};
use crate::presheaf::{FinitePresheaf, PresheafError, Site};
use crate::util::bits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("line {line}: {source}")]
    Map { line: usize, source: MapError },
    #[error("line {line}: {source}")]
    Operad { line: usize, source: OperadError },
    #[error("line {line}: {source}")]
    Presheaf { line: usize, source: PresheafError },
    #[error("`{0}` is defined twice")]
    Duplicate(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> TextError {
    TextError::Syntax { line, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    /// A quoted word, never read as a keyword.
    Quoted(String),
    Punct(char),
}

const RESERVED: &[&str] = &["in", "out", "->", "edge", "vertices", "uncut", "emb"];

const PUNCT: &[char] = &['{', '}', '(', ')', ';', ':', ','];

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, TextError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            chars.next();
        } else if PUNCT.contains(&c) {
            out.push(Tok::Punct(c));
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut w = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => w.extend(chars.next()),
                    Some(c) => w.push(c),
                    None => return Err(syntax(line, "unterminated string")),
                }
            }
            out.push(Tok::Quoted(w));
        } else {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || PUNCT.contains(&c) || c == '"' || c == '#' {
                    break;
                }
                w.push(c);
                chars.next();
            }
            out.push(Tok::Word(w));
        }
    }
    Ok(out)
}

/// Quotes a word when it would not survive tokenization.
fn quote(w: &str) -> String {
    let plain = !w.is_empty()
        && !RESERVED.contains(&w)
        && !w.chars().any(|c| c.is_whitespace() || PUNCT.contains(&c) || c == '"' || c == '#' || c == '\\');
    if plain {
        w.to_string()
    } else {
        let mut s = String::from('"');
        for c in w.chars() {
            if c == '"' || c == '\\' {
                s.push('\\');
            }
            s.push(c);
        }
        s.push('"');
        s
    }
}

/// A cursor over the tokens of one line.
struct Line {
    no: usize,
    toks: Vec<Tok>,
    pos: usize,
}

impl Line {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn word(&mut self) -> Result<String, TextError> {
        match self.toks.get(self.pos) {
            Some(Tok::Word(w) | Tok::Quoted(w)) => {
                self.pos += 1;
                Ok(w.clone())
            }
            other => Err(syntax(self.no, format!("expected a name, found {}", show(other)))),
        }
    }

    fn number(&mut self) -> Result<usize, TextError> {
        let w = self.word()?;
        w.parse().map_err(|_| syntax(self.no, format!("expected a number, found `{w}`")))
    }

    fn keyword(&mut self, k: &str) -> Result<(), TextError> {
        match self.toks.get(self.pos) {
            Some(Tok::Word(w)) if w == k => {
                self.pos += 1;
                Ok(())
            }
            other => Err(syntax(self.no, format!("expected `{k}`, found {}", show(other)))),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), TextError> {
        match self.toks.get(self.pos) {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            other => Err(syntax(self.no, format!("expected `{c}`, found {}", show(other)))),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_word(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w == k)
    }

    fn end(&self) -> Result<(), TextError> {
        if self.done() {
            Ok(())
        } else {
            Err(syntax(self.no, format!("unexpected {}", show(self.peek()))))
        }
    }

    /// Words up to the end of the line or any of the given punctuation.
    fn words_until(&mut self, stop: &[char]) -> Result<Vec<String>, TextError> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Punct(c) if stop.contains(c) => break,
                Tok::Word(_) | Tok::Quoted(_) => out.push(self.word()?),
                Tok::Punct(c) => return Err(syntax(self.no, format!("unexpected `{c}`"))),
            }
        }
        Ok(out)
    }
}

fn show(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Word(w)) => format!("`{w}`"),
        Some(Tok::Quoted(w)) => format!("\"{w}\""),
        Some(Tok::Punct(c)) => format!("`{c}`"),
    }
}

/// An embedding element by name, before it is resolved against a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemText {
    Edge(String),
    Region { vertices: Vec<String>, uncut: Vec<String> },
}

impl ElemText {
    pub fn resolve(&self, host: &Host) -> Result<usize, String> {
        let g = host.graph();
        let edge = |n: &str| match g {
            Graph::D(d) => d.find_edge(n),
            Graph::U(u) => u.find_arc(n).map(edge_of),
        };
        let x = match self {
            ElemText::Edge(e) => EmbElement::Edge(edge(e).ok_or_else(|| format!("unknown edge `{e}`"))?),
            ElemText::Region { vertices, uncut } => {
                let mut vm = 0u64;
                for v in vertices {
                    vm |= 1 << g.ug().find_vertex(v).ok_or_else(|| format!("unknown vertex `{v}`"))?;
                }
                let mut zm = 0u64;
                for e in uncut {
                    zm |= 1 << edge(e).ok_or_else(|| format!("unknown edge `{e}`"))?;
                }
                EmbElement::Region { vertices: vm, uncut: zm }
            }
        };
        host.index_of(&x)
            .ok_or_else(|| format!("{} is not an embedding into {}", self, g.name()))
    }

    pub fn of(host: &Host, i: usize) -> ElemText {
        let g = host.graph();
        match host.elem(i) {
            EmbElement::Edge(e) => ElemText::Edge(g.edge_name(e).to_string()),
            EmbElement::Region { vertices, uncut } => ElemText::Region {
                vertices: bits(vertices).map(|v| g.ug().vertex_name(v).to_string()).collect(),
                uncut: bits(uncut).map(|e| g.edge_name(e).to_string()).collect(),
            },
        }
    }
}

impl std::fmt::Display for ElemText {
    /// The braced body, without the `emb` keyword.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ElemText::Edge(e) => write!(f, "{{edge {}}}", quote(e)),
            ElemText::Region { vertices, uncut } => {
                write!(f, "{{vertices {}", vertices.iter().map(|v| quote(v)).join(" "))?;
                if !uncut.is_empty() {
                    write!(f, "; uncut {}", uncut.iter().map(|e| quote(e)).join(" "))?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// `emb {...}` or `{...}`.
fn elem(l: &mut Line) -> Result<ElemText, TextError> {
    if l.is_word("emb") {
        l.pos += 1;
    }
    l.punct('{')?;
    let out = if l.is_word("edge") {
        l.pos += 1;
        ElemText::Edge(l.word()?)
    } else {
        l.keyword("vertices")?;
        let vertices = l.words_until(&[';', '}'])?;
        let mut uncut = Vec::new();
        if l.eat_punct(';') {
            l.keyword("uncut")?;
            uncut = l.words_until(&['}'])?;
        }
        ElemText::Region { vertices, uncut }
    };
    l.punct('}')?;
    Ok(out)
}

pub fn parse_elem(s: &str) -> Result<ElemText, TextError> {
    let mut l = Line {
        no: 1,
        toks: tokenize(s, 1)?,
        pos: 0,
    };
    let e = elem(&mut l)?;
    l.end()?;
    Ok(e)
}

/// An étale map by name, before resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleText {
    pub name: String,
    pub source: String,
    pub target: String,
    pub line: usize,
    pub arcs: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
    pub vertices: Vec<(String, String)>,
}

/// A graph map by name, before resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapText {
    pub name: String,
    pub source: String,
    pub target: String,
    pub cat: String,
    pub line: usize,
    pub arcs: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
    pub vertices: Vec<(String, ElemText)>,
    pub table: Vec<(ElemText, ElemText)>,
}

/// A presheaf by name; morphisms are `source->target#k`, the `k`-th map
/// between two site objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafText {
    pub name: String,
    pub site: String,
    pub line: usize,
    pub at: Vec<(String, Vec<String>)>,
    pub along: Vec<(String, Vec<(String, String)>)>,
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub graphs: Vec<Graph>,
    pub etales: Vec<EtaleText>,
    pub maps: Vec<MapText>,
    pub operads: Vec<Presentation>,
    pub presheaves: Vec<PresheafText>,
}

enum Block {
    Graph(Line, Vec<Line>),
    Etale(EtaleText),
    Map(MapText),
    Operad(Line, Vec<Line>),
    Presheaf(PresheafText),
}

pub fn parse_document(text: &str) -> Result<Document, TextError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let toks = tokenize(raw, no)?;
        if toks.is_empty() {
            continue;
        }
        let mut l = Line { no, toks, pos: 0 };
        let head = match l.peek() {
            Some(Tok::Word(w)) => w.clone(),
            other => return Err(syntax(no, format!("unexpected {}", show(other)))),
        };
        match head.as_str() {
            "graph" => blocks.push(Block::Graph(l, Vec::new())),
            "operad" => blocks.push(Block::Operad(l, Vec::new())),
            "etale" => {
                l.pos += 1;
                let name = l.word()?;
                l.punct(':')?;
                let source = l.word()?;
                l.keyword("->")?;
                let target = l.word()?;
                l.end()?;
                blocks.push(Block::Etale(EtaleText {
                    name,
                    source,
                    target,
                    line: no,
                    arcs: Vec::new(),
                    edges: Vec::new(),
                    vertices: Vec::new(),
                }));
            }
            "map" => {
                l.pos += 1;
                let name = l.word()?;
                l.punct(':')?;
                let source = l.word()?;
                l.keyword("->")?;
                let target = l.word()?;
                l.keyword("in")?;
                let cat = l.word()?;
                l.end()?;
                blocks.push(Block::Map(MapText {
                    name,
                    source,
                    target,
                    cat,
                    line: no,
                    arcs: Vec::new(),
                    edges: Vec::new(),
                    vertices: Vec::new(),
                    table: Vec::new(),
                }));
            }
            "presheaf" => {
                l.pos += 1;
                let name = l.word()?;
                l.keyword("on")?;
                let site = l.word()?;
                l.end()?;
                blocks.push(Block::Presheaf(PresheafText {
                    name,
                    site,
                    line: no,
                    at: Vec::new(),
                    along: Vec::new(),
                }));
            }
            _ => match blocks.last_mut() {
                None => return Err(syntax(no, format!("`{head}` outside of a block"))),
                Some(Block::Graph(_, body)) | Some(Block::Operad(_, body)) => body.push(l),
                Some(Block::Etale(e)) => etale_line(e, &mut l)?,
                Some(Block::Map(m)) => map_line(m, &mut l)?,
                Some(Block::Presheaf(p)) => presheaf_line(p, &mut l)?,
            },
        }
    }
    let mut doc = Document::default();
    for b in blocks {
        match b {
            Block::Graph(h, body) => doc.graphs.push(graph_block(h, body)?),
            Block::Operad(h, body) => doc.operads.push(operad_block(h, body)?),
            Block::Etale(e) => doc.etales.push(e),
            Block::Map(m) => doc.maps.push(m),
            Block::Presheaf(p) => doc.presheaves.push(p),
        }
    }
    doc.check_names()?;
    Ok(doc)
}

fn mapsto(l: &mut Line) -> Result<(String, String), TextError> {
    let a = l.word()?;
    l.keyword("|->")?;
    let b = l.word()?;
    l.end()?;
    Ok((a, b))
}

fn etale_line(e: &mut EtaleText, l: &mut Line) -> Result<(), TextError> {
    let k = l.word()?;
    match k.as_str() {
        "arc" => e.arcs.push(mapsto(l)?),
        "edge" => e.edges.push(mapsto(l)?),
        "vertex" => e.vertices.push(mapsto(l)?),
        _ => return Err(syntax(l.no, format!("unknown étale line `{k}`"))),
    }
    Ok(())
}

fn map_line(m: &mut MapText, l: &mut Line) -> Result<(), TextError> {
    let k = l.word()?;
    match k.as_str() {
        "arc" => m.arcs.push(mapsto(l)?),
        "edge" => m.edges.push(mapsto(l)?),
        "vertex" => {
            let v = l.word()?;
            l.keyword("|->")?;
            let x = elem(l)?;
            l.end()?;
            m.vertices.push((v, x));
        }
        "embmap" => {
            let x = elem(l)?;
            l.keyword("|->")?;
            let y = elem(l)?;
            l.end()?;
            m.table.push((x, y));
        }
        _ => return Err(syntax(l.no, format!("unknown map line `{k}`"))),
    }
    Ok(())
}

fn presheaf_line(p: &mut PresheafText, l: &mut Line) -> Result<(), TextError> {
    let k = l.word()?;
    match k.as_str() {
        "at" => {
            let obj = l.word()?;
            l.punct(':')?;
            let elems = l.words_until(&[])?;
            p.at.push((obj, elems));
        }
        "along" => {
            let m = l.word()?;
            l.punct(':')?;
            let mut pairs = Vec::new();
            while !l.done() {
                let a = l.word()?;
                l.keyword("|->")?;
                let b = l.word()?;
                pairs.push((a, b));
                if !l.eat_punct(',') {
                    break;
                }
            }
            l.end()?;
            p.along.push((m, pairs));
        }
        _ => return Err(syntax(l.no, format!("unknown presheaf line `{k}`"))),
    }
    Ok(())
}

fn graph_block(mut head: Line, body: Vec<Line>) -> Result<Graph, TextError> {
    let no = head.no;
    head.keyword("graph")?;
    let name = head.word()?;
    let kind = head.word()?;
    head.end()?;
    let gerr = |line: usize| move |source: GraphError| TextError::Graph { line, source };
    match kind.as_str() {
        "undirected" => {
            let mut pairs = Vec::new();
            let mut vertices: Vec<(String, Vec<String>)> = Vec::new();
            for mut l in body {
                match l.word()?.as_str() {
                    "pair" => {
                        let a = l.word()?;
                        let b = l.word()?;
                        l.end()?;
                        pairs.push((a, b));
                    }
                    "vertex" => {
                        let v = l.word()?;
                        vertices.push((v, l.words_until(&[])?));
                    }
                    k => return Err(syntax(l.no, format!("unknown graph line `{k}`"))),
                }
            }
            let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let arcs: Vec<Vec<&str>> = vertices.iter().map(|(_, a)| a.iter().map(|s| s.as_str()).collect()).collect();
            let vs: Vec<(&str, &[&str])> = vertices.iter().zip(&arcs).map(|((v, _), a)| (v.as_str(), a.as_slice())).collect();
            Ok(Graph::U(UGraph::from_names(&name, &pairs, &vs).map_err(gerr(no))?))
        }
        "directed" => {
            let mut edges = Vec::new();
            let mut vertices: Vec<(String, Vec<String>, Vec<String>)> = Vec::new();
            for mut l in body {
                match l.word()?.as_str() {
                    "edge" => {
                        edges.extend(l.words_until(&[])?);
                    }
                    "vertex" => {
                        let v = l.word()?;
                        let mut ins = Vec::new();
                        let mut outs = Vec::new();
                        if l.is_word("in") {
                            l.pos += 1;
                            while !l.done() && !l.is_word("out") {
                                ins.push(l.word()?);
                            }
                        }
                        if l.is_word("out") {
                            l.pos += 1;
                            outs = l.words_until(&[])?;
                        }
                        l.end()?;
                        vertices.push((v, ins, outs));
                    }
                    k => return Err(syntax(l.no, format!("unknown graph line `{k}`"))),
                }
            }
            let es: Vec<&str> = edges.iter().map(|s| s.as_str()).collect();
            let lists: Vec<(Vec<&str>, Vec<&str>)> = vertices
                .iter()
                .map(|(_, i, o)| (i.iter().map(|s| s.as_str()).collect(), o.iter().map(|s| s.as_str()).collect()))
                .collect();
            let vs: Vec<(&str, &[&str], &[&str])> = vertices
                .iter()
                .zip(&lists)
                .map(|((v, _, _), (i, o))| (v.as_str(), i.as_slice(), o.as_slice()))
                .collect();
            Ok(Graph::D(DGraph::from_names(&name, &es, &vs).map_err(gerr(no))?))
        }
        k => Err(syntax(no, format!("graph kind must be `undirected` or `directed`, found `{k}`"))),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = String::new();
    match g {
        Graph::U(u) => {
            let _ = writeln!(s, "graph {} undirected", quote(u.name()));
            for e in 0..u.num_edges() {
                let _ = writeln!(s, "pair {} {}", quote(u.arc_name(2 * e)), quote(u.arc_name(2 * e + 1)));
            }
            for v in 0..u.num_vertices() {
                let _ = write!(s, "vertex {}", quote(u.vertex_name(v)));
                for &a in u.nbhd(v) {
                    let _ = write!(s, " {}", quote(u.arc_name(a)));
                }
                s.push('\n');
            }
        }
        Graph::D(d) => {
            let _ = writeln!(s, "graph {} directed", quote(d.name()));
            for e in 0..d.num_edges() {
                let _ = writeln!(s, "edge {}", quote(d.edge_name(e)));
            }
            for v in 0..d.num_vertices() {
                let _ = write!(s, "vertex {}", quote(d.vertex_name(v)));
                if !d.ins(v).is_empty() {
                    let _ = write!(s, " in {}", d.ins(v).iter().map(|&e| quote(d.edge_name(e))).join(" "));
                }
                if !d.outs(v).is_empty() {
                    let _ = write!(s, " out {}", d.outs(v).iter().map(|&e| quote(d.edge_name(e))).join(" "));
                }
                s.push('\n');
            }
        }
    }
    s
}

/// Arc table from `arc` lines (partners filled in) or, for directed graphs,
/// from `edge` lines.
fn arc_table(
    line: usize,
    h: &Graph,
    g: &Graph,
    arcs: &[(String, String)],
    edges: &[(String, String)],
) -> Result<Vec<ArcId>, TextError> {
    let (hu, gu) = (h.ug(), g.ug());
    let mut phi0 = vec![usize::MAX; hu.num_arcs()];
    let mut set = |a: ArcId, b: ArcId| -> Result<(), TextError> {
        for (x, y) in [(a, b), (partner(a), partner(b))] {
            if phi0[x] != usize::MAX && phi0[x] != y {
                return Err(syntax(line, format!("arc `{}` is sent to two places", hu.arc_name(x))));
            }
            phi0[x] = y;
        }
        Ok(())
    };
    for (a, b) in arcs {
        let x = hu.find_arc(a).ok_or_else(|| syntax(line, format!("unknown arc `{a}` in {}", h.name())))?;
        let y = gu.find_arc(b).ok_or_else(|| syntax(line, format!("unknown arc `{b}` in {}", g.name())))?;
        set(x, y)?;
    }
    if !edges.is_empty() {
        let (Graph::D(hd), Graph::D(gd)) = (h, g) else {
            return Err(syntax(line, "`edge` lines need directed graphs"));
        };
        for (e, f) in edges {
            let x = hd.find_edge(e).ok_or_else(|| syntax(line, format!("unknown edge `{e}` in {}", h.name())))?;
            let y = gd.find_edge(f).ok_or_else(|| syntax(line, format!("unknown edge `{f}` in {}", g.name())))?;
            set(2 * x, 2 * y)?;
        }
    }
    if let Some(a) = phi0.iter().position(|&b| b == usize::MAX) {
        return Err(syntax(line, format!("arc `{}` has no image", hu.arc_name(a))));
    }
    Ok(phi0)
}

pub fn resolve_etale(e: &EtaleText, h: &Graph, g: &Graph) -> Result<UEtale, TextError> {
    let arcs = arc_table(e.line, h, g, &e.arcs, &e.edges)?;
    let mut vertices = vec![usize::MAX; h.num_vertices()];
    for (v, w) in &e.vertices {
        let x = h.ug().find_vertex(v).ok_or_else(|| syntax(e.line, format!("unknown vertex `{v}`")))?;
        let y = g.ug().find_vertex(w).ok_or_else(|| syntax(e.line, format!("unknown vertex `{w}`")))?;
        vertices[x] = y;
    }
    if let Some(v) = vertices.iter().position(|&w| w == usize::MAX) {
        return Err(syntax(e.line, format!("vertex `{}` has no image", h.ug().vertex_name(v))));
    }
    Ok(UEtale { arcs, vertices })
}

pub fn write_etale(name: &str, h: &Graph, g: &Graph, f: &UEtale) -> String {
    let mut s = format!("etale {} : {} -> {}\n", quote(name), quote(h.name()), quote(g.name()));
    match (h, g) {
        (Graph::D(hd), Graph::D(gd)) => {
            for e in 0..hd.num_edges() {
                let _ = writeln!(s, "edge {} |-> {}", quote(hd.edge_name(e)), quote(gd.edge_name(f.arcs[2 * e] / 2)));
            }
        }
        _ => {
            let (hu, gu) = (h.ug(), g.ug());
            for a in 0..hu.num_arcs() {
                let _ = writeln!(s, "arc {} |-> {}", quote(hu.arc_name(a)), quote(gu.arc_name(f.arcs[a])));
            }
        }
    }
    for v in 0..h.num_vertices() {
        let _ = writeln!(
            s,
            "vertex {} |-> {}",
            quote(h.ug().vertex_name(v)),
            quote(g.ug().vertex_name(f.vertices[v]))
        );
    }
    s
}

pub fn resolve_map(m: &MapText, h: &Arc<Host>, g: &Arc<Host>) -> Result<GraphMap, TextError> {
    let line = m.line;
    let merr = |source: MapError| TextError::Map { line, source };
    let phi0 = arc_table(line, h.graph(), g.graph(), &m.arcs, &m.edges)?;
    let elem_of = |x: &ElemText, host: &Host| x.resolve(host).map_err(|msg| syntax(line, msg));
    if !m.table.is_empty() {
        let mut hat = vec![usize::MAX; h.len()];
        for (x, y) in &m.table {
            hat[elem_of(x, h)?] = elem_of(y, g)?;
        }
        if let Some(x) = hat.iter().position(|&y| y == usize::MAX) {
            return Err(syntax(line, format!("{} has no image", h.display(x))));
        }
        let out = GraphMap {
            source: h.clone(),
            target: g.clone(),
            phi0,
            phi_hat: hat,
        };
        validate(&out).map_err(merr)?;
        return Ok(out);
    }
    let mut phi1 = vec![usize::MAX; h.ug().num_vertices()];
    for (v, y) in &m.vertices {
        let x = h.ug().find_vertex(v).ok_or_else(|| syntax(line, format!("unknown vertex `{v}`")))?;
        phi1[x] = elem_of(y, g)?;
    }
    if let Some(v) = phi1.iter().position(|&y| y == usize::MAX) {
        return Err(syntax(line, format!("vertex `{}` has no image", h.ug().vertex_name(v))));
    }
    if shape(h.graph()).is_tree && shape(g.graph()).is_tree {
        return extend_tree_map(h, g, &phi0, &phi1).map_err(merr);
    }
    // Outside trees the vertex images need not determine the map; search.
    let na = g.ug().num_arcs();
    let cons = Constraints {
        arcs: Some(phi0.iter().map(|&b| (0..na).map(|t| t == b).collect()).collect()),
        elems: Some(
            (0..h.len())
                .map(|x| {
                    let fixed = h.is_vertex_elem(x).map(|v| phi1[v]);
                    (0..g.len()).map(|y| fixed.is_none_or(|f| f == y)).collect()
                })
                .collect(),
        ),
    };
    let mut found: Vec<Vec<usize>> = Vec::new();
    search(h, g, &cons, DEFAULT_BUDGET, &mut |_, hat| {
        found.push(hat.to_vec());
        found.len() < 2
    })
    .map_err(merr)?;
    match found.len() {
        0 => Err(syntax(line, "no graph map has these arc and vertex images")),
        1 => Ok(GraphMap {
            source: h.clone(),
            target: g.clone(),
            phi0,
            phi_hat: found.pop().unwrap(),
        }),
        _ => Err(syntax(line, "vertex images do not determine the map; give an embmap table")),
    }
}

/// Text form of a map. Maps between trees use vertex lines, others the
/// full element table.
pub fn write_map(m: &GraphMap, name: &str, cat: Option<&str>) -> String {
    let tree = shape(m.source.graph()).is_tree && shape(m.target.graph()).is_tree;
    map_text(m, name, cat, tree)
}

/// Text form of a map with the full element table.
pub fn write_map_table(m: &GraphMap, name: &str, cat: Option<&str>) -> String {
    map_text(m, name, cat, false)
}

fn map_text(m: &GraphMap, name: &str, cat: Option<&str>, tree: bool) -> String {
    let (h, g) = (&m.source, &m.target);
    let mut s = format!("map {} : {} -> {} in {}\n", quote(name), quote(h.graph().name()), quote(g.graph().name()), cat.unwrap_or(if h.graph().is_directed() { "O" } else { "U" }));
    match (h.graph(), g.graph()) {
        (Graph::D(hd), Graph::D(gd)) => {
            for e in 0..hd.num_edges() {
                let _ = writeln!(s, "edge {} |-> {}", quote(hd.edge_name(e)), quote(gd.edge_name(m.phi0[2 * e] / 2)));
            }
        }
        _ => {
            for a in 0..h.ug().num_arcs() {
                let _ = writeln!(s, "arc {} |-> {}", quote(h.ug().arc_name(a)), quote(g.ug().arc_name(m.phi0[a])));
            }
        }
    }
    if tree {
        for v in 0..h.ug().num_vertices() {
            let y = m.phi_hat[h.vertex_elem(v)];
            let _ = writeln!(s, "vertex {} |-> emb {}", quote(h.ug().vertex_name(v)), ElemText::of(g, y));
        }
    } else {
        for x in 0..h.len() {
            let _ = writeln!(s, "embmap {} |-> {}", ElemText::of(h, x), ElemText::of(g, m.phi_hat[x]));
        }
    }
    s
}

pub fn write_map_text(m: &MapText) -> String {
    let mut s = format!("map {} : {} -> {} in {}\n", quote(&m.name), quote(&m.source), quote(&m.target), quote(&m.cat));
    for (a, b) in &m.arcs {
        let _ = writeln!(s, "arc {} |-> {}", quote(a), quote(b));
    }
    for (a, b) in &m.edges {
        let _ = writeln!(s, "edge {} |-> {}", quote(a), quote(b));
    }
    for (v, x) in &m.vertices {
        let _ = writeln!(s, "vertex {} |-> emb {x}", quote(v));
    }
    for (x, y) in &m.table {
        let _ = writeln!(s, "embmap {x} |-> {y}");
    }
    s
}

pub fn write_etale_text(e: &EtaleText) -> String {
    let mut s = format!("etale {} : {} -> {}\n", quote(&e.name), quote(&e.source), quote(&e.target));
    for (k, list) in [("arc", &e.arcs), ("edge", &e.edges), ("vertex", &e.vertices)] {
        for (a, b) in list {
            let _ = writeln!(s, "{k} {} |-> {}", quote(a), quote(b));
        }
    }
    s
}

fn operad_block(mut head: Line, body: Vec<Line>) -> Result<Presentation, TextError> {
    let no = head.no;
    head.keyword("operad")?;
    let name = head.word()?;
    head.keyword("flavor")?;
    let f = head.word()?;
    head.end()?;
    let flavor = Flavor::parse(&f).ok_or_else(|| syntax(no, format!("unknown flavor `{f}`")))?;
    let mut cap = DEFAULT_CAP;
    let mut p: Option<Presentation> = None;
    let oerr = |line: usize| move |source: OperadError| TextError::Operad { line, source };
    for mut l in body {
        let k = l.word()?;
        if k == "cap" {
            cap = l.number()?;
            l.end()?;
            if let Some(p) = p.as_mut() {
                p.cap = cap;
            }
            continue;
        }
        if k == "colors" {
            let colors = l.words_until(&[])?;
            let (colors, inv) = match colors.iter().position(|c| c == "involution") {
                Some(i) => (colors[..i].to_vec(), colors[i + 1..].to_vec()),
                None => (colors.clone(), colors),
            };
            let refs: Vec<&str> = colors.iter().map(|s| s.as_str()).collect();
            let inv = inv
                .iter()
                .map(|c| colors.iter().position(|d| d == c).ok_or_else(|| syntax(l.no, format!("unknown color `{c}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if inv.len() != colors.len() {
                return Err(syntax(l.no, "involution must list one color per color"));
            }
            p = Some(Presentation::new(&name, flavor, &refs, &inv, cap));
            continue;
        }
        let p = p.as_mut().ok_or_else(|| syntax(l.no, "`colors` must come first"))?;
        let color = |l: &Line, c: &str| p.find_color(c).ok_or_else(|| syntax(l.no, format!("unknown color `{c}`")));
        match k.as_str() {
            "ops" => {
                l.punct('(')?;
                let mut ins = Vec::new();
                let mut outs = Vec::new();
                let mut split = false;
                while !l.eat_punct(')') {
                    let w = l.word()?;
                    if w == "->" {
                        split = true;
                    } else if split {
                        outs.push(color(&l, &w)?);
                    } else {
                        ins.push(color(&l, &w)?);
                    }
                }
                l.punct(':')?;
                let n_in = ins.len();
                let ports: Vec<usize> = ins.into_iter().chain(outs).collect();
                if p.directed() != split {
                    return Err(syntax(l.no, "directed profiles are written `(ins -> outs)`"));
                }
                for op in l.words_until(&[])? {
                    if p.find_op(&op).is_some() {
                        return Err(syntax(l.no, format!("operation `{op}` defined twice")));
                    }
                    p.add_op(&op, &ports, n_in);
                }
            }
            _ => {
                let op = |l: &mut Line, p: &Presentation| -> Result<OpId, TextError> {
                    let w = l.word()?;
                    p.find_op(&w).ok_or_else(|| syntax(l.no, format!("unknown operation `{w}`")))
                };
                match k.as_str() {
                    "unit" => {
                        let c = l.word()?;
                        let c = color(&l, &c)?;
                        l.keyword("=")?;
                        let u = op(&mut l, p)?;
                        p.units[c] = Some(u);
                    }
                    "compose" => {
                        let a = op(&mut l, p)?;
                        let i = l.number()?;
                        let j = l.number()?;
                        let b = op(&mut l, p)?;
                        l.keyword("=")?;
                        let r = op(&mut l, p)?;
                        p.compose.insert((a, i, b, j), r);
                    }
                    "contract" => {
                        let a = op(&mut l, p)?;
                        let i = l.number()?;
                        let j = l.number()?;
                        l.keyword("=")?;
                        let r = op(&mut l, p)?;
                        p.contract.insert((a, i, j), r);
                    }
                    "act" => {
                        let a = op(&mut l, p)?;
                        l.punct('(')?;
                        let mut perm = Vec::new();
                        while !l.eat_punct(')') {
                            perm.push(l.number()?);
                        }
                        l.keyword("=")?;
                        let r = op(&mut l, p)?;
                        p.act.insert((a, perm), r);
                    }
                    _ => return Err(syntax(l.no, format!("unknown operad line `{k}`"))),
                }
            }
        }
        l.end()?;
    }
    let mut p = p.ok_or_else(|| syntax(no, "operad has no `colors` line"))?;
    p.close_actions().map_err(oerr(no))?;
    Ok(p)
}

pub fn write_operad(p: &Presentation) -> String {
    let mut s = format!("operad {} flavor {}\n", quote(&p.name), p.flavor.tag());
    let _ = writeln!(s, "cap {}", p.cap);
    let _ = writeln!(
        s,
        "colors {} involution {}",
        p.colors.iter().map(|c| quote(c)).join(" "),
        p.involution.iter().map(|&c| quote(&p.colors[c])).join(" ")
    );
    let profile = |k: OpId| {
        let o = &p.ops[k];
        let cs = |r: &[usize]| r.iter().map(|&c| quote(&p.colors[c])).join(" ");
        if p.directed() {
            let ins = cs(&o.ports[..o.n_in]);
            let outs = cs(&o.ports[o.n_in..]);
            [ins, "->".to_string(), outs].iter().filter(|x| !x.is_empty()).join(" ")
        } else {
            cs(&o.ports)
        }
    };
    for (prof, run) in &(0..p.ops.len()).chunk_by(|&k| profile(k)) {
        let _ = writeln!(s, "ops ({prof}): {}", run.map(|k| quote(&p.ops[k].name)).join(" "));
    }
    let n = |k: OpId| quote(&p.ops[k].name);
    for (c, u) in p.units.iter().enumerate() {
        if let Some(u) = u {
            let _ = writeln!(s, "unit {} = {}", quote(&p.colors[c]), n(*u));
        }
    }
    for (&(a, ref perm), &r) in p.act.iter().sorted() {
        let _ = writeln!(s, "act {} ({}) = {}", n(a), perm.iter().join(" "), n(r));
    }
    for (&(a, i, b, j), &r) in p.compose.iter().sorted() {
        let _ = writeln!(s, "compose {} {i} {j} {} = {}", n(a), n(b), n(r));
    }
    for (&(a, i, j), &r) in p.contract.iter().sorted() {
        let _ = writeln!(s, "contract {} {i} {j} = {}", n(a), n(r));
    }
    s
}

/// `a->b#k` names the `k`-th map `a -> b` of a site.
pub fn morphism_name(site: &Site, a: usize, b: usize, k: usize) -> String {
    format!("{}->{}#{k}", site.name(a), site.name(b))
}

pub fn parse_morphism(site: &Site, s: &str) -> Option<(usize, usize, usize)> {
    let (ab, k) = s.rsplit_once('#')?;
    let (a, b) = ab.split_once("->")?;
    let (a, b, k) = (site.find_name(a)?, site.find_name(b)?, k.parse().ok()?);
    (k < site.homs[a][b].len()).then_some((a, b, k))
}

pub fn resolve_presheaf(t: &PresheafText, site: &Arc<Site>) -> Result<FinitePresheaf, TextError> {
    let line = t.line;
    let n = site.len();
    let mut labels: Vec<Option<Vec<String>>> = vec![None; n];
    for (obj, elems) in &t.at {
        let a = site.find_name(obj).ok_or_else(|| syntax(line, format!("unknown site object `{obj}`")))?;
        if elems.iter().duplicates().next().is_some() {
            return Err(syntax(line, format!("repeated element at `{obj}`")));
        }
        labels[a] = Some(elems.clone());
    }
    let labels: Vec<Vec<String>> = labels.into_iter().map(|l| l.unwrap_or_default()).collect();
    let mut given: HashMap<(usize, usize, usize), Vec<u32>> = HashMap::new();
    for (m, pairs) in &t.along {
        let (a, b, k) = parse_morphism(site, m).ok_or_else(|| syntax(line, format!("unknown morphism `{m}`")))?;
        let mut row = vec![u32::MAX; labels[b].len()];
        for (x, y) in pairs {
            let i = labels[b].iter().position(|l| l == x).ok_or_else(|| syntax(line, format!("`{x}` is not an element at {}", site.name(b))))?;
            let j = labels[a].iter().position(|l| l == y).ok_or_else(|| syntax(line, format!("`{y}` is not an element at {}", site.name(a))))?;
            row[i] = j as u32;
        }
        if row.contains(&u32::MAX) {
            return Err(syntax(line, format!("`{m}` is not defined on every element")));
        }
        given.insert((a, b, k), row);
    }
    let mut action = Vec::with_capacity(n);
    for a in 0..n {
        let mut per_b = Vec::with_capacity(n);
        for b in 0..n {
            let mut per_k = Vec::new();
            for k in 0..site.homs[a][b].len() {
                let row = match given.remove(&(a, b, k)) {
                    Some(r) => r,
                    None if a == b && k == site.identity(a) => (0..labels[a].len() as u32).collect(),
                    None if labels[b].is_empty() => Vec::new(),
                    None => return Err(syntax(line, format!("no action along `{}`", morphism_name(site, a, b, k)))),
                };
                per_k.push(row);
            }
            per_b.push(per_k);
        }
        action.push(per_b);
    }
    let x = FinitePresheaf {
        name: t.name.clone(),
        site: site.clone(),
        labels,
        action,
    };
    x.validate(crate::exec::Exec::default()).map_err(|source| TextError::Presheaf { line, source })?;
    Ok(x)
}

pub fn write_presheaf(x: &FinitePresheaf) -> String {
    let s = &x.site;
    let mut out = format!("presheaf {} on {}\n", quote(&x.name), s.cat.tag());
    for a in 0..s.len() {
        let _ = writeln!(out, "at {}: {}", quote(s.name(a)), x.labels[a].iter().map(|l| quote(l)).join(" "));
    }
    for a in 0..s.len() {
        for b in 0..s.len() {
            if x.labels[b].is_empty() {
                continue;
            }
            for k in 0..s.homs[a][b].len() {
                if a == b && k == s.identity(a) {
                    continue;
                }
                let pairs = (0..x.labels[b].len())
                    .map(|i| format!("{} |-> {}", quote(&x.labels[b][i]), quote(&x.labels[a][x.act(a, b, k, i)])))
                    .join(", ");
                let _ = writeln!(out, "along {}: {pairs}", quote(&morphism_name(s, a, b, k)));
            }
        }
    }
    out
}

pub fn write_presheaf_text(p: &PresheafText) -> String {
    let mut out = format!("presheaf {} on {}\n", quote(&p.name), quote(&p.site));
    for (o, elems) in &p.at {
        let _ = writeln!(out, "at {}: {}", quote(o), elems.iter().map(|l| quote(l)).join(" "));
    }
    for (m, pairs) in &p.along {
        let _ = writeln!(
            out,
            "along {}: {}",
            quote(m),
            pairs.iter().map(|(x, y)| format!("{} |-> {}", quote(x), quote(y))).join(", ")
        );
    }
    out
}

impl Document {
    pub fn graph(&self, name: &str) -> Option<&Graph> {
        self.graphs.iter().find(|g| g.name() == name)
    }

    pub fn operad(&self, name: &str) -> Option<&Presentation> {
        self.operads.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self.graphs.iter().map(write_graph).collect();
        parts.extend(self.etales.iter().map(write_etale_text));
        parts.extend(self.maps.iter().map(write_map_text));
        parts.extend(self.operads.iter().map(write_operad));
        parts.extend(self.presheaves.iter().map(write_presheaf_text));
        parts.join("\n")
    }

    /// Appends another document, rejecting repeated names. A graph defined
    /// identically in both is kept once.
    pub fn merge(&mut self, other: Document) -> Result<(), TextError> {
        for g in other.graphs {
            if self.graph(g.name()).is_some_and(|h| write_graph(h) == write_graph(&g)) {
                continue;
            }
            self.graphs.push(g);
        }
        self.etales.extend(other.etales);
        self.maps.extend(other.maps);
        self.operads.extend(other.operads);
        self.presheaves.extend(other.presheaves);
        self.check_names()
    }

    fn check_names(&self) -> Result<(), TextError> {
        for kind in [
            self.graphs.iter().map(|g| g.name().to_string()).collect::<Vec<_>>(),
            self.etales.iter().map(|e| e.name.clone()).collect(),
            self.maps.iter().map(|m| m.name.clone()).collect(),
            self.operads.iter().map(|p| p.name.clone()).collect(),
            self.presheaves.iter().map(|p| p.name.clone()).collect(),
        ] {
            if let Some(d) = kind.iter().duplicates().next() {
                return Err(TextError::Duplicate(d.clone()));
            }
        }
        Ok(())
    }
}
