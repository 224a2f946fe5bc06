//! Parsed inputs, with hosts and sites built on demand.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use graphcat::fixtures;
use graphcat::maps::{Cat, GraphMap};
use graphcat::operad::{battery, Presentation};
use graphcat::presheaf::{
    elementary_sieve, nerve, orientation_presheaf, representable, terminal, FinitePresheaf, Site,
};
use graphcat::text::{parse_document, resolve_map, resolve_presheaf, Document, MapText};
use graphcat::{Graph, Host};

use crate::config::Config;
use crate::report::CliError;

pub struct Workspace {
    pub doc: Document,
    pub cfg: Config,
    hosts: HashMap<String, Arc<Host>>,
    sites: HashMap<Cat, Arc<Site>>,
}

impl Workspace {
    pub fn load(files: &[PathBuf], cfg: &Config) -> Result<Workspace, CliError> {
        let mut doc = Document::default();
        for f in files {
            let path = cfg.resolve(f);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let d = parse_document(&text).map_err(|source| CliError::Parse {
                file: path.display().to_string(),
                source,
            })?;
            doc.merge(d).map_err(|source| CliError::Parse {
                file: path.display().to_string(),
                source,
            })?;
        }
        Ok(Workspace {
            doc,
            cfg: cfg.clone(),
            hosts: HashMap::new(),
            sites: HashMap::new(),
        })
    }

    /// A graph from the files, else a built-in one. With no name, the only
    /// graph in the files.
    pub fn graph(&self, name: Option<&str>) -> Result<Graph, CliError> {
        match name {
            Some(n) => self
                .doc
                .graph(n)
                .cloned()
                .or_else(|| fixtures::named(n))
                .ok_or_else(|| CliError::Usage(format!("no graph named `{n}`"))),
            None => match self.doc.graphs.as_slice() {
                [g] => Ok(g.clone()),
                [] => Err(CliError::Usage("no graph given".into())),
                _ => Err(CliError::Usage("several graphs; choose one with --graph".into())),
            },
        }
    }

    pub fn host(&mut self, name: &str) -> Result<Arc<Host>, CliError> {
        if let Some(h) = self.hosts.get(name) {
            return Ok(h.clone());
        }
        let h = Arc::new(Host::new(self.graph(Some(name))?)?);
        self.hosts.insert(name.to_string(), h.clone());
        Ok(h)
    }

    pub fn map_text(&self, name: &str) -> Result<MapText, CliError> {
        self.doc
            .maps
            .iter()
            .find(|m| m.name == name)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("no map named `{name}`")))
    }

    pub fn map(&mut self, t: &MapText) -> Result<GraphMap, CliError> {
        let h = self.host(&t.source)?;
        let g = self.host(&t.target)?;
        resolve_map(t, &h, &g).map_err(|source| CliError::Parse {
            file: format!("map {}", t.name),
            source,
        })
    }

    pub fn site(&mut self, cat: Cat) -> Result<Arc<Site>, CliError> {
        if let Some(s) = self.sites.get(&cat) {
            return Ok(s.clone());
        }
        let mut b = self.cfg.bounds;
        if cat == Cat::Delta {
            b.max_vertices = b.max_vertices.max(4);
        }
        let s = Arc::new(Site::build_with(cat, b, self.cfg.exec)?);
        self.sites.insert(cat, s.clone());
        Ok(s)
    }

    pub fn operad(&self, name: &str) -> Result<Presentation, CliError> {
        self.doc
            .operad(name)
            .cloned()
            .or_else(|| battery().into_iter().find(|p| p.name == name))
            .ok_or_else(|| CliError::Usage(format!("no operad named `{name}`")))
    }

    /// A site object by site name, or the representative of a named graph.
    pub fn object(&self, site: &Site, name: &str) -> Result<usize, CliError> {
        if let Some(a) = site.find_name(name) {
            return Ok(a);
        }
        let g = self.graph(Some(name))?;
        site.find(&g)
            .map(|(a, _)| a)
            .ok_or_else(|| CliError::Invalid(format!("`{name}` is not an object of {}", site.cat.tag())))
    }

    /// Presheaves by name; see the `segal` and `kan` help.
    pub fn presheaf(&mut self, spec: &str, site: &Arc<Site>) -> Result<FinitePresheaf, CliError> {
        let exec = self.cfg.exec;
        Ok(match spec.split_once(':') {
            None if spec == "terminal" => terminal(site),
            None if spec == "orientation" => orientation_presheaf(site)?,
            None if spec == "sieve" => elementary_sieve(site),
            Some(("representable", obj)) => representable(site, self.object(site, obj)?),
            Some(("nerve", op)) => nerve(&self.operad(op)?, site, exec)?,
            _ => {
                let t = self
                    .doc
                    .presheaves
                    .iter()
                    .find(|p| p.name == spec)
                    .ok_or_else(|| CliError::Usage(format!("unknown presheaf `{spec}`")))?;
                resolve_presheaf(t, site).map_err(|source| CliError::Parse {
                    file: format!("presheaf {spec}"),
                    source,
                })?
            }
        })
    }
}

pub fn parse_cat(s: &str) -> Result<Cat, CliError> {
    Cat::parse(s).ok_or_else(|| CliError::Usage(format!("unknown category `{s}`")))
}
