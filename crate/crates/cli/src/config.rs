//! Settings from a key=value file, overridden by flags.

use std::path::{Path, PathBuf};

use graphcat::exec::Exec;
use graphcat::graph::generate::Bounds;
use graphcat::maps::DEFAULT_BUDGET;

use crate::report::CliError;
use crate::GlobalOpts;

#[derive(Clone, Debug)]
pub struct Config {
    pub bounds: Bounds,
    pub budget: u64,
    pub exec: Exec,
    pub json: bool,
    /// Relative input paths resolve against this directory.
    pub root: Option<PathBuf>,
}

impl Config {
    pub fn load(opts: &GlobalOpts) -> Result<Config, CliError> {
        let mut cfg = Config {
            bounds: Bounds::default(),
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
            json: false,
            root: std::env::var_os("GRAPHCAT_ROOT").map(PathBuf::from),
        };
        if let Some(path) = &opts.config {
            let path = cfg.resolve(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply(&text, &path)?;
        }
        if let Some(v) = opts.max_vertices {
            cfg.bounds.max_vertices = v;
        }
        if let Some(v) = opts.max_arity {
            cfg.bounds.max_arity = v;
        }
        if let Some(v) = opts.max_edges {
            cfg.bounds.max_edges = v;
        }
        if let Some(v) = opts.budget {
            cfg.budget = v;
        }
        if opts.sequential {
            cfg.exec = Exec::Sequential;
        }
        cfg.json |= opts.json;
        let b = cfg.bounds;
        if b.max_vertices == 0 || b.max_arity == 0 || b.max_edges == 0 || cfg.budget == 0 {
            return Err(CliError::Usage("bounds and budget must be positive".into()));
        }
        Ok(cfg)
    }

    fn apply(&mut self, text: &str, path: &Path) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("{}:{}: {msg}", path.display(), i + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key=value".into()))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<u64>().map_err(|_| bad(format!("`{v}` is not a number")));
            match k {
                "max_vertices" => self.bounds.max_vertices = num()? as usize,
                "max_arity" => self.bounds.max_arity = num()? as usize,
                "max_edges" => self.bounds.max_edges = num()? as usize,
                "budget" => self.budget = num()?,
                // Every computation is deterministic; a seed is accepted for
                // reproducible configs but nothing draws from it.
                "seed" => {
                    num()?;
                }
                "exec" => {
                    self.exec = match v {
                        "parallel" => Exec::Parallel,
                        "sequential" => Exec::Sequential,
                        _ => return Err(bad(format!("exec must be parallel or sequential, not `{v}`"))),
                    }
                }
                "json" => {
                    self.json = v.parse().map_err(|_| bad(format!("`{v}` is not a boolean")))?;
                }
                _ => return Err(bad(format!("unknown key `{k}`"))),
            }
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.root {
            Some(r) if p.is_relative() => r.join(p),
            _ => p.to_path_buf(),
        }
    }
}
