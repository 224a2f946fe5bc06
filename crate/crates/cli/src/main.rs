mod commands;
mod config;
mod report;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::report::CliError;

#[derive(Parser, Debug)]
#[command(name = "graphcat", version, about = "Graphs with loose ends, graph maps, operads and Segal presheaves")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// key=value settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print a versioned JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    #[arg(long, global = true)]
    pub max_arity: Option<usize>,
    #[arg(long, global = true)]
    pub max_edges: Option<usize>,
    /// Search budget in nodes.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate every block in the given files.
    Validate { files: Vec<PathBuf> },
    /// List the embedding elements of a graph with their boundaries.
    Emb {
        file: PathBuf,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Unions of two elements.
    Unions {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Vec<String>,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Structured subgraphs of an acyclic directed graph.
    Ssb {
        file: PathBuf,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Validate maps and check category membership.
    MapCheck {
        files: Vec<PathBuf>,
        #[arg(long)]
        map: Option<String>,
    },
    /// Compose two maps, `second ∘ first`.
    Compose {
        files: Vec<PathBuf>,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Active/inert factorization of a map.
    Factorize {
        files: Vec<PathBuf>,
        #[arg(long)]
        map: String,
    },
    /// Extend a tree map given on vertices to its full element table.
    ExtendTreeMap {
        files: Vec<PathBuf>,
        #[arg(long)]
        map: String,
    },
    /// Validate operad presentations from files or the built-in battery.
    OperadCheck {
        files: Vec<PathBuf>,
        #[arg(long)]
        operad: Option<String>,
        #[arg(long)]
        battery: bool,
    },
    /// The free augmented cyclic operad on a tree.
    FreeCyclic {
        #[arg(long)]
        graph: String,
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        /// Print the presentation in operad text format.
        #[arg(long)]
        emit: bool,
    },
    /// Build the nerve of an operad on its site.
    Nerve {
        #[arg(long)]
        operad: String,
        files: Vec<PathBuf>,
        #[arg(long)]
        site: Option<String>,
        /// Print the presheaf in text format.
        #[arg(long)]
        emit: bool,
    },
    /// Check the Segal condition for a presheaf.
    Segal {
        /// terminal, orientation, sieve, representable:<object>, nerve:<operad>,
        /// or a presheaf defined in the files.
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        site: String,
        files: Vec<PathBuf>,
    },
    /// Orient an undirected graph by a bitmask or a root arc.
    Orient {
        #[arg(long)]
        graph: String,
        files: Vec<PathBuf>,
        /// Bit `e` set means the first arc of edge `e` is negative.
        #[arg(long, conflicts_with = "root")]
        orientation: Option<String>,
        #[arg(long)]
        root: Option<String>,
    },
    /// Left Kan extension along a direction-forgetting functor.
    Kan {
        #[arg(long)]
        functor: String,
        /// terminal, representable:<object>, sieve or nerve:<operad>.
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        object: String,
        files: Vec<PathBuf>,
        /// Cross-check against the colimit oracle at the object.
        #[arg(long)]
        oracle: bool,
    },
    /// Directed site against the category of elements of the orientation presheaf.
    ElementsCheck {
        #[arg(long)]
        functor: String,
    },
    /// Build a site and print or save its manifest.
    SiteBuild {
        #[arg(long)]
        site: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rebuild the site a manifest describes and compare.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Write `<name>.dot` for a graph.
    ExportDot {
        name: String,
        files: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Run a brute-force oracle: emb, tree-maps, factorization, bridge, ssb or all.
    Oracle { which: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match config::Config::load(&cli.opts) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match commands::run(&cli.command, &cfg) {
        Ok(rep) => {
            print!("{}", if cfg.json { rep.to_json() } else { rep.to_text() });
            ExitCode::from(if rep.ok { 0 } else { 1 })
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.code())
}
