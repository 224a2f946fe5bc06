//! Graphs with loose ends, their embeddings and graph maps, colored operads
//! presented by finite tables, and presheaves on truncated graph categories.

pub mod dot;
pub mod emb;
pub mod etale;
pub mod exec;
pub mod fixtures;
pub mod graph;
pub mod maps;
pub mod operad;
pub mod oracle;
pub mod presheaf;
pub mod text;
mod util;

pub use emb::{EmbElement, Host};
pub use graph::{DGraph, Graph, UGraph};

