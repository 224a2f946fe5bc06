//! Undirected and directed graphs with loose ends.
//!
//! Arcs of an undirected graph come in involution pairs stored at adjacent
//! indices, so the partner of arc `a` is `a ^ 1` and its edge is `a / 2`.

mod builders;
mod dgraph;
pub mod generate;
pub mod iso;
mod shape;
mod subgraph;
mod ugraph;

pub use builders::*;
pub use dgraph::DGraph;
pub use shape::{shape, GraphShape};
pub use subgraph::{subgraph, Subgraph};
pub use ugraph::UGraph;

pub type ArcId = usize;
pub type EdgeId = usize;
pub type VertexId = usize;

#[inline]
pub fn partner(a: ArcId) -> ArcId {
    a ^ 1
}

#[inline]
pub fn edge_of(a: ArcId) -> EdgeId {
    a >> 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("arc `{0}` is paired with itself")]
    NotFixpointFree(String),
    #[error("arc `{0}` appears in more than one pair")]
    DuplicateArc(String),
    #[error("arc `{0}` lies in the neighborhood of more than one vertex")]
    ArcMultiplyAttached(String),
    #[error("unknown arc `{0}`")]
    UnknownArc(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("edge `{0}` is an input of more than one vertex")]
    EdgeInputReused(String),
    #[error("edge `{0}` is an output of more than one vertex")]
    EdgeOutputReused(String),
    #[error("graph has no arcs and no vertices")]
    EmptyGraph,
    #[error("subgraph is not closed: arc `{0}` at a chosen vertex lies on an unchosen edge")]
    NotClosed(String),
    #[error("subgraph is empty")]
    EmptySubgraph,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not a tree")]
    NotTree,
}

/// A graph of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graph {
    U(UGraph),
    D(DGraph),
}

impl Graph {
    pub fn name(&self) -> &str {
        match self {
            Graph::U(g) => g.name(),
            Graph::D(g) => g.name(),
        }
    }

    /// The undirected graph underneath; for an undirected graph, itself.
    pub fn ug(&self) -> &UGraph {
        match self {
            Graph::U(g) => g,
            Graph::D(g) => g.underlying(),
        }
    }

    pub fn directed(&self) -> Option<&DGraph> {
        match self {
            Graph::D(g) => Some(g),
            Graph::U(_) => None,
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, Graph::D(_))
    }

    pub fn num_vertices(&self) -> usize {
        self.ug().num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.ug().num_edges()
    }

    /// Display name of an edge: the edge name when directed, else its first arc.
    pub fn edge_name(&self, e: EdgeId) -> &str {
        match self {
            Graph::D(g) => g.edge_name(e),
            Graph::U(g) => g.arc_name(2 * e),
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        match &mut self {
            Graph::U(g) => g.set_name(name),
            Graph::D(g) => g.set_name(name),
        }
        self
    }
}

impl From<UGraph> for Graph {
    fn from(g: UGraph) -> Self {
        Graph::U(g)
    }
}

impl From<DGraph> for Graph {
    fn from(g: DGraph) -> Self {
        Graph::D(g)
    }
}
