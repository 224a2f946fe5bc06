use super::{edge_of, EdgeId, GraphError, UGraph, VertexId};

/// A subgraph given by a set of edges and a set of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<VertexId>,
    /// The subgraph as a graph in its own right.
    pub graph: UGraph,
}

/// Checks closure (every arc at a chosen vertex lies on a chosen edge) and
/// builds the subgraph.
pub fn subgraph(g: &UGraph, edges: &[EdgeId], vertices: &[VertexId]) -> Result<Subgraph, GraphError> {
    let mut edges = edges.to_vec();
    edges.sort_unstable();
    edges.dedup();
    let mut vertices = vertices.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    if edges.is_empty() && vertices.is_empty() {
        return Err(GraphError::EmptySubgraph);
    }
    for &v in &vertices {
        for &a in g.nbhd(v) {
            if edges.binary_search(&edge_of(a)).is_err() {
                return Err(GraphError::NotClosed(g.arc_name(a).to_string()));
            }
        }
    }
    let arc_names: Vec<String> = edges
        .iter()
        .flat_map(|&e| [g.arc_name(2 * e).to_string(), g.arc_name(2 * e + 1).to_string()])
        .collect();
    let local = |a: usize| {
        let k = edges.binary_search(&edge_of(a)).expect("closed");
        2 * k + (a & 1)
    };
    let nbhd = vertices
        .iter()
        .map(|&v| g.nbhd(v).iter().map(|&a| local(a)).collect())
        .collect();
    let graph = UGraph::new(
        g.name(),
        arc_names,
        vertices.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
        nbhd,
    )?;
    Ok(Subgraph {
        edges,
        vertices,
        graph,
    })
}
