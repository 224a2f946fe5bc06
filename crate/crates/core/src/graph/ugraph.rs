use std::collections::HashMap;

use super::{edge_of, ArcId, EdgeId, GraphError, VertexId};

/// An undirected graph: arcs with a fixpoint-free involution, a set of
/// dangling arcs each attached to one vertex, and vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UGraph {
    name: String,
    arc_names: Vec<String>,
    vertex_names: Vec<String>,
    tangent: Vec<Option<VertexId>>,
    nbhd: Vec<Vec<ArcId>>,
}

impl UGraph {
    /// Builds a graph from index data. `arc_names.len()` must be even; arcs
    /// `2k` and `2k + 1` are partners. `nbhd[v]` lists the arcs attached to `v`.
    pub fn new(
        name: impl Into<String>,
        arc_names: Vec<String>,
        vertex_names: Vec<String>,
        nbhd: Vec<Vec<ArcId>>,
    ) -> Result<Self, GraphError> {
        assert!(arc_names.len().is_multiple_of(2), "arc count must be even");
        assert_eq!(vertex_names.len(), nbhd.len());
        if arc_names.is_empty() && vertex_names.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        check_unique(&arc_names)?;
        check_unique(&vertex_names)?;
        let mut tangent = vec![None; arc_names.len()];
        for (v, arcs) in nbhd.iter().enumerate() {
            for &a in arcs {
                let slot = tangent
                    .get_mut(a)
                    .ok_or_else(|| GraphError::UnknownArc(format!("#{a}")))?;
                if slot.is_some() {
                    return Err(GraphError::ArcMultiplyAttached(arc_names[a].clone()));
                }
                *slot = Some(v);
            }
        }
        Ok(UGraph {
            name: name.into(),
            arc_names,
            vertex_names,
            tangent,
            nbhd,
        })
    }

    /// Builds a graph from named pairs and named neighborhoods.
    pub fn from_names(
        name: &str,
        pairs: &[(&str, &str)],
        vertices: &[(&str, &[&str])],
    ) -> Result<Self, GraphError> {
        let mut arc_names = Vec::with_capacity(2 * pairs.len());
        let mut index = HashMap::new();
        for &(a, b) in pairs {
            if a == b {
                return Err(GraphError::NotFixpointFree(a.to_string()));
            }
            for n in [a, b] {
                if index.insert(n.to_string(), arc_names.len()).is_some() {
                    return Err(GraphError::DuplicateArc(n.to_string()));
                }
                arc_names.push(n.to_string());
            }
        }
        let mut vertex_names = Vec::new();
        let mut nbhd = Vec::new();
        for &(v, arcs) in vertices {
            vertex_names.push(v.to_string());
            let mut list = Vec::new();
            for a in arcs {
                list.push(
                    *index
                        .get(*a)
                        .ok_or_else(|| GraphError::UnknownArc(a.to_string()))?,
                );
            }
            nbhd.push(list);
        }
        UGraph::new(name, arc_names, vertex_names, nbhd)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn num_arcs(&self) -> usize {
        self.arc_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.arc_names.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arc_name(&self, a: ArcId) -> &str {
        &self.arc_names[a]
    }

    pub fn arc_names(&self) -> &[String] {
        &self.arc_names
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn find_arc(&self, name: &str) -> Option<ArcId> {
        self.arc_names.iter().position(|n| n == name)
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// The vertex an arc is attached to, if the arc is dangling.
    pub fn tangent(&self, a: ArcId) -> Option<VertexId> {
        self.tangent[a]
    }

    pub fn is_dangling(&self, a: ArcId) -> bool {
        self.tangent[a].is_some()
    }

    pub fn nbhd(&self, v: VertexId) -> &[ArcId] {
        &self.nbhd[v]
    }

    pub fn arity(&self, v: VertexId) -> usize {
        self.nbhd[v].len()
    }

    /// Arcs that are not dangling, in index order.
    pub fn boundary(&self) -> Vec<ArcId> {
        (0..self.num_arcs()).filter(|&a| self.tangent[a].is_none()).collect()
    }

    /// Both arcs of the edge are dangling.
    pub fn is_internal(&self, e: EdgeId) -> bool {
        self.tangent[2 * e].is_some() && self.tangent[2 * e + 1].is_some()
    }

    /// Neither arc of the edge is dangling.
    pub fn is_floating(&self, e: EdgeId) -> bool {
        self.tangent[2 * e].is_none() && self.tangent[2 * e + 1].is_none()
    }

    /// Edges with an arc attached to `v`, without repetition.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.nbhd[v].iter().map(|&a| edge_of(a)).collect();
        es.sort_unstable();
        es.dedup();
        es
    }
}

fn check_unique(names: &[String]) -> Result<(), GraphError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(GraphError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}
