use std::collections::HashMap;

use super::{EdgeId, GraphError, UGraph, VertexId};

/// A directed graph. Each edge is an input of at most one vertex (its head)
/// and an output of at most one vertex (its tail).
///
/// The underlying undirected graph has arcs `2e` (named `e+`, attached at the
/// head) and `2e + 1` (named `e-`, attached at the tail).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGraph {
    name: String,
    edge_names: Vec<String>,
    vertex_names: Vec<String>,
    head: Vec<Option<VertexId>>,
    tail: Vec<Option<VertexId>>,
    ins: Vec<Vec<EdgeId>>,
    outs: Vec<Vec<EdgeId>>,
    under: UGraph,
}

impl DGraph {
    pub fn new(
        name: impl Into<String>,
        edge_names: Vec<String>,
        vertex_names: Vec<String>,
        ins: Vec<Vec<EdgeId>>,
        outs: Vec<Vec<EdgeId>>,
    ) -> Result<Self, GraphError> {
        let name = name.into();
        assert_eq!(vertex_names.len(), ins.len());
        assert_eq!(vertex_names.len(), outs.len());
        if edge_names.is_empty() && vertex_names.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let ne = edge_names.len();
        let mut head = vec![None; ne];
        let mut tail = vec![None; ne];
        for (v, list) in ins.iter().enumerate() {
            for &e in list {
                if e >= ne {
                    return Err(GraphError::UnknownEdge(format!("#{e}")));
                }
                if head[e].replace(v).is_some() {
                    return Err(GraphError::EdgeInputReused(edge_names[e].clone()));
                }
            }
        }
        for (v, list) in outs.iter().enumerate() {
            for &e in list {
                if e >= ne {
                    return Err(GraphError::UnknownEdge(format!("#{e}")));
                }
                if tail[e].replace(v).is_some() {
                    return Err(GraphError::EdgeOutputReused(edge_names[e].clone()));
                }
            }
        }
        let arc_names = edge_names
            .iter()
            .flat_map(|e| [format!("{e}+"), format!("{e}-")])
            .collect();
        let nbhd = (0..vertex_names.len())
            .map(|v| {
                ins[v]
                    .iter()
                    .map(|&e| 2 * e)
                    .chain(outs[v].iter().map(|&e| 2 * e + 1))
                    .collect()
            })
            .collect();
        let under = UGraph::new(name.clone(), arc_names, vertex_names.clone(), nbhd)?;
        Ok(DGraph {
            name,
            edge_names,
            vertex_names,
            head,
            tail,
            ins,
            outs,
            under,
        })
    }

    /// Builds a directed graph from edge names and `(vertex, inputs, outputs)`.
    pub fn from_names(
        name: &str,
        edges: &[&str],
        vertices: &[(&str, &[&str], &[&str])],
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if index.insert(e.to_string(), i).is_some() {
                return Err(GraphError::DuplicateName(e.to_string()));
            }
        }
        let look = |e: &str| {
            index
                .get(e)
                .copied()
                .ok_or_else(|| GraphError::UnknownEdge(e.to_string()))
        };
        let mut vnames = Vec::new();
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for &(v, i, o) in vertices {
            vnames.push(v.to_string());
            ins.push(i.iter().map(|e| look(e)).collect::<Result<Vec<_>, _>>()?);
            outs.push(o.iter().map(|e| look(e)).collect::<Result<Vec<_>, _>>()?);
        }
        DGraph::new(
            name,
            edges.iter().map(|s| s.to_string()).collect(),
            vnames,
            ins,
            outs,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
        self.under.set_name(name);
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn find_edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// The vertex this edge is an input of.
    pub fn head(&self, e: EdgeId) -> Option<VertexId> {
        self.head[e]
    }

    /// The vertex this edge is an output of.
    pub fn tail(&self, e: EdgeId) -> Option<VertexId> {
        self.tail[e]
    }

    pub fn ins(&self, v: VertexId) -> &[EdgeId] {
        &self.ins[v]
    }

    pub fn outs(&self, v: VertexId) -> &[EdgeId] {
        &self.outs[v]
    }

    /// Edges that are not outputs of any vertex.
    pub fn graph_inputs(&self) -> Vec<EdgeId> {
        (0..self.num_edges()).filter(|&e| self.tail[e].is_none()).collect()
    }

    /// Edges that are not inputs of any vertex.
    pub fn graph_outputs(&self) -> Vec<EdgeId> {
        (0..self.num_edges()).filter(|&e| self.head[e].is_none()).collect()
    }

    pub fn underlying(&self) -> &UGraph {
        &self.under
    }
}
