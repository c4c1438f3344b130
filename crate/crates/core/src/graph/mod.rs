//! Stable graphs: connected weighted multigraphs with loops.
//!
//! Parallel edges are stored as multiplicities keyed by the unordered vertex
//! pair, with `(v, v)` holding the loops at `v`. The degree of a vertex counts
//! each loop twice.

mod canon;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::CanonicalForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("duplicate vertex id {0}")]
    DuplicateId(u64),
    #[error("edge refers to unknown vertex id {0}")]
    UnknownId(u64),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// Why a graph fails to be stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub connected: bool,
    /// Weight-zero vertices of degree below three.
    pub unstable_vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StableGraph {
    weights: Vec<u32>,
    edges: BTreeMap<(usize, usize), u32>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl StableGraph {
    /// Vertices `0..weights.len()` with the given weights and no edges.
    pub fn with_weights(weights: Vec<u32>) -> StableGraph {
        StableGraph {
            weights,
            edges: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, weight: u32) -> usize {
        self.weights.push(weight);
        self.weights.len() - 1
    }

    /// Adds `mult` parallel edges between `a` and `b` (a loop when `a == b`).
    pub fn add_edges(&mut self, a: usize, b: usize, mult: u32) -> Result<(), GraphError> {
        for v in [a, b] {
            if v >= self.weights.len() {
                return Err(GraphError::NoSuchVertex(v));
            }
        }
        if mult > 0 {
            *self.edges.entry(key(a, b)).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.add_edges(a, b, 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    /// Number of edges, counted with multiplicity.
    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.edges.get(&key(a, b)).copied().unwrap_or(0)
    }

    pub fn loops(&self, v: usize) -> u32 {
        self.multiplicity(v, v)
    }

    /// `(a, b, multiplicity)` with `a <= b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.edges()
            .map(|(a, b, m)| {
                if a == v && b == v {
                    2 * m
                } else if a == v || b == v {
                    m
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.vertex_count()];
        for (a, b, m) in self.edges() {
            deg[a] += m;
            deg[b] += m;
        }
        deg
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges()
            .filter_map(|(a, b, _)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b, _) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// `Σ weights + e − v + 1`.
    pub fn genus(&self) -> Result<u32, GraphError> {
        if self.weights.is_empty() {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let w: u64 = self.weights.iter().map(|&w| w as u64).sum();
        // connected, so e >= v - 1
        Ok((w + self.edge_count() as u64 + 1 - self.vertex_count() as u64) as u32)
    }

    pub fn validate_stability(&self) -> Result<(), StabilityReport> {
        let connected = self.is_connected();
        let deg = self.degrees();
        let unstable_vertices: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| self.weights[v] == 0 && deg[v] < 3)
            .collect();
        if connected && unstable_vertices.is_empty() {
            Ok(())
        } else {
            Err(StabilityReport {
                connected,
                unstable_vertices,
            })
        }
    }

    pub fn is_stable(&self) -> bool {
        self.validate_stability().is_ok()
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> StableGraph {
        assert_eq!(perm.len(), self.vertex_count(), "relabel: permutation size");
        let mut weights = vec![0; self.vertex_count()];
        for (v, &w) in self.weights.iter().enumerate() {
            weights[perm[v]] = w;
        }
        let mut g = StableGraph::with_weights(weights);
        for (a, b, m) in self.edges() {
            *g.edges.entry(key(perm[a], perm[b])).or_insert(0) += m;
        }
        g
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self)
    }

    /// Weight-preserving multigraph isomorphism.
    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut p = self.weight_degree_profile();
        let mut q = other.weight_degree_profile();
        p.sort_unstable();
        q.sort_unstable();
        p == q && self.canonical_form() == other.canonical_form()
    }

    fn weight_degree_profile(&self) -> Vec<(u32, u32)> {
        self.weights
            .iter()
            .copied()
            .zip(self.degrees())
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<StableGraph, GraphError> {
        let raw: GraphJson =
            serde_json::from_value(v.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
        raw.try_into()
    }

    /// Graphviz text; weights label the vertices and parallel edges are
    /// repeated.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "graph \"{name}\" {{").unwrap();
        for (v, w) in self.weights.iter().enumerate() {
            writeln!(out, "  v{v} [label=\"{w}\"];").unwrap();
        }
        for (a, b, m) in self.edges() {
            for _ in 0..m {
                writeln!(out, "  v{a} -- v{b};").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexJson {
    id: u64,
    weight: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeJson {
    a: u64,
    b: u64,
    mult: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

impl From<&StableGraph> for GraphJson {
    fn from(g: &StableGraph) -> Self {
        GraphJson {
            vertices: g
                .weights
                .iter()
                .enumerate()
                .map(|(id, &weight)| VertexJson {
                    id: id as u64,
                    weight,
                })
                .collect(),
            edges: g
                .edges()
                .map(|(a, b, mult)| EdgeJson {
                    a: a as u64,
                    b: b as u64,
                    mult,
                })
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for StableGraph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, Self::Error> {
        let mut index = BTreeMap::new();
        let mut g = StableGraph::default();
        for v in &raw.vertices {
            if index.insert(v.id, g.add_vertex(v.weight)).is_some() {
                return Err(GraphError::DuplicateId(v.id));
            }
        }
        for e in &raw.edges {
            let a = *index.get(&e.a).ok_or(GraphError::UnknownId(e.a))?;
            let b = *index.get(&e.b).ok_or(GraphError::UnknownId(e.b))?;
            g.add_edges(a, b, e.mult)?;
        }
        Ok(g)
    }
}

impl Serialize for StableGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StableGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(weight: u32, loops: u32) -> StableGraph {
        let mut g = StableGraph::with_weights(vec![weight]);
        g.add_edges(0, 0, loops).unwrap();
        g
    }

    #[test]
    fn genus_of_basic_graphs() {
        assert_eq!(single(7, 0).genus().unwrap(), 7);
        // one vertex of weight n - n/m with n/m loops, n = 6, m = 2
        assert_eq!(single(3, 3).genus().unwrap(), 6);
        let mut g = StableGraph::with_weights(vec![0, 0]);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.genus().unwrap(), 0);
    }

    #[test]
    fn disconnected_genus_is_an_error() {
        let g = StableGraph::with_weights(vec![1, 1]);
        assert_eq!(g.genus(), Err(GraphError::Disconnected));
        assert_eq!(StableGraph::default().genus(), Err(GraphError::Empty));
    }

    #[test]
    fn loops_count_twice() {
        let g = single(0, 1);
        assert_eq!(g.degree(0), 2);
        let report = g.validate_stability().unwrap_err();
        assert_eq!(report.unstable_vertices, vec![0]);
        assert!(report.connected);
        assert!(single(0, 2).is_stable());
    }

    #[test]
    fn positive_weight_is_exempt() {
        let mut g = StableGraph::with_weights(vec![0, 1, 1]);
        g.add_edges(0, 1, 2).unwrap();
        g.add_edges(0, 2, 2).unwrap();
        assert!(g.is_stable());
    }

    #[test]
    fn bad_vertex_rejected() {
        let mut g = StableGraph::with_weights(vec![0]);
        assert_eq!(g.add_edge(0, 3), Err(GraphError::NoSuchVertex(3)));
    }

    #[test]
    fn relabel_preserves_isomorphism_class() {
        let mut g = StableGraph::with_weights(vec![0, 1, 2, 0]);
        g.add_edges(0, 1, 2).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edges(2, 3, 3).unwrap();
        g.add_edge(3, 3).unwrap();
        g.add_edge(0, 3).unwrap();
        let h = g.relabel(&[2, 0, 3, 1]);
        assert_ne!(g, h);
        assert!(g.is_isomorphic(&h));
        assert_eq!(g.genus(), h.genus());
    }

    #[test]
    fn weights_distinguish() {
        let mut a = StableGraph::with_weights(vec![1, 0]);
        a.add_edges(0, 1, 3).unwrap();
        let mut b = StableGraph::with_weights(vec![2, 0]);
        b.add_edges(0, 1, 2).unwrap();
        b.add_edge(1, 1).unwrap();
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn json_shape() {
        let mut g = StableGraph::with_weights(vec![2, 0]);
        g.add_edges(0, 1, 3).unwrap();
        let v = g.to_json_value();
        assert_eq!(
            v,
            serde_json::json!({
                "vertices": [{"id": 0, "weight": 2}, {"id": 1, "weight": 0}],
                "edges": [{"a": 0, "b": 1, "mult": 3}]
            })
        );
        assert_eq!(StableGraph::from_json_value(&v).unwrap(), g);
    }

    #[test]
    fn json_with_sparse_ids() {
        let v = serde_json::json!({
            "vertices": [{"id": 10, "weight": 1}, {"id": 4, "weight": 1}],
            "edges": [{"a": 4, "b": 10, "mult": 1}]
        });
        let g = StableGraph::from_json_value(&v).unwrap();
        assert_eq!(g.genus().unwrap(), 2);
        let bad = serde_json::json!({
            "vertices": [{"id": 1, "weight": 1}],
            "edges": [{"a": 1, "b": 2, "mult": 1}]
        });
        assert_eq!(StableGraph::from_json_value(&bad), Err(GraphError::UnknownId(2)));
    }

    #[test]
    fn dot_repeats_parallel_edges() {
        let mut g = StableGraph::with_weights(vec![0, 1]);
        g.add_edges(0, 1, 2).unwrap();
        g.add_edge(0, 0).unwrap();
        let dot = g.to_dot("x");
        assert_eq!(dot.matches("v0 -- v1;").count(), 2);
        assert_eq!(dot.matches("v0 -- v0;").count(), 1);
        assert!(dot.contains("v1 [label=\"1\"]"));
    }
}
