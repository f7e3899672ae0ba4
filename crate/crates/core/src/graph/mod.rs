//! Undirected multigraphs with dense vertex and edge indices.
//!
//! Parallel edges are first-class: two edges with the same endpoint pair are
//! distinct [`EdgeId`]s. Loops are rejected at construction.

mod contract;
mod decompose;
mod pattern;

pub use contract::{contract_triangle, find_triangles, Contraction};
pub use decompose::{decompose, Decomposition};
pub use pattern::{are_isomorphic, find_isomorphism, match_small_pattern, Pattern};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: usize, vertex: usize },
    #[error("edge {edge} duplicates the pair ({u}, {v}) in a simple graph")]
    DuplicateEdgeInSimpleMode { edge: usize, u: usize, v: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    IndexOutOfRange { vertex: usize, n: usize },
    #[error("vertices {0:?} do not induce a triangle")]
    NotATriangle([usize; 3]),
    #[error("triangle {0:?} has a doubled edge")]
    DoubledTriangleEdge([usize; 3]),
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
}

/// An undirected multigraph without loops.
///
/// Immutable after construction. `simple` records the mode the graph was
/// built in; a graph built in multigraph mode may still happen to have no
/// parallel edges (see [`MultiGraph::has_parallel_edges`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    endpoints: Vec<(VertexId, VertexId)>,
    incidence: Vec<Vec<EdgeId>>,
    simple: bool,
    max_degree: usize,
}

impl MultiGraph {
    /// Builds a graph on `n` vertices. Each edge is stored with its smaller
    /// endpoint first.
    pub fn new(n: usize, edges: &[(usize, usize)], simple: bool) -> Result<Self, GraphError> {
        let mut endpoints = Vec::with_capacity(edges.len());
        let mut incidence = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (idx, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::IndexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge { edge: idx, vertex: u });
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if simple && !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdgeInSimpleMode { edge: idx, u: a, v: b });
            }
            endpoints.push((VertexId(a), VertexId(b)));
            incidence[a].push(EdgeId(idx));
            incidence[b].push(EdgeId(idx));
        }
        let max_degree = incidence.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self { n, endpoints, incidence, simple, max_degree })
    }

    pub fn simple(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, edges, true)
    }

    pub fn multi(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, edges, false)
    }

    /// The graph with no edges on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, endpoints: Vec::new(), incidence: vec![Vec::new(); n], simple: true, max_degree: 0 }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    #[inline]
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.endpoints.len()).map(EdgeId)
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.endpoints[e.0]
    }

    /// The endpoint of `e` that is not `v`.
    #[inline]
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints[e.0];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v, "{e} is not incident with {v}");
            a
        }
    }

    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.0]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence[v.0].iter().map(move |&e| self.other_end(e, v))
    }

    /// Number of edges joining `u` and `v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let (small, big) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.incidence[small.0].iter().filter(|&&e| self.other_end(e, small) == big).count()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incidence[u.0].iter().copied().filter(move |&e| self.other_end(e, u) == v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges_between(u, v).next().is_some()
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs: Vec<_> = self.endpoints.clone();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    /// Endpoint pairs as plain indices, in edge order.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.endpoints.iter().map(|&(a, b)| (a.0, b.0)).collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.incidence.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// The subgraph spanned by `edges`, relabelled so its vertices are the
    /// endpoints of `edges` in increasing original order.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> Subgraph {
        let mut used = vec![false; self.n];
        for &e in edges {
            let (a, b) = self.endpoints(e);
            used[a.0] = true;
            used[b.0] = true;
        }
        let vertices: Vec<VertexId> = (0..self.n).filter(|&v| used[v]).map(VertexId).collect();
        self.subgraph_on(&vertices, edges)
    }

    /// The subgraph induced by `vertices` (kept in the given order).
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Subgraph {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v.0] = true;
        }
        let edges: Vec<EdgeId> = self
            .edges()
            .filter(|&e| {
                let (a, b) = self.endpoints(e);
                inside[a.0] && inside[b.0]
            })
            .collect();
        self.subgraph_on(vertices, &edges)
    }

    /// Builds the subgraph with the given vertex list and edge list. Every
    /// edge must have both endpoints in `vertices`.
    pub fn subgraph_on(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Subgraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v.0] = i;
        }
        let pairs: Vec<(usize, usize)> = edges
            .iter()
            .map(|&e| {
                let (a, b) = self.endpoints(e);
                (local[a.0], local[b.0])
            })
            .collect();
        let graph = MultiGraph::new(vertices.len(), &pairs, false)
            .expect("subgraph of a valid graph is valid");
        let graph = MultiGraph { simple: self.simple || !graph.has_parallel_edges(), ..graph };
        Subgraph { graph, vertex_map: vertices.to_vec(), edge_map: edges.to_vec() }
    }
}

/// A relabelled subgraph together with maps back into its host graph.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: MultiGraph,
    /// Local vertex index -> host vertex.
    pub vertex_map: Vec<VertexId>,
    /// Local edge index -> host edge.
    pub edge_map: Vec<EdgeId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn doubled_triangle_is_a_multigraph() {
        let g = MultiGraph::multi(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.max_degree(), 3);
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 2);
        assert!(g.has_parallel_edges());
        assert!(!g.is_simple());
    }

    #[test]
    fn k5() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = MultiGraph::simple(5, &edges).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.max_degree(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            MultiGraph::simple(2, &[(1, 1)]),
            Err(GraphError::LoopEdge { edge: 0, vertex: 1 })
        );
        assert_eq!(
            MultiGraph::simple(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdgeInSimpleMode { edge: 1, u: 0, v: 1 })
        );
        assert_eq!(
            MultiGraph::multi(2, &[(0, 2)]),
            Err(GraphError::IndexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn subgraph_maps_back() {
        let g = MultiGraph::simple(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = g.edge_subgraph(&[EdgeId(1), EdgeId(2)]);
        assert_eq!(s.graph.vertex_count(), 3);
        assert_eq!(s.vertex_map, vec![VertexId(1), VertexId(2), VertexId(3)]);
        assert_eq!(s.edge_map, vec![EdgeId(1), EdgeId(2)]);
    }

    proptest::proptest! {
        #[test]
        fn handshake(edges in proptest::collection::vec((0usize..9, 0usize..9), 0..30)) {
            let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a != b).collect();
            let g = MultiGraph::multi(9, &edges).unwrap();
            let total: usize = g.vertices().map(|v| g.degree(v)).sum();
            proptest::prop_assert_eq!(total, 2 * g.edge_count());
            proptest::prop_assert_eq!(g.max_degree(), g.degree_sequence().first().copied().unwrap_or(0));
        }
    }
}
