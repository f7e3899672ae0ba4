use super::{EdgeId, GraphError, MultiGraph, VertexId};

/// Result of contracting a triangle, with maps from the original graph.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// Original vertex -> vertex of the contracted graph. The three triangle
    /// vertices share one image.
    pub vertex_map: Vec<VertexId>,
    /// Original edge -> contracted edge; `None` for the triangle edges.
    pub edge_map: Vec<Option<EdgeId>>,
    /// The merged vertex in the contracted graph.
    pub merged: VertexId,
    /// The triangle edges in the original graph, as (t0t1, t1t2, t0t2).
    pub triangle_edges: [EdgeId; 3],
}

/// All vertex triples `a < b < c` that are pairwise adjacent, in
/// lexicographic order.
pub fn find_triangles(g: &MultiGraph) -> Vec<[VertexId; 3]> {
    let mut out = Vec::new();
    for a in g.vertices() {
        let mut nb: Vec<VertexId> = g.neighbors(a).filter(|&v| v > a).collect();
        nb.sort_unstable();
        nb.dedup();
        for (i, &b) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if g.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Merges the three vertices of `t` into one, dropping the triangle edges
/// and keeping all other edges (parallel edges may appear).
pub fn contract_triangle(g: &MultiGraph, t: [VertexId; 3]) -> Result<Contraction, GraphError> {
    let raw = [t[0].0, t[1].0, t[2].0];
    for &v in &raw {
        if v >= g.vertex_count() {
            return Err(GraphError::IndexOutOfRange { vertex: v, n: g.vertex_count() });
        }
    }
    if raw[0] == raw[1] || raw[1] == raw[2] || raw[0] == raw[2] {
        return Err(GraphError::NotATriangle(raw));
    }
    let pairs = [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])];
    let mut triangle_edges = [EdgeId(0); 3];
    for (slot, &(u, v)) in pairs.iter().enumerate() {
        let mut it = g.edges_between(u, v);
        match (it.next(), it.next()) {
            (None, _) => return Err(GraphError::NotATriangle(raw)),
            (Some(_), Some(_)) => return Err(GraphError::DoubledTriangleEdge(raw)),
            (Some(e), None) => triangle_edges[slot] = e,
        }
    }

    let rep = *raw.iter().min().unwrap();
    let mut vertex_map = vec![VertexId(0); g.vertex_count()];
    let mut next = 0;
    let mut merged = VertexId(0);
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        if raw.contains(&v) {
            if v == rep {
                merged = VertexId(next);
                next += 1;
            }
        } else {
            *slot = VertexId(next);
            next += 1;
        }
    }
    for &v in &raw {
        vertex_map[v] = merged;
    }

    let mut edges = Vec::with_capacity(g.edge_count() - 3);
    let mut edge_map = vec![None; g.edge_count()];
    for e in g.edges() {
        if triangle_edges.contains(&e) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        edge_map[e.0] = Some(EdgeId(edges.len()));
        edges.push((vertex_map[u.0].0, vertex_map[v.0].0));
    }
    // Every triangle pair has multiplicity one, so no loop can survive.
    let graph = MultiGraph::new(next, &edges, false)?;
    Ok(Contraction { graph, vertex_map, edge_map, merged, triangle_edges })
}
