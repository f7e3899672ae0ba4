use super::{EdgeId, MultiGraph, VertexId};

/// Connected components, biconnected components, bridges and cut vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub components: Vec<Vec<VertexId>>,
    /// Component index per vertex.
    pub component_of: Vec<usize>,
    /// Edge sets of the biconnected components (blocks), each sorted. A
    /// bridge forms a block on its own; isolated vertices have no block.
    pub blocks: Vec<Vec<EdgeId>>,
    pub bridges: Vec<EdgeId>,
    pub cut_vertices: Vec<VertexId>,
}

impl Decomposition {
    pub fn is_bridge(&self, e: EdgeId) -> bool {
        self.bridges.binary_search(&e).is_ok()
    }

    /// Vertex sets of the blocks, each sorted.
    pub fn block_vertices(&self, g: &MultiGraph) -> Vec<Vec<VertexId>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut vs: Vec<VertexId> = b
                    .iter()
                    .flat_map(|&e| {
                        let (u, v) = g.endpoints(e);
                        [u, v]
                    })
                    .collect();
                vs.sort_unstable();
                vs.dedup();
                vs
            })
            .collect()
    }
}

/// Single iterative DFS computing low-points. Only the tree edge itself is
/// skipped when scanning back edges, so a parallel copy of a tree edge
/// counts as a back edge and parallel pairs are never bridges.
pub fn decompose(g: &MultiGraph) -> Decomposition {
    let n = g.vertex_count();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut component_of = vec![UNSEEN; n];
    let mut components = Vec::new();
    let mut blocks = Vec::new();
    let mut bridges = Vec::new();
    let mut is_cut = vec![false; n];
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut edge_seen = vec![false; g.edge_count()];
    let mut time = 0;

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        let comp_id = components.len();
        let mut comp = Vec::new();
        // (vertex, parent edge, next incidence position)
        let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        component_of[root] = comp_id;
        comp.push(VertexId(root));
        let mut root_children = 0;

        while let Some(top) = stack.last_mut() {
            let (v, parent, pos) = *top;
            let inc = g.incident(VertexId(v));
            if pos < inc.len() {
                let e = inc[pos];
                top.2 += 1;
                if Some(e) == parent {
                    continue;
                }
                let w = g.other_end(e, VertexId(v)).0;
                if disc[w] == UNSEEN {
                    edge_seen[e.0] = true;
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    component_of[w] = comp_id;
                    comp.push(VertexId(w));
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(e), 0));
                } else if !edge_seen[e.0] {
                    edge_seen[e.0] = true;
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(pe) = parent {
                    let u = g.other_end(pe, VertexId(v)).0;
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        if u != root {
                            is_cut[u] = true;
                        }
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                    if low[v] > disc[u] {
                        bridges.push(pe);
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
        comp.sort_unstable();
        components.push(comp);
    }

    bridges.sort_unstable();
    blocks.sort();
    let cut_vertices = (0..n).filter(|&v| is_cut[v]).map(VertexId).collect();
    Decomposition { components, component_of, blocks, bridges, cut_vertices }
}

impl MultiGraph {
    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || decompose(self).components.len() == 1
    }

    /// Connected with at least one edge and a single block.
    pub fn is_biconnected(&self) -> bool {
        let d = decompose(self);
        d.components.len() == 1 && d.blocks.len() == 1
    }

    /// Connected and bridgeless.
    pub fn is_two_edge_connected(&self) -> bool {
        let d = decompose(self);
        d.components.len() == 1 && d.bridges.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_named, NamedGraph};
    use proptest::prelude::*;

    fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut count = n;
        for &(a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
        count
    }

    #[test]
    fn k4_has_one_block() {
        let d = decompose(&gen_named(&NamedGraph::K(4)).unwrap());
        assert_eq!(d.blocks.len(), 1);
        assert!(d.bridges.is_empty());
        assert!(d.cut_vertices.is_empty());
    }

    #[test]
    fn two_g3_bridge() {
        let g = gen_named(&NamedGraph::TwoG3Bridge).unwrap();
        let d = decompose(&g);
        assert_eq!(d.bridges.len(), 1);
        let (u, v) = g.endpoints(d.bridges[0]);
        assert_eq!(g.degree(u), 3);
        assert_eq!(g.degree(v), 3);
        assert_eq!(d.blocks.len(), 3);
    }

    #[test]
    fn path_on_four_vertices() {
        let g = MultiGraph::simple(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = decompose(&g);
        assert_eq!(d.bridges.len(), 3);
        assert_eq!(d.cut_vertices, vec![VertexId(1), VertexId(2)]);
    }

    #[test]
    fn parallel_pair_is_not_a_bridge() {
        let g = MultiGraph::multi(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        let d = decompose(&g);
        assert_eq!(d.bridges, vec![EdgeId(2)]);
        assert_eq!(d.cut_vertices, vec![VertexId(1)]);
    }

    proptest! {
        #[test]
        fn bridges_are_exactly_disconnecting_edges(
            raw in prop::collection::vec((0usize..8, 0usize..8), 0..16)
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|(a, b)| a != b).collect();
            let g = MultiGraph::multi(8, &edges).unwrap();
            let d = decompose(&g);
            let base = count_components(8, &edges);
            prop_assert_eq!(base, d.components.len());
            for e in 0..edges.len() {
                let rest: Vec<_> = edges.iter().enumerate()
                    .filter(|&(i, _)| i != e).map(|(_, &p)| p).collect();
                let after = count_components(8, &rest);
                prop_assert_eq!(after == base + 1, d.is_bridge(EdgeId(e)));
                prop_assert!(after <= base + 1);
            }
            // Blocks partition the edges and bridges are singleton blocks.
            let mut all: Vec<EdgeId> = d.blocks.iter().flatten().copied().collect();
            all.sort();
            prop_assert_eq!(all, g.edges().collect::<Vec<_>>());
            for &b in &d.bridges {
                prop_assert!(d.blocks.iter().any(|blk| blk == &vec![b]));
            }
            // Cut vertices are those shared by two or more blocks.
            let bv = d.block_vertices(&g);
            for v in g.vertices() {
                let shared = bv.iter().filter(|vs| vs.contains(&v)).count() >= 2;
                prop_assert_eq!(shared, d.cut_vertices.contains(&v));
            }
        }
    }
}
