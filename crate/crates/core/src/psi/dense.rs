use crate::coloring::{Color, ColorSet, PartialColoring};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// Search nodes spent on one local recoloring before settling for the best
/// assignment found.
pub(crate) const NODE_BUDGET: u64 = 200_000;

/// Vertex sets on which an exact local recoloring is attempted: closed
/// neighborhoods of `Δ+1` vertices missing at most one edge (`Δ ≥ 4`), and
/// for `Δ = 6` also 6-cliques inside a closed neighborhood.
pub(crate) fn dense_sets(g: &MultiGraph, palette: usize) -> Vec<Vec<VertexId>> {
    let delta = g.max_degree();
    if delta < 4 || palette != delta {
        return Vec::new();
    }
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for v in g.vertices() {
        if g.degree(v) != delta {
            continue;
        }
        let mut nb: Vec<VertexId> = g.neighbors(v).collect();
        nb.push(v);
        nb.sort_unstable();
        nb.dedup();
        if nb.len() != delta + 1 {
            continue;
        }
        let full = (delta + 1) * delta / 2;
        if induced_pairs(g, &nb) + 1 >= full {
            out.push(nb.clone());
        }
        if delta == 6 {
            for skip in nb.iter().copied().filter(|&u| u != v) {
                let s: Vec<VertexId> = nb.iter().copied().filter(|&u| u != skip).collect();
                if induced_pairs(g, &s) == 15 {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Number of adjacent pairs inside `s`.
fn induced_pairs(g: &MultiGraph, s: &[VertexId]) -> usize {
    let mut count = 0;
    for (i, &u) in s.iter().enumerate() {
        for &w in &s[i + 1..] {
            if g.has_edge(u, w) {
                count += 1;
            }
        }
    }
    count
}

/// Edges with at least one endpoint in `s`.
pub(crate) fn region_edges(g: &MultiGraph, s: &[VertexId]) -> Vec<EdgeId> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in s {
        inside[v.0] = true;
    }
    g.edges()
        .filter(|&e| {
            let (u, w) = g.endpoints(e);
            inside[u.0] || inside[w.0]
        })
        .collect()
}

/// Recolors the edges of `region` to color as many of them as possible,
/// keeping every other edge as it is in `c`. Returns the best assignment
/// found within `node_budget` search nodes, which is optimal whenever the
/// search completes.
pub fn extend_exact(c: &PartialColoring, region: &[EdgeId], node_budget: u64) -> Option<PartialColoring> {
    let mut t = c.clone();
    for &e in region {
        t.unassign(e);
    }
    let incumbent = region.iter().filter(|&&e| c.is_colored(e)).count();
    let mut s = Local { order: region.to_vec(), best: incumbent, best_colors: None, nodes: 0, budget: node_budget };
    // Most constrained edges first.
    s.order.sort_by_key(|&e| {
        let (u, v) = t.endpoints(e);
        t.free(u).intersection(t.free(v)).len()
    });
    let mut current = Vec::with_capacity(region.len());
    s.dfs(&mut t, 0, 0, &mut current);
    let Some(colors) = s.best_colors else { return Some(c.clone()) };
    for (&e, col) in s.order.iter().zip(colors) {
        if let Some(col) = col {
            t.assign(e, col).ok()?;
        }
    }
    Some(t)
}

struct Local {
    order: Vec<EdgeId>,
    best: usize,
    best_colors: Option<Vec<Option<Color>>>,
    nodes: u64,
    budget: u64,
}

impl Local {
    fn dfs(
        &mut self,
        t: &mut PartialColoring,
        i: usize,
        colored: usize,
        current: &mut Vec<Option<Color>>,
    ) {
        self.nodes += 1;
        if i == self.order.len() {
            if colored > self.best {
                self.best = colored;
                self.best_colors = Some(current.clone());
            }
            return;
        }
        if self.nodes > self.budget || colored + (self.order.len() - i) <= self.best {
            return;
        }
        let e = self.order[i];
        let (u, v) = t.endpoints(e);
        let options: ColorSet = t.free(u).intersection(t.free(v));
        for col in options.iter() {
            t.assign(e, col).expect("color is free at both ends");
            current.push(Some(col));
            self.dfs(t, i + 1, colored + 1, current);
            current.pop();
            t.unassign(e);
        }
        current.push(None);
        self.dfs(t, i + 1, colored, current);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;
    use crate::gen::{gen_named, NamedGraph};
    use crate::oracle::c_k;

    #[test]
    fn whole_graph_region_is_exact() {
        let g = gen_named(&NamedGraph::KMinusE(5)).unwrap();
        let c = PartialColoring::new(&g, 4).unwrap();
        let all: Vec<EdgeId> = g.edges().collect();
        let t = extend_exact(&c, &all, u64::MAX).unwrap();
        assert!(validate_coloring(&g, &t).is_valid());
        assert_eq!(t.colored_count(), c_k(&g, 4).unwrap());
    }

    #[test]
    fn dense_sets_of_k5_minus_e() {
        let g = gen_named(&NamedGraph::KMinusE(5)).unwrap();
        // Only the three full-degree vertices qualify, all with the same
        // neighborhood.
        assert_eq!(dense_sets(&g, 4).len(), 1);
        assert!(dense_sets(&g, 5).is_empty());
    }
}
