//! Exact maximum k-edge-colorable subgraph by branch and bound.

use num_rational::Ratio;
use thiserror::Error;

use crate::coloring::{Color, ColoringError, PartialColoring};
use crate::graph::{decompose, EdgeId, MultiGraph};

pub const DEFAULT_EDGE_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {edges} edges, above the oracle cap of {cap}")]
    InstanceTooLarge { edges: usize, cap: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// `c_k(G)`.
    pub optimum: usize,
    /// A coloring with exactly `optimum` colored edges.
    pub witness: PartialColoring,
    /// `c_k(G) / |E(G)|`, or 1 for an edgeless graph.
    pub gamma: Ratio<i64>,
    /// Search nodes visited.
    pub nodes: u64,
}

pub fn exact_max_ecs(g: &MultiGraph, k: usize) -> Result<OracleResult, OracleError> {
    exact_max_ecs_with_cap(g, k, DEFAULT_EDGE_CAP)
}

pub fn exact_max_ecs_with_cap(g: &MultiGraph, k: usize, cap: usize) -> Result<OracleResult, OracleError> {
    if g.edge_count() > cap {
        return Err(OracleError::InstanceTooLarge { edges: g.edge_count(), cap });
    }
    let mut empty = PartialColoring::new(g, k)?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(OracleResult { optimum: 0, witness: empty, gamma: Ratio::from_integer(1), nodes: 0 });
    }

    let mut search = Search::new(g, k);
    search.seed_greedy();
    search.run();

    for (i, &col) in search.best_colors.iter().enumerate() {
        if col != 0 {
            empty.assign(EdgeId(i), Color(col)).expect("oracle witness is proper");
        }
    }
    let optimum = search.best;
    debug_assert_eq!(empty.colored_count(), optimum);
    Ok(OracleResult {
        optimum,
        witness: empty,
        gamma: Ratio::new(optimum as i64, m as i64),
        nodes: search.nodes,
    })
}

/// `γ_k(G)`; 1 for an edgeless graph.
pub fn gamma_k(g: &MultiGraph, k: usize) -> Result<Ratio<i64>, OracleError> {
    Ok(exact_max_ecs(g, k)?.gamma)
}

/// `c_k(G)` only.
pub fn c_k(g: &MultiGraph, k: usize) -> Result<usize, OracleError> {
    Ok(exact_max_ecs(g, k)?.optimum)
}

/// An edge-disjoint group (block or connected component) whose colored
/// edges can number at most `k * floor(|V|/2)`.
struct Group {
    cap: usize,
    colored: usize,
    open: usize,
}

struct Search {
    k: usize,
    full: u32,
    order: Vec<usize>,
    ends: Vec<(usize, usize)>,
    used: Vec<u32>,
    open_deg: Vec<usize>,
    colors: Vec<u8>,
    colored: usize,
    /// Per edge: its block and its connected component.
    group_of: Vec<(usize, usize)>,
    blocks: Vec<Group>,
    comps: Vec<Group>,
    best: usize,
    best_colors: Vec<u8>,
    ceiling: usize,
    nodes: u64,
}

impl Search {
    fn new(g: &MultiGraph, k: usize) -> Self {
        let m = g.edge_count();
        let ends: Vec<(usize, usize)> = g.edge_pairs();
        let mut order: Vec<usize> = (0..m).collect();
        let key = |e: usize| {
            let (u, v) = ends[e];
            g.degree(crate::VertexId(u)) + g.degree(crate::VertexId(v))
        };
        order.sort_by_key(|&e| (std::cmp::Reverse(key(e)), e));

        let d = decompose(g);
        let half = |vs: usize| k * (vs / 2);
        let mut group_of = vec![(0, 0); m];
        let block_vs = d.block_vertices(g);
        let blocks: Vec<Group> = d
            .blocks
            .iter()
            .zip(&block_vs)
            .enumerate()
            .map(|(i, (b, vs))| {
                for e in b {
                    group_of[e.0].0 = i;
                }
                Group { cap: half(vs.len()), colored: 0, open: b.len() }
            })
            .collect();
        let mut comps: Vec<Group> = d
            .components
            .iter()
            .map(|vs| Group { cap: half(vs.len()), colored: 0, open: 0 })
            .collect();
        for e in 0..m {
            let c = d.component_of[ends[e].0];
            group_of[e].1 = c;
            comps[c].open += 1;
        }
        let ceiling = m
            .min(blocks.iter().map(|b| b.cap.min(b.open)).sum())
            .min(comps.iter().map(|c| c.cap.min(c.open)).sum());

        Self {
            k,
            full: if k >= 32 { u32::MAX } else { (1u32 << k) - 1 },
            order,
            used: vec![0; g.vertex_count()],
            open_deg: g.vertices().map(|v| g.degree(v)).collect(),
            ends,
            colors: vec![0; m],
            colored: 0,
            group_of,
            blocks,
            comps,
            best: 0,
            best_colors: vec![0; m],
            ceiling,
            nodes: 0,
        }
    }

    /// Greedy lowest-color pass in search order, as an initial incumbent.
    fn seed_greedy(&mut self) {
        let mut used = vec![0u32; self.used.len()];
        let mut colors = vec![0u8; self.colors.len()];
        let mut count = 0;
        for &e in &self.order {
            let (u, v) = self.ends[e];
            let free = self.full & !used[u] & !used[v];
            if free != 0 {
                let bit = free & free.wrapping_neg();
                used[u] |= bit;
                used[v] |= bit;
                colors[e] = bit.trailing_zeros() as u8 + 1;
                count += 1;
            }
        }
        self.best = count;
        self.best_colors = colors;
    }

    fn run(&mut self) {
        if self.best < self.ceiling {
            self.dfs(0, 0);
        }
    }

    fn bound(&self, pos: usize) -> usize {
        // Open edges that can still receive a color.
        let mut colorable = 0;
        for &e in &self.order[pos..] {
            let (u, v) = self.ends[e];
            if self.full & !self.used[u] & !self.used[v] != 0 {
                colorable += 1;
            }
        }
        let mut best = self.colored + colorable;

        let mut deg_sum = 0;
        for v in 0..self.used.len() {
            let free = (self.full & !self.used[v]).count_ones() as usize;
            deg_sum += free.min(self.open_deg[v]);
        }
        best = best.min(self.colored + deg_sum / 2);

        let mut per_color = 0;
        for c in 0..self.k {
            let bit = 1u32 << c;
            let avail =
                (0..self.used.len()).filter(|&v| self.open_deg[v] > 0 && self.used[v] & bit == 0).count();
            per_color += avail / 2;
        }
        best = best.min(self.colored + per_color);

        let groups = |gs: &[Group]| gs.iter().map(|b| b.cap.min(b.colored + b.open)).sum::<usize>();
        best.min(groups(&self.blocks)).min(groups(&self.comps))
    }

    fn set(&mut self, e: usize, col: u8) {
        let (u, v) = self.ends[e];
        let (b, c) = self.group_of[e];
        self.open_deg[u] -= 1;
        self.open_deg[v] -= 1;
        self.blocks[b].open -= 1;
        self.comps[c].open -= 1;
        if col != 0 {
            let bit = 1u32 << (col - 1);
            self.used[u] |= bit;
            self.used[v] |= bit;
            self.colored += 1;
            self.blocks[b].colored += 1;
            self.comps[c].colored += 1;
        }
        self.colors[e] = col;
    }

    fn unset(&mut self, e: usize) {
        let (u, v) = self.ends[e];
        let (b, c) = self.group_of[e];
        let col = self.colors[e];
        self.open_deg[u] += 1;
        self.open_deg[v] += 1;
        self.blocks[b].open += 1;
        self.comps[c].open += 1;
        if col != 0 {
            let bit = 1u32 << (col - 1);
            self.used[u] &= !bit;
            self.used[v] &= !bit;
            self.colored -= 1;
            self.blocks[b].colored -= 1;
            self.comps[c].colored -= 1;
        }
        self.colors[e] = 0;
    }

    /// Returns true once the incumbent reaches the ceiling.
    fn dfs(&mut self, pos: usize, max_used: usize) -> bool {
        self.nodes += 1;
        if pos == self.order.len() {
            if self.colored > self.best {
                self.best = self.colored;
                self.best_colors.copy_from_slice(&self.colors);
            }
            return self.best >= self.ceiling;
        }
        if self.bound(pos) <= self.best {
            return false;
        }
        let e = self.order[pos];
        let (u, v) = self.ends[e];
        let free = self.full & !self.used[u] & !self.used[v];
        // Colors are interchangeable: a branch may open at most one new color.
        let limit = (max_used + 1).min(self.k);
        for c in 0..limit {
            if free & (1 << c) == 0 {
                continue;
            }
            self.set(e, c as u8 + 1);
            let done = self.dfs(pos + 1, max_used.max(c + 1));
            self.unset(e);
            if done {
                return true;
            }
        }
        self.set(e, 0);
        let done = self.dfs(pos + 1, max_used);
        self.unset(e);
        done
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;
    use crate::gen::{gen_named, NamedGraph};
    use proptest::prelude::*;

    /// Independent reference: try every assignment of `0..=k` to the edges.
    fn brute_force(g: &MultiGraph, k: usize) -> usize {
        let m = g.edge_count();
        let ends = g.edge_pairs();
        let mut best = 0;
        let mut colors = vec![0usize; m];
        loop {
            let mut ok = true;
            'check: for i in 0..m {
                if colors[i] == 0 {
                    continue;
                }
                for j in i + 1..m {
                    if colors[j] == colors[i] {
                        let (a, b) = ends[i];
                        let (c, d) = ends[j];
                        if a == c || a == d || b == c || b == d {
                            ok = false;
                            break 'check;
                        }
                    }
                }
            }
            if ok {
                best = best.max(colors.iter().filter(|&&c| c != 0).count());
            }
            let mut i = 0;
            loop {
                if i == m {
                    return best;
                }
                colors[i] += 1;
                if colors[i] <= k {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn small_named_values() {
        let g3 = gen_named(&NamedGraph::G3).unwrap();
        assert_eq!(c_k(&g3, 3).unwrap(), 3);
        let b3 = gen_named(&NamedGraph::B3).unwrap();
        assert_eq!(c_k(&b3, 3).unwrap(), 6);
        let k4 = gen_named(&NamedGraph::K(4)).unwrap();
        assert_eq!(c_k(&k4, 3).unwrap(), 6);
    }

    #[test]
    fn edgeless_gamma_is_one() {
        let g = MultiGraph::empty(3);
        assert_eq!(gamma_k(&g, 2).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn cap_is_enforced() {
        let g = gen_named(&NamedGraph::K(8)).unwrap();
        assert_eq!(
            exact_max_ecs(&g, 7).unwrap_err(),
            OracleError::InstanceTooLarge { edges: 28, cap: DEFAULT_EDGE_CAP }
        );
    }

    #[test]
    fn deterministic() {
        let g = gen_named(&NamedGraph::Petersen).unwrap();
        let a = exact_max_ecs(&g, 3).unwrap();
        let b = exact_max_ecs(&g, 3).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.witness, b.witness);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_brute_force(
            raw in prop::collection::vec((0usize..6, 0usize..6), 0..8), k in 1usize..4
        ) {
            let edges: Vec<_> = raw.into_iter().filter(|(a, b)| a != b).collect();
            let g = MultiGraph::multi(6, &edges).unwrap();
            let r = exact_max_ecs(&g, k).unwrap();
            prop_assert_eq!(r.optimum, brute_force(&g, k));
            prop_assert!(validate_coloring(&g, &r.witness).is_valid());
            prop_assert_eq!(r.witness.colored_count(), r.optimum);
        }
    }
}
