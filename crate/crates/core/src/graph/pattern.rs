use std::fmt;
use std::str::FromStr;

use super::{GraphError, MultiGraph, VertexId};
use crate::gen::{gen_named, NamedGraph};

/// Fixed small graphs the solvers test membership against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    G3,
    B3,
    GStar5,
    /// Complete graph on `n ≤ 8` vertices.
    K(usize),
}

pub const MAX_PATTERN_VERTICES: usize = 8;

impl Pattern {
    pub fn graph(&self) -> MultiGraph {
        let tag = match *self {
            Pattern::G3 => NamedGraph::G3,
            Pattern::B3 => NamedGraph::B3,
            Pattern::GStar5 => NamedGraph::GStar5,
            Pattern::K(n) => NamedGraph::K(n),
        };
        gen_named(&tag).expect("pattern graphs are valid")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::G3 => write!(f, "G3"),
            Pattern::B3 => write!(f, "B3"),
            Pattern::GStar5 => write!(f, "Gstar5"),
            Pattern::K(n) => write!(f, "K{n}"),
        }
    }
}

impl FromStr for Pattern {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = match s {
            "G3" | "g3" => Pattern::G3,
            "B3" | "b3" => Pattern::B3,
            "Gstar5" | "gstar5" | "G5*" | "GStar5" => Pattern::GStar5,
            _ => {
                let n = s
                    .strip_prefix(['K', 'k'])
                    .and_then(|r| r.parse::<usize>().ok())
                    .filter(|&n| (1..=MAX_PATTERN_VERTICES).contains(&n))
                    .ok_or_else(|| GraphError::UnknownPattern(s.to_string()))?;
                Pattern::K(n)
            }
        };
        Ok(p)
    }
}

/// True iff `g` is isomorphic to `pattern`.
pub fn match_small_pattern(g: &MultiGraph, pattern: &Pattern) -> bool {
    are_isomorphic(g, &pattern.graph())
}

pub fn are_isomorphic(a: &MultiGraph, b: &MultiGraph) -> bool {
    find_isomorphism(a, b).is_some()
}

/// An isomorphism `a -> b` as a vertex map, if one exists. Exhaustive search
/// with degree pruning; intended for graphs of at most a dozen vertices.
pub fn find_isomorphism(a: &MultiGraph, b: &MultiGraph) -> Option<Vec<VertexId>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    if a.degree_sequence() != b.degree_sequence() {
        return None;
    }
    let ma = multiplicity_matrix(a);
    let mb = multiplicity_matrix(b);
    let da: Vec<usize> = a.vertices().map(|v| a.degree(v)).collect();
    let db: Vec<usize> = b.vertices().map(|v| b.degree(v)).collect();

    // Place high-degree vertices first; they prune best.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(da[v]), v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, &order, &ma, &mb, &da, &db, &mut map, &mut used) {
        Some(map.into_iter().map(VertexId).collect())
    } else {
        None
    }
}

fn multiplicity_matrix(g: &MultiGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        m[u.0][v.0] += 1;
        m[v.0][u.0] += 1;
    }
    m
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    ma: &[Vec<usize>],
    mb: &[Vec<usize>],
    da: &[usize],
    db: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..order.len() {
        if used[w] || da[v] != db[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| ma[v][u] == mb[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(depth + 1, order, ma, mb, da, db, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
