//! Named graphs and seeded random instances.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{are_isomorphic, contract_triangle, GraphError, MultiGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown graph tag `{0}`")]
    BadTag(String),
    #[error("B(Δ) needs odd Δ ≥ 3, got {0}")]
    EvenDelta(usize),
    #[error("unsatisfiable generator parameters: {0}")]
    UnsatisfiableParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NamedGraph {
    /// K3 with one edge doubled.
    G3,
    /// K4 with one edge subdivided.
    B3,
    /// A 4-cycle with one edge doubled, plus a degree-2 vertex joined to the
    /// two cycle vertices off the double edge.
    GStar5,
    Petersen,
    K(usize),
    /// K(n) minus one edge.
    KMinusE(usize),
    /// For odd Δ: K(Δ+1) minus a matching of size (Δ-1)/2, plus an apex
    /// joined to the matched vertices.
    BDelta(usize),
    /// Two copies of G3 with their degree-2 vertices joined.
    TwoG3Bridge,
    /// The i-th (0-based) graph contracting to B3 at a triangle.
    B3TrianglePreimage(usize),
    /// The i-th (0-based) graph contracting to G5* at a triangle.
    GStar5TrianglePreimage(usize),
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraph::G3 => write!(f, "G3"),
            NamedGraph::B3 => write!(f, "B3"),
            NamedGraph::GStar5 => write!(f, "Gstar5"),
            NamedGraph::Petersen => write!(f, "petersen"),
            NamedGraph::K(n) => write!(f, "K{n}"),
            NamedGraph::KMinusE(n) => write!(f, "K{n}-e"),
            NamedGraph::BDelta(d) => write!(f, "B({d})"),
            NamedGraph::TwoG3Bridge => write!(f, "two-g3-bridge"),
            NamedGraph::B3TrianglePreimage(i) => write!(f, "b3-preimage-{i}"),
            NamedGraph::GStar5TrianglePreimage(i) => write!(f, "gstar5-preimage-{i}"),
        }
    }
}

impl FromStr for NamedGraph {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::BadTag(s.to_string());
        let lower = s.to_ascii_lowercase();
        let tag = match lower.as_str() {
            "g3" => NamedGraph::G3,
            "b3" => NamedGraph::B3,
            "gstar5" | "g5*" => NamedGraph::GStar5,
            "petersen" => NamedGraph::Petersen,
            "two-g3-bridge" | "twog3bridge" => NamedGraph::TwoG3Bridge,
            _ => {
                if let Some(i) = lower.strip_prefix("b3-preimage-") {
                    NamedGraph::B3TrianglePreimage(i.parse().map_err(|_| bad())?)
                } else if let Some(i) = lower.strip_prefix("gstar5-preimage-") {
                    NamedGraph::GStar5TrianglePreimage(i.parse().map_err(|_| bad())?)
                } else if let Some(rest) = lower.strip_prefix('k') {
                    match rest.strip_suffix("-e") {
                        Some(n) => NamedGraph::KMinusE(n.parse().map_err(|_| bad())?),
                        None => NamedGraph::K(rest.parse().map_err(|_| bad())?),
                    }
                } else if let Some(rest) = lower.strip_prefix('b') {
                    let d = rest.trim_start_matches('(').trim_end_matches(')');
                    NamedGraph::BDelta(d.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(tag)
    }
}

fn complete_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    edges
}

pub fn gen_named(tag: &NamedGraph) -> Result<MultiGraph, GenError> {
    let g = match *tag {
        NamedGraph::G3 => MultiGraph::multi(3, &[(0, 1), (0, 1), (1, 2), (2, 0)])?,
        NamedGraph::B3 => MultiGraph::simple(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 1)])?,
        NamedGraph::GStar5 => {
            MultiGraph::multi(5, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)])?
        }
        NamedGraph::Petersen => {
            let mut edges = Vec::with_capacity(15);
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((5 + i, 5 + (i + 2) % 5));
            }
            MultiGraph::simple(10, &edges)?
        }
        NamedGraph::K(n) => MultiGraph::simple(n, &complete_pairs(n))?,
        NamedGraph::KMinusE(n) => {
            if n < 2 {
                return Err(GenError::BadTag(tag.to_string()));
            }
            let edges: Vec<_> = complete_pairs(n).into_iter().filter(|&p| p != (0, 1)).collect();
            MultiGraph::simple(n, &edges)?
        }
        NamedGraph::BDelta(d) => {
            if d < 3 || d % 2 == 0 {
                return Err(GenError::EvenDelta(d));
            }
            let l = (d - 1) / 2;
            let matching: Vec<(usize, usize)> = (0..l).map(|i| (2 * i, 2 * i + 1)).collect();
            let mut edges: Vec<_> =
                complete_pairs(d + 1).into_iter().filter(|p| !matching.contains(p)).collect();
            edges.extend((0..2 * l).map(|v| (v, d + 1)));
            MultiGraph::simple(d + 2, &edges)?
        }
        NamedGraph::TwoG3Bridge => MultiGraph::multi(
            6,
            &[(0, 1), (0, 1), (1, 2), (2, 0), (3, 4), (3, 4), (4, 5), (5, 3), (2, 5)],
        )?,
        NamedGraph::B3TrianglePreimage(i) => triangle_preimages(&gen_named(&NamedGraph::B3)?)
            .into_iter()
            .nth(i)
            .ok_or_else(|| GenError::BadTag(tag.to_string()))?,
        NamedGraph::GStar5TrianglePreimage(i) => {
            triangle_preimages(&gen_named(&NamedGraph::GStar5)?)
                .into_iter()
                .nth(i)
                .ok_or_else(|| GenError::BadTag(tag.to_string()))?
        }
    };
    Ok(g)
}

/// All subcubic biconnected multigraphs, up to isomorphism, that contract to
/// `h` at a triangle without doubled edges. Built by replacing each vertex
/// of `h` with a triangle and handing its edges to distinct triangle corners.
pub fn triangle_preimages(h: &MultiGraph) -> Vec<MultiGraph> {
    let mut found: Vec<MultiGraph> = Vec::new();
    for x in h.vertices() {
        let inc = h.incident(x);
        if inc.len() > 3 {
            continue;
        }
        for assignment in injections(inc.len(), 3) {
            let n = h.vertex_count() + 2;
            // x keeps its index as corner 0; corners 1 and 2 are new.
            let corner = |c: usize| if c == 0 { x.0 } else { h.vertex_count() + c - 1 };
            let mut edges = Vec::with_capacity(h.edge_count() + 3);
            for e in h.edges() {
                let (u, v) = h.endpoints(e);
                let map = |w: VertexId| {
                    if w == x {
                        let pos = inc.iter().position(|&f| f == e).unwrap();
                        corner(assignment[pos])
                    } else {
                        w.0
                    }
                };
                edges.push((map(u), map(v)));
            }
            edges.extend([(corner(0), corner(1)), (corner(1), corner(2)), (corner(0), corner(2))]);
            let g = match MultiGraph::multi(n, &edges) {
                Ok(g) => g,
                Err(_) => continue,
            };
            if g.max_degree() > 3 || !g.is_biconnected() {
                continue;
            }
            let t = [VertexId(corner(0)), VertexId(corner(1)), VertexId(corner(2))];
            let back = match contract_triangle(&g, t) {
                Ok(c) => c.graph,
                Err(_) => continue,
            };
            debug_assert!(are_isomorphic(&back, h));
            let g = MultiGraph::new(n, &edges, !g.has_parallel_edges()).unwrap();
            if !found.iter().any(|f| are_isomorphic(f, &g)) {
                found.push(g);
            }
        }
    }
    found
}

/// Every injective map from `0..k` into `0..n`, as vectors of images.
fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(k, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, n, &mut Vec::new(), &mut out);
    out
}

/// A connected simple graph with maximum degree at most `delta`.
///
/// `density` is the target edge count as a fraction of the most edges a
/// `delta`-bounded simple graph on `n` vertices can have. A random spanning
/// tree is grown first; extra edges are then drawn uniformly from the pairs
/// that still fit until the target is reached or nothing fits.
pub fn gen_random_bounded_degree(
    n: usize,
    delta: usize,
    density: Ratio<i64>,
    seed: u64,
) -> Result<MultiGraph, GenError> {
    gen_random(n, delta, density, seed, false)
}

/// As [`gen_random_bounded_degree`], but extra edges may run parallel to
/// existing ones.
pub fn gen_random_bounded_degree_multi(
    n: usize,
    delta: usize,
    density: Ratio<i64>,
    seed: u64,
) -> Result<MultiGraph, GenError> {
    gen_random(n, delta, density, seed, true)
}

fn gen_random(
    n: usize,
    delta: usize,
    density: Ratio<i64>,
    seed: u64,
    multi: bool,
) -> Result<MultiGraph, GenError> {
    let unsat = |why: &str| Err(GenError::UnsatisfiableParameters(why.to_string()));
    if n < 2 {
        return unsat("need at least two vertices");
    }
    if delta == 0 {
        return unsat("maximum degree must be positive");
    }
    if delta == 1 && n > 2 {
        return unsat("a connected graph on more than two vertices needs Δ ≥ 2");
    }
    if density <= Ratio::from_integer(0) || density > Ratio::from_integer(1) {
        return unsat("density must lie in (0, 1]");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = if multi { n * delta / 2 } else { (n * delta / 2).min(n * (n - 1) / 2) };
    let scaled = density * Ratio::from_integer(cap as i64);
    let target = (scaled.ceil().to_integer() as usize).clamp(n - 1, cap);

    let mut deg = vec![0usize; n];
    let mut adj = vec![vec![0usize; n]; n];
    let mut edges = Vec::with_capacity(target);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for i in 1..n {
        let open: Vec<usize> = order[..i].iter().copied().filter(|&u| deg[u] < delta).collect();
        let u = open[rng.gen_range(0..open.len())];
        let v = order[i];
        deg[u] += 1;
        deg[v] += 1;
        adj[u][v] += 1;
        adj[v][u] += 1;
        edges.push((u.min(v), u.max(v)));
    }
    while edges.len() < target {
        let mut candidates = Vec::new();
        for u in 0..n {
            if deg[u] >= delta {
                continue;
            }
            for v in u + 1..n {
                if deg[v] < delta && (multi || adj[u][v] == 0) {
                    candidates.push((u, v));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let (u, v) = candidates[rng.gen_range(0..candidates.len())];
        deg[u] += 1;
        deg[v] += 1;
        adj[u][v] += 1;
        adj[v][u] += 1;
        edges.push((u, v));
    }
    let simple = edges.iter().all(|&(u, v)| adj[u][v] == 1);
    Ok(MultiGraph::new(n, &edges, simple)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{find_triangles, match_small_pattern, Pattern};
    use proptest::prelude::*;

    fn girth(g: &MultiGraph) -> usize {
        let mut best = usize::MAX;
        for s in g.vertices() {
            let mut dist = vec![usize::MAX; g.vertex_count()];
            let mut parent = vec![usize::MAX; g.vertex_count()];
            dist[s.0] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in g.incident(u) {
                    let w = g.other_end(e, u);
                    if dist[w.0] == usize::MAX {
                        dist[w.0] = dist[u.0] + 1;
                        parent[w.0] = e.0;
                        queue.push_back(w);
                    } else if parent[u.0] != e.0 {
                        best = best.min(dist[u.0] + dist[w.0] + 1);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn named_sizes() {
        let cases = [
            (NamedGraph::G3, 3, 4),
            (NamedGraph::B3, 5, 7),
            (NamedGraph::GStar5, 5, 7),
            (NamedGraph::Petersen, 10, 15),
            (NamedGraph::K(5), 5, 10),
            (NamedGraph::K(7), 7, 21),
            (NamedGraph::KMinusE(5), 5, 9),
            (NamedGraph::BDelta(3), 5, 7),
            (NamedGraph::BDelta(5), 7, 17),
            (NamedGraph::BDelta(7), 9, 31),
            (NamedGraph::TwoG3Bridge, 6, 9),
        ];
        for (tag, n, m) in cases {
            let g = gen_named(&tag).unwrap();
            assert_eq!((g.vertex_count(), g.edge_count()), (n, m), "{tag}");
        }
    }

    #[test]
    fn named_patterns() {
        assert!(match_small_pattern(&gen_named(&NamedGraph::BDelta(3)).unwrap(), &Pattern::B3));
        let g5 = gen_named(&NamedGraph::GStar5).unwrap();
        assert_eq!(g5.max_degree(), 3);
        assert_eq!(g5.multiplicity(VertexId(0), VertexId(1)), 2);
        // Its single triangle contracts to G3.
        let tri = find_triangles(&g5);
        assert_eq!(tri.len(), 1);
        let c = contract_triangle(&g5, tri[0]).unwrap();
        assert!(match_small_pattern(&c.graph, &Pattern::G3));
    }

    #[test]
    fn petersen_properties() {
        let p = gen_named(&NamedGraph::Petersen).unwrap();
        assert!(p.vertices().all(|v| p.degree(v) == 3));
        assert_eq!(girth(&p), 5);
    }

    #[test]
    fn b_delta_degrees() {
        for d in [3, 5, 7] {
            let g = gen_named(&NamedGraph::BDelta(d)).unwrap();
            assert_eq!(g.max_degree(), d);
            let l = (d - 1) / 2;
            assert_eq!(g.edge_count(), (d + 1) * d / 2 + l);
        }
        assert_eq!(gen_named(&NamedGraph::BDelta(4)), Err(GenError::EvenDelta(4)));
    }

    #[test]
    fn preimage_counts() {
        for h in [NamedGraph::B3, NamedGraph::GStar5] {
            let pre = triangle_preimages(&gen_named(&h).unwrap());
            assert_eq!(pre.len(), 3, "{h}");
            for g in &pre {
                assert_eq!(g.edge_count(), 10);
                assert!(g.max_degree() <= 3);
            }
        }
    }

    #[test]
    fn tag_round_trip() {
        for tag in [
            NamedGraph::G3,
            NamedGraph::GStar5,
            NamedGraph::Petersen,
            NamedGraph::K(6),
            NamedGraph::KMinusE(5),
            NamedGraph::BDelta(5),
            NamedGraph::TwoG3Bridge,
            NamedGraph::B3TrianglePreimage(2),
        ] {
            assert_eq!(tag.to_string().parse::<NamedGraph>().unwrap(), tag);
        }
        assert!("nope".parse::<NamedGraph>().is_err());
    }

    #[test]
    fn random_small_cases() {
        let g = gen_random_bounded_degree(2, 1, Ratio::from_integer(1), 7).unwrap();
        assert_eq!(g.edge_pairs(), vec![(0, 1)]);
        let g = gen_random_bounded_degree(10, 3, Ratio::from_integer(1), 1).unwrap();
        assert!(g.max_degree() <= 3 && g.is_connected() && g.is_simple());
        assert!(matches!(
            gen_random_bounded_degree(5, 1, Ratio::from_integer(1), 0),
            Err(GenError::UnsatisfiableParameters(_))
        ));
    }

    proptest! {
        #[test]
        fn random_graphs_respect_parameters(
            n in 2usize..30, delta in 2usize..8, num in 1i64..=10, seed in any::<u64>(), multi in any::<bool>()
        ) {
            let density = Ratio::new(num, 10);
            let g = if multi {
                gen_random_bounded_degree_multi(n, delta, density, seed).unwrap()
            } else {
                gen_random_bounded_degree(n, delta, density, seed).unwrap()
            };
            prop_assert!(g.max_degree() <= delta);
            prop_assert!(g.is_connected());
            prop_assert!(multi || !g.has_parallel_edges());
            let again = if multi {
                gen_random_bounded_degree_multi(n, delta, density, seed).unwrap()
            } else {
                gen_random_bounded_degree(n, delta, density, seed).unwrap()
            };
            prop_assert_eq!(g, again);
        }
    }
}
