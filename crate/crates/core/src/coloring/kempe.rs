use super::{Color, ColoringError, PartialColoring};
use crate::graph::{EdgeId, VertexId};

/// A maximal path whose edges alternate between colors `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingPath {
    pub a: Color,
    pub b: Color,
    /// `vertices[0]` is the start; `vertices.len() == edges.len() + 1`.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl AlternatingPath {
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }
}

/// The maximal `(ab, x)`-path. If both colors are free at `x` the path is
/// empty; if neither is, there is no such path.
pub fn alternating_path(
    c: &PartialColoring,
    a: Color,
    b: Color,
    x: VertexId,
) -> Result<AlternatingPath, ColoringError> {
    if a == b {
        return Err(ColoringError::SameColor(a.get()));
    }
    for col in [a, b] {
        if col.0 == 0 || col.get() > c.k() {
            return Err(ColoringError::ColorOutOfRange { color: col.get(), k: c.k() });
        }
    }
    let free = c.free(x);
    let (fa, fb) = (free.contains(a), free.contains(b));
    if !fa && !fb {
        return Err(ColoringError::BothOrNeitherFreeAtStart { a: a.get(), b: b.get(), x: x.0 });
    }
    let mut path = AlternatingPath { a, b, vertices: vec![x], edges: Vec::new() };
    if fa && fb {
        return Ok(path);
    }
    let mut next = if fa { b } else { a };
    let mut v = x;
    // Properness gives at most one edge per color at each vertex, and x
    // carries only one of the two colors, so the walk never revisits x.
    while let Some(e) = c.edge_at(v, next) {
        v = c.other_end(e, v);
        path.edges.push(e);
        path.vertices.push(v);
        next = if next == a { b } else { a };
    }
    Ok(path)
}

/// Exchanges `a` and `b` along the maximal `(ab, x)`-path and returns the
/// path that was swapped.
pub fn swap_alternating_path(
    c: &mut PartialColoring,
    a: Color,
    b: Color,
    x: VertexId,
) -> Result<AlternatingPath, ColoringError> {
    let path = alternating_path(c, a, b, x)?;
    swap_path(c, &path);
    Ok(path)
}

/// Exchanges the two colors of an already computed alternating path.
pub(crate) fn swap_path(c: &mut PartialColoring, path: &AlternatingPath) {
    if path.edges.is_empty() {
        return;
    }
    let changes: Vec<(EdgeId, Option<Color>)> = path
        .edges
        .iter()
        .map(|&e| {
            let old = c.color(e).expect("alternating path edges are colored");
            (e, Some(if old == path.a { path.b } else { path.a }))
        })
        .collect();
    c.apply_batch(&changes).expect("swapping a maximal alternating path keeps the coloring proper");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;
    use crate::graph::MultiGraph;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge_swap() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        let mut c = PartialColoring::new(&g, 3).unwrap();
        c.assign(EdgeId(0), Color(1)).unwrap();
        let p = swap_alternating_path(&mut c, Color(1), Color(2), VertexId(0)).unwrap();
        assert_eq!(p.end(), VertexId(1));
        assert_eq!(c.color(EdgeId(0)), Some(Color(2)));
        assert!(c.free(VertexId(0)).contains(Color(1)));
        assert!(c.free(VertexId(1)).contains(Color(1)));
    }

    #[test]
    fn both_free_is_empty_path() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        let mut c = PartialColoring::new(&g, 3).unwrap();
        c.assign(EdgeId(0), Color(3)).unwrap();
        let before = c.clone();
        let p = swap_alternating_path(&mut c, Color(1), Color(2), VertexId(0)).unwrap();
        assert!(p.is_empty());
        assert_eq!(c, before);
    }

    #[test]
    fn neither_free_is_an_error() {
        let g = MultiGraph::simple(3, &[(0, 1), (0, 2)]).unwrap();
        let mut c = PartialColoring::new(&g, 2).unwrap();
        c.assign(EdgeId(0), Color(1)).unwrap();
        c.assign(EdgeId(1), Color(2)).unwrap();
        assert!(matches!(
            swap_alternating_path(&mut c, Color(1), Color(2), VertexId(0)),
            Err(ColoringError::BothOrNeitherFreeAtStart { .. })
        ));
    }

    #[test]
    fn five_cycle_swap_frees_the_last_edge() {
        // C5 = 0-1-2-3-4-0 with 01,12,23,34 colored 1,2,1,2 and 40 uncolored.
        let g = MultiGraph::simple(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let mut c = PartialColoring::new(&g, 3).unwrap();
        for (e, col) in [(0, 1), (1, 2), (2, 1), (3, 2)] {
            c.assign(EdgeId(e), Color(col)).unwrap();
        }
        let p = swap_alternating_path(&mut c, Color(1), Color(2), VertexId(0)).unwrap();
        assert_eq!(p.edges.len(), 4);
        assert_eq!(p.end(), VertexId(4));
        let flipped: Vec<_> = (0..4).map(|e| c.color(EdgeId(e)).unwrap().0).collect();
        assert_eq!(flipped, vec![2, 1, 2, 1]);
        let shared = c.free(VertexId(0)).intersection(c.free(VertexId(4)));
        c.assign(EdgeId(4), shared.first().unwrap()).unwrap();
        assert_eq!(c.colored_count(), 5);
        assert!(validate_coloring(&g, &c).is_valid());
    }

    fn random_coloring(seed: u64) -> (MultiGraph, PartialColoring) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..10);
        let m = rng.gen_range(1..20);
        let edges: Vec<_> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                (u, v)
            })
            .collect();
        let g = MultiGraph::multi(n, &edges).unwrap();
        let k = rng.gen_range(2..5);
        let mut c = PartialColoring::new(&g, k).unwrap();
        for e in g.edges() {
            let col = Color(rng.gen_range(1..=k as u8));
            let _ = c.assign(e, col);
        }
        (g, c)
    }

    proptest! {
        #[test]
        fn swap_is_an_involution(seed in any::<u64>(), a in 1u8..5, b in 1u8..5, x in 0usize..10) {
            let (g, mut c) = random_coloring(seed);
            prop_assume!(a != b && (a as usize) <= c.k() && (b as usize) <= c.k());
            let x = VertexId(x % g.vertex_count());
            let before = c.clone();
            if let Ok(p) = swap_alternating_path(&mut c, Color(a), Color(b), x) {
                prop_assert!(validate_coloring(&g, &c).is_valid());
                prop_assert_eq!(c.colored_count(), before.colored_count());
                // Free sets change only at the two ends.
                for v in g.vertices() {
                    if v != p.start() && v != p.end() {
                        prop_assert_eq!(c.free(v), before.free(v));
                    }
                }
                swap_alternating_path(&mut c, Color(a), Color(b), x).unwrap();
                prop_assert_eq!(&c, &before);
            }
        }
    }
}
