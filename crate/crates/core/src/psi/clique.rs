use super::PsiError;
use crate::coloring::{Color, PartialColoring};
use crate::graph::{MultiGraph, VertexId};

/// Round-robin 1-factorization of `K_n`, `n` even: color of each edge of
/// `K_n` in the order of [`complete_pairs`].
fn round_robin(n: usize) -> Vec<u8> {
    let m = n - 1;
    let pairs = complete_pairs(n);
    let mut colors = vec![0u8; pairs.len()];
    let index = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    for r in 0..m {
        colors[index(r, m)] = r as u8 + 1;
        for i in 1..n / 2 {
            colors[index((r + i) % m, (r + m - i) % m)] = r as u8 + 1;
        }
    }
    colors
}

fn complete_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// A coloring of `K_{k+1}` with `k` colors: a full 1-factorization when
/// `k` is odd, and for even `k` the factorization of `K_{k+2}` with one
/// vertex and one color removed. Either way `k²/2` edges (rounded down for
/// odd `k`, where all edges are colored) are colored and no two vertices
/// share a free color.
pub fn clique_color(n: usize, k: usize) -> Result<(MultiGraph, PartialColoring), PsiError> {
    if k == 0 || n != k + 1 {
        return Err(PsiError::BadDimensions { n, k });
    }
    let g = MultiGraph::simple(n, &complete_pairs(n)).expect("complete graph is simple");
    let mut c = PartialColoring::new(&g, k)?;
    let (big, colors) = if n.is_multiple_of(2) { (n, round_robin(n)) } else { (n + 1, round_robin(n + 1)) };
    for ((u, v), col) in complete_pairs(big).into_iter().zip(colors) {
        if v < n && (col as usize) <= k {
            let e = g.edges_between(VertexId(u), VertexId(v)).next().unwrap();
            c.assign(e, Color(col))?;
        }
    }
    Ok((g, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{validate_coloring, ColorSet};
    use crate::oracle::c_k;

    #[test]
    fn clique_colorings() {
        for k in 1..=7 {
            let (g, c) = clique_color(k + 1, k).unwrap();
            assert!(validate_coloring(&g, &c).is_valid());
            let expect = if k % 2 == 1 { k * (k + 1) / 2 } else { k * k / 2 };
            assert_eq!(c.colored_count(), expect, "k = {k}");
            let mut seen = ColorSet::EMPTY;
            for v in g.vertices() {
                let f = c.free(v);
                assert!(seen.intersection(f).is_empty());
                seen = seen.union(f);
            }
        }
    }

    #[test]
    fn clique_colorings_are_optimal() {
        for k in [2, 3, 4, 6] {
            let (g, c) = clique_color(k + 1, k).unwrap();
            assert_eq!(c.colored_count(), c_k(&g, k).unwrap());
        }
    }

    #[test]
    fn bad_dimensions() {
        assert_eq!(clique_color(5, 3).unwrap_err(), PsiError::BadDimensions { n: 5, k: 3 });
    }
}
