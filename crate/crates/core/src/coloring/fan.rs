use super::{free_components, Color, ColoringError, PartialColoring};
use crate::graph::{EdgeId, VertexId};

/// A fan `(xy_1, ..., xy_l)` around center `x`.
///
/// `edges[0]` is uncolored and each later edge is colored with a color free
/// at the end of its predecessor. Indices are 0-based: `pred[0] == 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub center: VertexId,
    pub edges: Vec<EdgeId>,
    pub ends: Vec<VertexId>,
    pub pred: Vec<usize>,
    /// `full[i]` iff no color is free at `ends[i]`.
    pub full: Vec<bool>,
    version: u64,
}

impl Fan {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Indices visited when rotating at `i`: `i, pred(i), ..., 0`.
    pub fn chain(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut j = i;
        while j != 0 {
            j = self.pred[j];
            out.push(j);
        }
        out
    }

    /// Recoloring that rotating at `i` performs, as `(edge, new color)`.
    pub fn rotation_changes(&self, c: &PartialColoring, i: usize) -> Vec<(EdgeId, Option<Color>)> {
        let chain = self.chain(i);
        let mut changes = Vec::with_capacity(chain.len());
        changes.push((self.edges[i], None));
        for w in chain.windows(2) {
            changes.push((self.edges[w[1]], c.color(self.edges[w[0]])));
        }
        if i == 0 {
            changes.clear();
        }
        changes
    }

    /// Checks the defining conditions against `c`, in time linear in the
    /// fan length.
    pub fn is_valid_for(&self, c: &PartialColoring) -> bool {
        let l = self.edges.len();
        if l == 0 || self.ends.len() != l || self.pred.len() != l || self.full.len() != l {
            return false;
        }
        if c.is_colored(self.edges[0]) || self.pred[0] != 0 {
            return false;
        }
        for i in 0..l {
            let (a, b) = c.endpoints(self.edges[i]);
            let other = if a == self.center {
                b
            } else if b == self.center {
                a
            } else {
                return false;
            };
            if other != self.ends[i] || self.full[i] != c.free(other).is_empty() {
                return false;
            }
            if i > 0 {
                let p = self.pred[i];
                match c.color(self.edges[i]) {
                    Some(col) if p < i && c.free(self.ends[p]).contains(col) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// The maximal fan at `x` starting from the lowest-index uncolored edge
/// `xy`.
pub fn build_maximal_fan(c: &PartialColoring, x: VertexId, y: VertexId) -> Result<Fan, ColoringError> {
    let e = (0..c.edge_count())
        .map(EdgeId)
        .find(|&e| {
            let (a, b) = c.endpoints(e);
            !c.is_colored(e) && ((a, b) == (x, y) || (a, b) == (y, x))
        })
        .ok_or(ColoringError::EdgeNotUncolored(usize::MAX))?;
    build_maximal_fan_at(c, x, e)
}

/// The maximal fan with center `x` whose first edge is the uncolored edge
/// `e`. Among qualifying colored edges the lowest edge index is added next;
/// its predecessor is the earliest end at which its color is free.
pub fn build_maximal_fan_at(c: &PartialColoring, x: VertexId, e: EdgeId) -> Result<Fan, ColoringError> {
    if c.is_colored(e) {
        return Err(ColoringError::EdgeNotUncolored(e.0));
    }
    let (a, b) = c.endpoints(e);
    if a != x && b != x {
        return Err(ColoringError::EdgeNotUncolored(e.0));
    }
    let y = c.other_end(e, x);
    let mut fan = Fan {
        center: x,
        edges: vec![e],
        ends: vec![y],
        pred: vec![0],
        full: vec![c.free(y).is_empty()],
        version: c.version(),
    };
    // Colored edges at x, by increasing edge index.
    let mut candidates: Vec<(EdgeId, Color)> =
        c.used(x).iter().map(|col| (c.edge_at(x, col).unwrap(), col)).collect();
    candidates.sort_unstable();
    let mut taken = vec![false; candidates.len()];
    let mut reach = c.free(y);
    loop {
        let next = candidates
            .iter()
            .enumerate()
            .find(|&(i, &(_, col))| !taken[i] && reach.contains(col));
        let Some((i, &(f, col))) = next else { break };
        taken[i] = true;
        let p = fan.ends.iter().position(|&z| c.free(z).contains(col)).unwrap();
        let z = c.other_end(f, x);
        fan.edges.push(f);
        fan.ends.push(z);
        fan.pred.push(p);
        fan.full.push(c.free(z).is_empty());
        reach = reach.union(c.free(z));
    }
    Ok(fan)
}

/// Rotates `f` at index `i`: colors shift down the predecessor chain and
/// `edges[i]` becomes uncolored. Index 0 leaves the coloring unchanged.
pub fn rotate_fan(c: &mut PartialColoring, f: &Fan, i: usize) -> Result<(), ColoringError> {
    if f.version != c.version() {
        return Err(ColoringError::StaleFan);
    }
    if i >= f.len() {
        return Err(ColoringError::FanIndexOutOfRange { index: i, len: f.len() });
    }
    let changes = f.rotation_changes(c, i);
    c.apply_batch(&changes)
}

/// A fan is stable when removing its first edge from its free component
/// leaves no edges, or leaves exactly one nontrivial piece and that piece
/// contains the center.
pub fn is_stable_fan(c: &PartialColoring, f: &Fan) -> bool {
    let idx = free_components(c);
    let Some(qi) = idx.of_edge(c, f.edges[0]) else { return false };
    let q = &idx.components[qi];
    let rest: Vec<EdgeId> = q.edges.iter().copied().filter(|&e| e != f.edges[0]).collect();
    if rest.is_empty() {
        return true;
    }
    // Union-find over the remaining edges, local to the component.
    let pos = |v: VertexId| q.vertices.binary_search(&v).unwrap();
    let mut parent: Vec<usize> = (0..q.vertices.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in &rest {
        let (u, v) = c.endpoints(e);
        let (ru, rv) = (find(&mut parent, pos(u)), find(&mut parent, pos(v)));
        parent[ru] = rv;
    }
    let mut roots: Vec<usize> = rest.iter().map(|&e| find(&mut parent, pos(c.endpoints(e).0))).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != 1 {
        return false;
    }
    let x = f.center;
    rest.iter().any(|&e| {
        let (u, v) = c.endpoints(e);
        u == x || v == x
    })
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
    fn degree_one_center() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        let c = PartialColoring::new(&g, 3).unwrap();
        let f = build_maximal_fan(&c, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn star_fan_and_rotation() {
        // Star at x=0 with leaves 1, 2, 3; 0-1 uncolored, 0-2 colored 1.
        let g = MultiGraph::simple(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut c = PartialColoring::new(&g, 3).unwrap();
        c.assign(EdgeId(1), Color(1)).unwrap();
        c.assign(EdgeId(2), Color(2)).unwrap();
        let f = build_maximal_fan(&c, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(f.edges, vec![EdgeId(0), EdgeId(1), EdgeId(2)]);
        assert_eq!(f.pred, vec![0, 0, 0]);
        assert!(f.is_valid_for(&c));

        let before = c.clone();
        rotate_fan(&mut c, &f, 0).unwrap();
        assert_eq!(c, before);

        rotate_fan(&mut c, &f, 1).unwrap();
        assert_eq!(c.color(EdgeId(0)), Some(Color(1)));
        assert_eq!(c.color(EdgeId(1)), None);
        assert_eq!(rotate_fan(&mut c, &f, 2), Err(ColoringError::StaleFan));
    }

    #[test]
    fn colored_start_is_rejected() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        let mut c = PartialColoring::new(&g, 1).unwrap();
        c.assign(EdgeId(0), Color(1)).unwrap();
        assert!(matches!(build_maximal_fan_at(&c, VertexId(0), EdgeId(0)), Err(ColoringError::EdgeNotUncolored(0))));
    }

    #[test]
    fn stability_on_a_path_component() {
        // Free component p-q-r (vertices 0-1-2) with xy_1 = qr.
        let g = MultiGraph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        let c = PartialColoring::new(&g, 2).unwrap();
        let from_q = build_maximal_fan_at(&c, VertexId(1), EdgeId(1)).unwrap();
        assert!(is_stable_fan(&c, &from_q));
        let from_r = build_maximal_fan_at(&c, VertexId(2), EdgeId(1)).unwrap();
        assert!(!is_stable_fan(&c, &from_r));
        let single = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        let c1 = PartialColoring::new(&single, 1).unwrap();
        let f = build_maximal_fan_at(&c1, VertexId(1), EdgeId(0)).unwrap();
        assert!(is_stable_fan(&c1, &f));
    }

    proptest! {
        #[test]
        fn fans_are_valid_and_rotations_proper(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..9);
            let m = rng.gen_range(2..18);
            let edges: Vec<_> = (0..m).map(|_| {
                let u = rng.gen_range(0..n);
                (u, (u + rng.gen_range(1..n)) % n)
            }).collect();
            let g = MultiGraph::multi(n, &edges).unwrap();
            let k = g.max_degree().max(1);
            let mut c = PartialColoring::new(&g, k).unwrap();
            for e in g.edges() {
                let _ = c.assign(e, Color(rng.gen_range(1..=k as u8)));
            }
            let unc: Vec<EdgeId> = c.uncolored_edges().collect();
            prop_assume!(!unc.is_empty());
            let e = unc[rng.gen_range(0..unc.len())];
            let x = if rng.gen_bool(0.5) { g.endpoints(e).0 } else { g.endpoints(e).1 };
            let f = build_maximal_fan_at(&c, x, e).unwrap();
            prop_assert!(f.is_valid_for(&c));
            let i = rng.gen_range(0..f.len());
            let count = c.colored_count();
            rotate_fan(&mut c, &f, i).unwrap();
            prop_assert_eq!(c.colored_count(), count);
            prop_assert!(validate_coloring(&g, &c).is_valid());
            prop_assert!(!c.is_colored(f.edges[i]));
        }
    }
}
