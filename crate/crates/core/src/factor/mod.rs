//! Maximum k-matchings and maximum-weight [f,g]-factors via a degree
//! gadget and weighted matching, plus the repair edge set used by the meta
//! algorithm.

mod blossom;

pub use blossom::max_weight_matching;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("no [f,g]-factor exists")]
    Infeasible,
    #[error("bounds at vertex {vertex}: f = {f} exceeds g = {g}")]
    BadBounds { vertex: usize, f: usize, g: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edge {0} has a negative weight")]
    NegativeWeight(usize),
}

/// Per-vertex lower and upper degree bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl DegreeBounds {
    pub fn uniform(n: usize, f: usize, g: usize) -> Self {
        DegreeBounds { f: vec![f; n], g: vec![g; n] }
    }
}

#[derive(Clone, Debug)]
pub struct FactorInstance {
    pub graph: MultiGraph,
    pub bounds: DegreeBounds,
    pub weights: Vec<Ratio<i64>>,
}

impl FactorInstance {
    pub fn weight_of(&self, edges: &[EdgeId]) -> Ratio<i64> {
        edges.iter().map(|e| self.weights[e.0]).sum()
    }

    /// Whether `edges` respects every degree window.
    pub fn is_factor(&self, edges: &[EdgeId]) -> bool {
        let mut deg = vec![0usize; self.graph.vertex_count()];
        for &e in edges {
            let (u, v) = self.graph.endpoints(e);
            deg[u.0] += 1;
            deg[v.0] += 1;
        }
        deg.iter().enumerate().all(|(v, &d)| self.bounds.f[v] <= d && d <= self.bounds.g[v])
    }
}

/// An edge set of maximum size in which every vertex has degree at most
/// `k`.
pub fn max_k_matching(g: &MultiGraph, k: usize) -> Vec<EdgeId> {
    let inst = FactorInstance {
        graph: g.clone(),
        bounds: DegreeBounds::uniform(g.vertex_count(), 0, k),
        weights: vec![Ratio::from_integer(1); g.edge_count()],
    };
    max_weight_fg_factor(&inst).expect("f = 0 is always feasible")
}

/// A maximum-weight edge set with `f(v) ≤ deg(v) ≤ g(v)` everywhere.
///
/// Each vertex `v` of degree `d` becomes `d` port vertices, one per incident
/// edge, plus `d - g(v)` mandatory and `g(v) - f(v)` optional slack
/// vertices joined to all ports (with `g` clipped to `d`). An edge is taken
/// when its two ports are matched to each other. A bonus on ports and
/// mandatory slacks, larger than the total edge weight, makes the matching
/// cover all of them whenever a factor exists.
pub fn max_weight_fg_factor(inst: &FactorInstance) -> Result<Vec<EdgeId>, FactorError> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let m = g.edge_count();
    for len in [inst.bounds.f.len(), inst.bounds.g.len()] {
        if len != n {
            return Err(FactorError::LengthMismatch { expected: n, got: len });
        }
    }
    if inst.weights.len() != m {
        return Err(FactorError::LengthMismatch { expected: m, got: inst.weights.len() });
    }
    for v in 0..n {
        let (f, gv) = (inst.bounds.f[v], inst.bounds.g[v]);
        if f > gv {
            return Err(FactorError::BadBounds { vertex: v, f, g: gv });
        }
        if f > g.degree(VertexId(v)) {
            return Err(FactorError::Infeasible);
        }
    }
    if let Some(e) = inst.weights.iter().position(|w| *w < Ratio::from_integer(0)) {
        return Err(FactorError::NegativeWeight(e));
    }
    if m == 0 {
        return Ok(Vec::new());
    }

    let denom = inst.weights.iter().fold(1i64, |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<i64> = inst.weights.iter().map(|w| (w * denom).to_integer()).collect();
    let bonus = scaled.iter().sum::<i64>() + 1;

    // Port of edge e at its endpoint u: 2e if u is the smaller endpoint
    // index in the edge list, 2e+1 otherwise.
    let mut next = 2 * m;
    let mut gadget: Vec<(usize, usize, i64)> = Vec::new();
    for (e, &w) in scaled.iter().enumerate().take(m) {
        gadget.push((2 * e, 2 * e + 1, w + 2 * bonus));
    }
    let mut important = vec![true; 2 * m];
    for v in g.vertices() {
        let ports: Vec<usize> = g
            .incident(v)
            .iter()
            .map(|&e| if g.endpoints(e).0 == v { 2 * e.0 } else { 2 * e.0 + 1 })
            .collect();
        let d = ports.len();
        let upper = inst.bounds.g[v.0].min(d);
        let lower = inst.bounds.f[v.0];
        for s in 0..d - lower {
            let mandatory = s < d - upper;
            let slack = next;
            next += 1;
            important.push(mandatory);
            for &p in &ports {
                gadget.push((p, slack, if mandatory { 2 * bonus } else { bonus }));
            }
        }
    }
    let mate = max_weight_matching(next, &gadget, false);
    if (0..next).any(|x| important[x] && mate[x].is_none()) {
        return Err(FactorError::Infeasible);
    }
    Ok((0..m).filter(|&e| mate[2 * e] == Some(2 * e + 1)).map(EdgeId).collect())
}

/// `c̄_k` of a component: edges it must leave uncolored.
pub type Deficit = usize;

/// A repair set `R` for the components `gamma` of the k-matching: every
/// edge of `R` leaves some component of `gamma`, `R` is a k-matching of
/// `g`, the total deficit of the components it touches is maximum, and no
/// edge can be dropped without lowering that total.
///
/// `gamma[i]` lists the vertices of a component and `deficit[i]` its
/// `c̄_k`.
pub fn build_exception_matching_r(
    g: &MultiGraph,
    gamma: &[Vec<VertexId>],
    deficit: &[Deficit],
    k: usize,
) -> Result<Vec<EdgeId>, FactorError> {
    if gamma.len() != deficit.len() {
        return Err(FactorError::LengthMismatch { expected: gamma.len(), got: deficit.len() });
    }
    if gamma.is_empty() {
        return Ok(Vec::new());
    }
    let n = g.vertex_count();
    let mut owner = vec![usize::MAX; n];
    for (i, q) in gamma.iter().enumerate() {
        for &v in q {
            owner[v.0] = i;
        }
    }
    // Host edges leaving a component, then v-u_Q edges, then u_Q-w_Q.
    let leaving: Vec<EdgeId> = g
        .edges()
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            owner[a.0] != owner[b.0]
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = leaving.iter().map(|&e| (g.endpoints(e).0 .0, g.endpoints(e).1 .0)).collect();
    let mut weights = vec![Ratio::from_integer(0); pairs.len()];
    let total = n + 2 * gamma.len();
    let mut f = vec![0; total];
    let mut up = vec![k; total];
    for (i, q) in gamma.iter().enumerate() {
        let (u, w) = (n + 2 * i, n + 2 * i + 1);
        for &v in q {
            pairs.push((v.0, u));
            weights.push(Ratio::from_integer(0));
            f[v.0] = 1;
        }
        pairs.push((u, w));
        weights.push(Ratio::from_integer(deficit[i] as i64));
        up[u] = q.len();
        up[w] = 1;
    }
    let inst = FactorInstance {
        graph: MultiGraph::multi(total, &pairs).expect("gadget has no loops"),
        bounds: DegreeBounds { f, g: up },
        weights,
    };
    let factor = max_weight_fg_factor(&inst)?;
    let mut r: Vec<EdgeId> = factor.into_iter().filter(|e| e.0 < leaving.len()).map(|e| leaving[e.0]).collect();

    let score = |r: &[EdgeId]| repair_score(g, gamma, deficit, r);
    let target = score(&r);
    let mut i = 0;
    while i < r.len() {
        let mut without = r.clone();
        without.remove(i);
        if score(&without) == target {
            r = without;
        } else {
            i += 1;
        }
    }
    r.sort_unstable();
    Ok(r)
}

/// Sum of `deficit` over components touched by `r`.
pub fn repair_score(g: &MultiGraph, gamma: &[Vec<VertexId>], deficit: &[Deficit], r: &[EdgeId]) -> usize {
    let mut owner = vec![usize::MAX; g.vertex_count()];
    for (i, q) in gamma.iter().enumerate() {
        for &v in q {
            owner[v.0] = i;
        }
    }
    let mut touched = vec![false; gamma.len()];
    for &e in r {
        let (a, b) = g.endpoints(e);
        if owner[a.0] != owner[b.0] {
            for x in [a, b] {
                if owner[x.0] != usize::MAX {
                    touched[owner[x.0]] = true;
                }
            }
        }
    }
    touched.iter().zip(deficit).filter(|(t, _)| **t).map(|(_, d)| d).sum()
}
