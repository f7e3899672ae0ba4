//! Approximation for arbitrary graphs on top of a core solver.
//!
//! A maximum k-matching `F` is split into components. Components isomorphic
//! to a member of a k-normal exception family are colored from exact
//! tables, possibly after gluing them to a neighbour through an edge of a
//! repair set `R`; every other component goes to the core solver.

mod run;

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::coloring::{Color, ColoringError, PartialColoring};
use crate::factor::{max_k_matching, FactorError};
use crate::graph::{find_isomorphism, EdgeId, MultiGraph, Pattern, VertexId};
use crate::oracle::{exact_max_ecs, OracleError};
use crate::psi::{maximize_psi_with, PsiError, PsiOptions};
use crate::subcubic::{seven_ninths, solve_subcubic, thirteen_fifteenths, SubcubicError};

pub use run::{run_meta, CoreLog, GammaLog, MetaOutcome, RunLog, Step2Log, Step3Log};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error("pattern {pattern} is not {k}-normal: {reason}")]
    NotKNormal { pattern: String, k: usize, reason: String },
    #[error("the exception family is empty")]
    EmptyFamily,
    #[error("no solver binding for k = {0}")]
    UnsupportedK(usize),
    #[error("core solver colored {colored} of {edges} edges, below the {required} its ratio promises")]
    CoreRatioMiss { colored: usize, required: usize, edges: usize },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("normalization did not settle within {0} swaps")]
    NormalizationStuck(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Subcubic(#[from] SubcubicError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// One exception graph with its exact tables.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub pattern: Pattern,
    pub graph: MultiGraph,
    /// `c_k(A)`.
    pub c_k: usize,
    pub edges: usize,
    pub k_regular: bool,
    /// A maximum k-edge-colorable subgraph of `A` with its coloring.
    pub witness: PartialColoring,
    /// For each edge `e` of `A`, a maximum k-ECS of `A - e` on `A`'s edge
    /// ids, with `e` uncolored.
    pub minus_edge: Vec<PartialColoring>,
}

impl FamilyMember {
    /// `c̄_k(A) = |E(A)| - c_k(A)`.
    pub fn deficit(&self) -> usize {
        self.edges - self.c_k
    }

    /// Tables for `pattern`, after checking the k-normality conditions.
    pub fn register(pattern: Pattern, k: usize) -> Result<Self, MetaError> {
        let graph = pattern.graph();
        let fail = |reason: String| MetaError::NotKNormal { pattern: pattern.to_string(), k, reason };
        let n = graph.vertex_count();
        if graph.max_degree() != k {
            return Err(fail(format!("maximum degree is {}", graph.max_degree())));
        }
        let low = graph.vertices().filter(|&v| graph.degree(v) < k).count();
        if low > 1 {
            return Err(fail(format!("{low} vertices have degree below k")));
        }
        if !graph.is_two_edge_connected() {
            return Err(fail("not 2-edge-connected".into()));
        }
        let exact = exact_max_ecs(&graph, k)?;
        // Every color class is a matching, so no graph on n vertices has a
        // k-ECS larger than k * floor(n / 2). Reaching that bound certifies
        // maximality among all graphs of the same order.
        if exact.optimum != k * (n / 2) {
            return Err(fail(format!(
                "c_k = {} is below the matching bound {}",
                exact.optimum,
                k * (n / 2)
            )));
        }
        let mut minus_edge = Vec::with_capacity(graph.edge_count());
        for e in graph.edges() {
            let rest: Vec<EdgeId> = graph.edges().filter(|&f| f != e).collect();
            let sub = graph.subgraph_on(&graph.vertices().collect::<Vec<_>>(), &rest);
            let r = exact_max_ecs(&sub.graph, k)?;
            if r.optimum != exact.optimum {
                return Err(fail(format!("removing edge {} lowers c_k to {}", e.0, r.optimum)));
            }
            let mut lifted = PartialColoring::new(&graph, k)?;
            for le in r.witness.colored_edges() {
                lifted.assign(sub.edge_map[le.0], r.witness.color(le).unwrap())?;
            }
            minus_edge.push(lifted);
        }
        Ok(FamilyMember {
            pattern,
            k_regular: low == 0,
            c_k: exact.optimum,
            edges: graph.edge_count(),
            witness: exact.witness,
            graph,
            minus_edge,
        })
    }

    /// Copies a table coloring onto `target`, a graph isomorphic to `A`.
    /// With `skip = Some(e)` (an edge of `target`) the coloring of
    /// `A - e'` is used, where `e'` corresponds to `e`, and `e` stays
    /// uncolored. Returns `None` when `target` is not isomorphic to `A`.
    pub fn color_copy(&self, target: &MultiGraph, skip: Option<EdgeId>) -> Option<PartialColoring> {
        let phi = find_isomorphism(&self.graph, target)?;
        let mut inverse = vec![VertexId(0); phi.len()];
        for (a, &b) in phi.iter().enumerate() {
            inverse[b.0] = VertexId(a);
        }
        let source = match skip {
            None => &self.witness,
            Some(e) => {
                let (u, v) = target.endpoints(e);
                let a_edge = self.graph.edges_between(inverse[u.0], inverse[v.0]).next()?;
                &self.minus_edge[a_edge.0]
            }
        };
        let k = source.k();
        let mut used = vec![false; target.edge_count()];
        if let Some(e) = skip {
            used[e.0] = true;
        }
        let mut out = PartialColoring::new(target, k).ok()?;
        for e in source.colored_edges() {
            let (a, b) = self.graph.endpoints(e);
            let t = target.edges_between(phi[a.0], phi[b.0]).find(|t| !used[t.0])?;
            used[t.0] = true;
            out.assign(t, source.color(e).unwrap()).ok()?;
        }
        Some(out)
    }
}

/// A finite k-normal family of exception graphs. May be empty, in which
/// case the meta algorithm reduces to running the core on `F`.
#[derive(Clone, Debug)]
pub struct ExceptionFamily {
    pub k: usize,
    pub members: Vec<FamilyMember>,
}

impl ExceptionFamily {
    pub fn new(k: usize, patterns: &[Pattern]) -> Result<Self, MetaError> {
        let members = patterns.iter().map(|&p| FamilyMember::register(p, k)).collect::<Result<_, _>>()?;
        Ok(ExceptionFamily { k, members })
    }

    pub fn empty(k: usize) -> Self {
        ExceptionFamily { k, members: Vec::new() }
    }

    /// Index of the member isomorphic to `h`.
    pub fn member_of(&self, h: &MultiGraph) -> Option<usize> {
        self.members.iter().position(|m| {
            m.edges == h.edge_count()
                && m.graph.vertex_count() == h.vertex_count()
                && find_isomorphism(&m.graph, h).is_some()
        })
    }
}

impl fmt::Display for ExceptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members.iter().map(|m| m.pattern.to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// `β` (`None` stands for +∞) and `γ` of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyConstants {
    pub beta: Option<Ratio<i64>>,
    pub gamma: Ratio<i64>,
}

pub fn family_constants(fam: &ExceptionFamily) -> Result<FamilyConstants, MetaError> {
    if fam.members.is_empty() {
        return Err(MetaError::EmptyFamily);
    }
    let frac = |c: usize, e: usize| Ratio::new(c as i64, e as i64);
    let mut beta: Option<Ratio<i64>> = None;
    for a in fam.members.iter().filter(|a| !a.k_regular) {
        for b in &fam.members {
            let r = frac(a.c_k + b.c_k + 1, a.edges + b.edges + 1);
            beta = Some(beta.map_or(r, |x| x.min(r)));
        }
    }
    let gamma = fam.members.iter().map(|a| frac(a.c_k + 1, a.edges + 1)).min().unwrap();
    Ok(FamilyConstants { beta, gamma })
}

/// `min{α, β, γ}`, or `α` alone for an empty family.
pub fn guaranteed_ratio(fam: &ExceptionFamily, alpha: Ratio<i64>) -> Result<Ratio<i64>, MetaError> {
    if fam.members.is_empty() {
        return Ok(alpha);
    }
    let fc = family_constants(fam)?;
    let mut r = alpha.min(fc.gamma);
    if let Some(b) = fc.beta {
        r = r.min(b);
    }
    Ok(r)
}

/// A solver that colors at least `alpha` of the edges of any connected
/// k-matching outside the family it is paired with.
pub trait CoreSolver {
    fn name(&self) -> &'static str;
    fn k(&self) -> usize;
    fn alpha(&self) -> Ratio<i64>;
    fn solve(&self, h: &MultiGraph) -> Result<PartialColoring, MetaError>;
}

/// The subcubic pipeline, for k = 3.
#[derive(Clone, Copy, Debug)]
pub struct SubcubicCore {
    /// Inputs are simple: the ratio is 13/15 instead of 7/9.
    pub simple: bool,
}

impl CoreSolver for SubcubicCore {
    fn name(&self) -> &'static str {
        "subcubic"
    }

    fn k(&self) -> usize {
        3
    }

    fn alpha(&self) -> Ratio<i64> {
        if self.simple {
            thirteen_fifteenths()
        } else {
            seven_ninths()
        }
    }

    fn solve(&self, h: &MultiGraph) -> Result<PartialColoring, MetaError> {
        Ok(solve_subcubic(h)?)
    }
}

/// Potential maximization with palette `k`.
#[derive(Clone, Copy, Debug)]
pub struct PsiCore {
    pub k: usize,
}

impl CoreSolver for PsiCore {
    fn name(&self) -> &'static str {
        "psi"
    }

    fn k(&self) -> usize {
        self.k
    }

    fn alpha(&self) -> Ratio<i64> {
        crate::psi::guaranteed_fraction(self.k, false).expect("bindings use supported k")
    }

    fn solve(&self, h: &MultiGraph) -> Result<PartialColoring, MetaError> {
        let opts = PsiOptions { palette: Some(self.k), ..PsiOptions::default() };
        Ok(maximize_psi_with(h, &opts)?.coloring)
    }
}

/// The family and core used for palette `k`: `{G3}` with the subcubic core
/// for k = 3 on multigraphs, `{B3}` for simple graphs, `{K5}` and `{K7}`
/// with the potential core for k = 4 and 6, and an empty family for k = 5
/// and 7.
pub fn standard_binding(k: usize, simple: bool) -> Result<(ExceptionFamily, Box<dyn CoreSolver>), MetaError> {
    let (patterns, core): (Vec<Pattern>, Box<dyn CoreSolver>) = match k {
        3 if simple => (vec![Pattern::B3], Box::new(SubcubicCore { simple: true })),
        3 => (vec![Pattern::G3], Box::new(SubcubicCore { simple: false })),
        4 => (vec![Pattern::K(5)], Box::new(PsiCore { k })),
        6 => (vec![Pattern::K(7)], Box::new(PsiCore { k })),
        5 | 7 => (Vec::new(), Box::new(PsiCore { k })),
        _ => return Err(MetaError::UnsupportedK(k)),
    };
    Ok((ExceptionFamily::new(k, &patterns)?, core))
}

/// A connected component of the k-matching, in host ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Components with at least one edge of the spanning subgraph `edges`,
/// ordered by smallest vertex.
pub fn edge_components(g: &MultiGraph, edges: &[EdgeId]) -> Vec<Component> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in edges {
        let (a, b) = g.endpoints(e);
        let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut comps: Vec<Component> = Vec::new();
    let mut covered = vec![false; n];
    for &e in edges {
        let (a, b) = g.endpoints(e);
        covered[a.0] = true;
        covered[b.0] = true;
    }
    for (v, &cov) in covered.iter().enumerate() {
        if cov {
            let r = find(&mut parent, v);
            if slot[r] == usize::MAX {
                slot[r] = comps.len();
                comps.push(Component { vertices: Vec::new(), edges: Vec::new() });
            }
            comps[slot[r]].vertices.push(VertexId(v));
        }
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    for e in sorted {
        let r = find(&mut parent, g.endpoints(e).0 .0);
        comps[slot[r]].edges.push(e);
    }
    comps
}

/// A component of `F` isomorphic to a family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEntry {
    pub component: Component,
    pub member: usize,
}

/// The components of `f` isomorphic to a family member.
pub fn detect_exceptions(g: &MultiGraph, f: &[EdgeId], fam: &ExceptionFamily) -> Vec<GammaEntry> {
    if fam.members.is_empty() {
        return Vec::new();
    }
    edge_components(g, f)
        .into_iter()
        .filter_map(|c| {
            let sub = g.subgraph_on(&c.vertices, &c.edges);
            fam.member_of(&sub.graph).map(|member| GammaEntry { component: c, member })
        })
        .collect()
}

/// Swaps edges of `f` until no edge `xy` joins a vertex `x` of some `Q` in
/// Γ to a vertex `y` outside `Q` with `deg_F(y) < k`. Each swap replaces
/// the lowest edge of `Q` at `x` by `xy`. Returns the number of swaps.
pub fn normalize_f(g: &MultiGraph, f: &mut Vec<EdgeId>, fam: &ExceptionFamily) -> Result<usize, MetaError> {
    let k = fam.k;
    let limit = g.edge_count() * g.vertex_count() + 1;
    let mut swaps = 0;
    'outer: loop {
        let mut in_f = vec![false; g.edge_count()];
        let mut deg = vec![0usize; g.vertex_count()];
        for &e in f.iter() {
            in_f[e.0] = true;
            let (a, b) = g.endpoints(e);
            deg[a.0] += 1;
            deg[b.0] += 1;
        }
        for entry in detect_exceptions(g, f, fam) {
            let q = &entry.component;
            let mut inside = vec![false; g.vertex_count()];
            for v in &q.vertices {
                inside[v.0] = true;
            }
            for &x in &q.vertices {
                for &e in g.incident(x) {
                    let y = g.other_end(e, x);
                    if inside[y.0] || deg[y.0] >= k {
                        continue;
                    }
                    if swaps == limit {
                        return Err(MetaError::NormalizationStuck(limit));
                    }
                    let out = *q.edges.iter().find(|&&qe| g.endpoints(qe).0 == x || g.endpoints(qe).1 == x).unwrap();
                    f.retain(|&h| h != out);
                    f.push(e);
                    f.sort_unstable();
                    swaps += 1;
                    continue 'outer;
                }
            }
        }
        return Ok(swaps);
    }
}

/// The graph `H_F` whose nodes are the components of `F` (isolated
/// vertices included) and whose edges come from `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarForest {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl StarForest {
    /// Component of each vertex is `node_of[v]`.
    pub fn build(g: &MultiGraph, node_of: &[usize], nodes: usize, r: &[EdgeId]) -> Self {
        let mut edges: Vec<(usize, usize)> = r
            .iter()
            .map(|&e| {
                let (a, b) = g.endpoints(e);
                let (p, q) = (node_of[a.0], node_of[b.0]);
                (p.min(q), p.max(q))
            })
            .collect();
        edges.sort_unstable();
        StarForest { nodes, edges }
    }

    /// Distinct neighbours of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut seen = self.edges.clone();
        seen.dedup();
        let mut d = vec![0; self.nodes];
        for (a, b) in seen {
            if a != b {
                d[a] += 1;
                d[b] += 1;
            }
        }
        d
    }

    /// Every connected component is a star: no loops, no parallel edges,
    /// no cycles, and every edge has an endpoint of degree one.
    pub fn is_star_forest(&self) -> bool {
        let mut seen = self.edges.clone();
        seen.dedup();
        if seen.len() != self.edges.len() || seen.iter().any(|&(a, b)| a == b) {
            return false;
        }
        let d = self.degrees();
        seen.iter().all(|&(a, b)| d[a] == 1 || d[b] == 1)
    }
}

/// Runs the meta algorithm with the standard binding for `k`.
pub fn approximate(g: &MultiGraph, k: usize) -> Result<MetaOutcome, MetaError> {
    let (fam, core) = standard_binding(k, g.is_simple())?;
    run_meta(g, &fam, core.as_ref())
}

/// Free color shared by nobody at `v` in `c`, lowest first.
fn lowest_free(c: &PartialColoring, v: VertexId) -> Option<Color> {
    c.free(v).first()
}

/// The k-matching the run starts from.
fn initial_matching(g: &MultiGraph, k: usize) -> Vec<EdgeId> {
    let mut f = max_k_matching(g, k);
    f.sort_unstable();
    f
}
