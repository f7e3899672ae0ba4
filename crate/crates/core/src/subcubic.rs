//! 3-edge-colorable subgraphs of multigraphs with maximum degree 3.
//!
//! Components are split on bridges; each bridgeless piece is biconnected
//! and is solved by contracting triangles until the piece is small, a known
//! exception, or triangle-free. Triangle-free pieces go to the potential
//! local search, with an exact fallback on small instances.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, ColoringError, PartialColoring};
use crate::graph::{
    contract_triangle, decompose, find_triangles, match_small_pattern, EdgeId, MultiGraph, Pattern, Subgraph,
    VertexId,
};
use crate::oracle::{exact_max_ecs_with_cap, OracleError};
use crate::psi::{maximize_psi_with, required_edges, PsiError, PsiOptions};

/// Largest instance handed to the exact solver.
pub const EXACT_EDGE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubcubicError {
    #[error("maximum degree {0} exceeds 3")]
    DegreeTooHigh(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("colored {colored} of {edges} edges, below the required {required}")]
    FractionNotReached { colored: usize, required: usize, edges: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// How a connected subcubic component is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubcubicCase {
    G3,
    B3,
    GStar5,
    /// At most 4 vertices.
    Small,
    HasTriangle,
    TriangleFreeCore,
}

/// Classifies a connected subcubic graph. The three exceptions are matched
/// first, then size, then the presence of a triangle.
pub fn classify(g: &MultiGraph) -> SubcubicCase {
    if match_small_pattern(g, &Pattern::G3) {
        SubcubicCase::G3
    } else if match_small_pattern(g, &Pattern::B3) {
        SubcubicCase::B3
    } else if match_small_pattern(g, &Pattern::GStar5) {
        SubcubicCase::GStar5
    } else if g.vertex_count() <= 4 {
        SubcubicCase::Small
    } else if find_triangles(g).is_empty() {
        SubcubicCase::TriangleFreeCore
    } else {
        SubcubicCase::HasTriangle
    }
}

pub fn thirteen_fifteenths() -> Ratio<i64> {
    Ratio::new(13, 15)
}

pub fn seven_ninths() -> Ratio<i64> {
    Ratio::new(7, 9)
}

/// Whether `g` has a subgraph isomorphic to G3: a doubled edge `uv` and a
/// vertex adjacent to both `u` and `v`.
pub fn contains_g3(g: &MultiGraph) -> bool {
    g.edges().any(|e| {
        let (u, v) = g.endpoints(e);
        g.multiplicity(u, v) >= 2 && g.neighbors(u).any(|w| w != v && g.has_edge(w, v))
    })
}

fn check_subcubic(g: &MultiGraph) -> Result<(), SubcubicError> {
    if g.max_degree() > 3 {
        return Err(SubcubicError::DegreeTooHigh(g.max_degree()));
    }
    Ok(())
}

fn exact(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    Ok(exact_max_ecs_with_cap(g, 3, EXACT_EDGE_LIMIT)?.witness)
}

/// Copies a coloring of `sub.graph` onto the corresponding host edges.
fn lift(sub: &Subgraph, part: &PartialColoring, host: &mut PartialColoring) -> Result<(), ColoringError> {
    for (i, &e) in sub.edge_map.iter().enumerate() {
        if let Some(col) = part.color(EdgeId(i)) {
            host.assign(e, col)?;
        }
    }
    Ok(())
}

/// Applies a color permutation given as `perm[c-1] = new color`.
fn permute(c: &PartialColoring, g: &MultiGraph, perm: &[u8]) -> PartialColoring {
    let assignment: Vec<Option<Color>> = c.assignment().into_iter().map(|x| x.map(|col| Color(perm[col.get() - 1]))).collect();
    PartialColoring::from_assignment(g, c.k(), &assignment).expect("permuting colors keeps a coloring proper")
}

/// Colors at least `⌈7/9 |E(C)|⌉` edges of every component C other than
/// G3 (3 of 4), and at least `⌈13/15 |E(C)|⌉` edges of every G3-free
/// component other than B3 and G5* (6 of 7).
pub fn solve_subcubic(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    check_subcubic(g)?;
    let mut out = PartialColoring::new(g, 3)?;
    let d = decompose(g);
    for comp in &d.components {
        let sub = g.induced_subgraph(comp);
        let part = solve_connected(&sub.graph)?;
        lift(&sub, &part, &mut out)?;
    }
    Ok(out)
}

fn solve_connected(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    if g.edge_count() == 0 {
        return Ok(PartialColoring::new(g, 3)?);
    }
    match classify(g) {
        SubcubicCase::G3 | SubcubicCase::B3 | SubcubicCase::GStar5 | SubcubicCase::Small => return exact(g),
        _ => {}
    }
    let d = decompose(g);
    if d.bridges.is_empty() {
        return biconnected_inner(g);
    }

    // Solve the bridgeless pieces, then add the bridges back outward from
    // the first piece, renaming each new piece's colors so that its bridge
    // gets a color.
    let pieces_graph = {
        let keep: Vec<EdgeId> = g.edges().filter(|&e| !d.is_bridge(e)).collect();
        g.subgraph_on(&g.vertices().collect::<Vec<_>>(), &keep)
    };
    let pd = decompose(&pieces_graph.graph);
    let mut piece_colorings = Vec::with_capacity(pd.components.len());
    for comp in &pd.components {
        let sub = pieces_graph.graph.induced_subgraph(comp);
        let part = solve_connected(&sub.graph)?;
        // Translate straight into host edge ids.
        let mut host_part = PartialColoring::new(g, 3)?;
        for (i, &e) in sub.edge_map.iter().enumerate() {
            if let Some(col) = part.color(EdgeId(i)) {
                host_part.assign(pieces_graph.edge_map[e.0], col)?;
            }
        }
        piece_colorings.push(host_part);
    }

    let mut out = piece_colorings[0].clone();
    let mut attached = vec![false; pd.components.len()];
    attached[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for &v in &pd.components[p] {
            for &e in g.incident(v) {
                if !d.is_bridge(e) || out.is_colored(e) {
                    continue;
                }
                let w = g.other_end(e, v);
                let child = pd.component_of[w.0];
                if attached[child] {
                    continue;
                }
                attached[child] = true;
                let a = out.free(v).first().expect("a bridge end has a free color");
                let b = piece_colorings[child].free(w).first().expect("a bridge end has a free color");
                let mut perm: Vec<u8> = (1..=3).collect();
                perm.swap(a.get() - 1, b.get() - 1);
                let renamed = permute(&piece_colorings[child], g, &perm);
                for f in renamed.colored_edges() {
                    out.assign(f, renamed.color(f).unwrap())?;
                }
                out.assign(e, a)?;
                queue.push_back(child);
            }
        }
    }
    Ok(out)
}

/// At least `⌈13/15 |E|⌉` colored edges on a biconnected subcubic graph
/// other than G3, B3 and G5*.
pub fn solve_biconnected(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    check_subcubic(g)?;
    if !g.is_biconnected() {
        return Err(SubcubicError::PreconditionViolated("graph is not biconnected".into()));
    }
    if let c @ (SubcubicCase::G3 | SubcubicCase::B3 | SubcubicCase::GStar5) = classify(g) {
        return Err(SubcubicError::PreconditionViolated(format!("graph is the exception {c:?}")));
    }
    biconnected_inner(g)
}

fn biconnected_inner(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    if g.vertex_count() <= 4 {
        return exact(g);
    }
    let Some(con) = find_triangles(g).into_iter().find_map(|t| contract_triangle(g, t).ok()) else {
        return triangle_free_core_unchecked(g);
    };
    let h = &con.graph;
    if matches!(classify(h), SubcubicCase::G3 | SubcubicCase::B3 | SubcubicCase::GStar5) {
        return exact(g);
    }
    let inner = biconnected_inner(h)?;
    let mut out = PartialColoring::new(g, 3)?;
    for e in g.edges() {
        if let Some(f) = con.edge_map[e.0] {
            if let Some(col) = inner.color(f) {
                out.assign(e, col)?;
            }
        }
    }
    let [e01, e12, e02] = con.triangle_edges;
    let extended = (1..=3u8)
        .flat_map(|a| (1..=3u8).flat_map(move |b| (1..=3u8).map(move |c| [a, b, c])))
        .find_map(|cols| {
            let mut t = out.clone();
            let ok = [e01, e12, e02].iter().zip(cols).all(|(&e, col)| t.assign(e, Color(col)).is_ok());
            ok.then_some(t)
        });
    let extended = extended.expect("the three triangle edges always extend the contracted coloring");
    Ok(extended)
}

/// At least `⌈13/15 |E|⌉` colored edges on a triangle-free subcubic graph:
/// the potential local search at palette 3, with the exact solver as a
/// fallback when the bound is missed on at most [`EXACT_EDGE_LIMIT`] edges.
pub fn triangle_free_core(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    check_subcubic(g)?;
    if !find_triangles(g).is_empty() {
        return Err(SubcubicError::PreconditionViolated("graph has a triangle".into()));
    }
    triangle_free_core_unchecked(g)
}

fn triangle_free_core_unchecked(g: &MultiGraph) -> Result<PartialColoring, SubcubicError> {
    let run = maximize_psi_with(g, &PsiOptions { palette: Some(3), ..Default::default() })?;
    let required = required_edges(thirteen_fifteenths(), g.edge_count());
    if run.coloring.colored_count() >= required {
        return Ok(run.coloring);
    }
    if g.edge_count() <= EXACT_EDGE_LIMIT {
        return exact(g);
    }
    Err(SubcubicError::FractionNotReached {
        colored: run.coloring.colored_count(),
        required,
        edges: g.edge_count(),
    })
}

/// Vertex sets of the connected components, for callers that report per
/// component.
pub fn components(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    decompose(g).components
}
