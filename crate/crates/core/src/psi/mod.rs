//! Local search maximizing the lexicographic potential Ψ over partial
//! colorings with palette Δ.
//!
//! Each improvement move is a constructive recoloring that either colors one
//! more edge or reshapes the free components. Every candidate is built on a
//! copy of the coloring and committed only when its potential is strictly
//! larger, so the loop terminates and never accepts a bad move even when a
//! detector fires on a configuration it was not designed for.

mod clique;
mod dense;
mod moves;

pub use clique::clique_color;
pub use dense::extend_exact;
pub use moves::vizing_augment;

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{free_components, ColoringError, PartialColoring};
use crate::graph::{EdgeId, MultiGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsiError {
    #[error("palette {palette} is smaller than the maximum degree {delta}")]
    PaletteMismatch { palette: usize, delta: usize },
    #[error("no improvement bound for Δ = {0}; supported values are 3..=7")]
    UnsupportedDelta(usize),
    #[error("iteration cap {0} exceeded")]
    IterationCapExceeded(u64),
    #[error("clique coloring needs n = k + 1 with k ≥ 1, got n = {n}, k = {k}")]
    BadDimensions { n: usize, k: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// `(c, n_⌊Δ/2⌋, ..., n_1, cycles, Δ|V| - Σ |free(Q)|)`, compared
/// lexicographically; larger is better.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Potential {
    pub colored: usize,
    /// `profile[j]` counts free components with `⌊Δ/2⌋ - j` edges.
    pub profile: Vec<usize>,
    pub cycles: usize,
    pub free_deficit: usize,
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.colored)?;
        for n in &self.profile {
            write!(f, ", {n}")?;
        }
        write!(f, "; {}, {})", self.cycles, self.free_deficit)
    }
}

/// Ψ for a coloring whose palette `k` is at least `Δ(g)`. The palette plays
/// the role of Δ in the profile length and in the deficit term.
pub fn potential(g: &MultiGraph, c: &PartialColoring) -> Result<Potential, PsiError> {
    if c.k() < g.max_degree() {
        return Err(PsiError::PaletteMismatch { palette: c.k(), delta: g.max_degree() });
    }
    Ok(potential_unchecked(c))
}

pub(crate) fn potential_unchecked(c: &PartialColoring) -> Potential {
    let k = c.k();
    let half = k / 2;
    let idx = free_components(c);
    let mut profile = vec![0; half];
    let mut cycles = 0;
    let mut free_total = 0;
    for (_, q) in idx.nontrivial() {
        let size = q.edges.len();
        if size <= half {
            profile[half - size] += 1;
        }
        cycles += q.cycles;
        free_total += q.free_union.len();
    }
    Potential {
        colored: c.colored_count(),
        profile,
        cycles,
        free_deficit: (k * c.vertex_count()).saturating_sub(free_total),
    }
}

/// The improvement moves, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    /// Fan rotation and alternating-path augmentation of one uncolored edge.
    M0,
    /// Two vertices of one free component share a free color.
    M1,
    /// A free component sees another with which it shares a free color.
    M2,
    /// Stable fans of two free components share an end.
    M3,
    /// Stable fans of one tree component share an end.
    M4,
    /// Single rotation of a stable fan.
    M5,
    /// A component with every color free touches another component.
    M6,
    /// Exact recoloring around a dense (Δ+1)-set or a 6-clique.
    M7,
}

impl MoveKind {
    pub const ALL: [MoveKind; 8] =
        [MoveKind::M0, MoveKind::M1, MoveKind::M2, MoveKind::M3, MoveKind::M4, MoveKind::M5, MoveKind::M6, MoveKind::M7];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An accepted improvement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    /// Edges whose color changed.
    pub edges: Vec<EdgeId>,
    pub before: Potential,
    pub after: Potential,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {}", self.kind, self.before, self.after)
    }
}

fn changed_edges(a: &PartialColoring, b: &PartialColoring) -> Vec<EdgeId> {
    (0..a.edge_count()).map(EdgeId).filter(|&e| a.color(e) != b.color(e)).collect()
}

/// Finds the first move, in catalog order, whose result has a strictly
/// larger potential.
pub fn improve_once(g: &MultiGraph, c: &PartialColoring) -> Result<Option<(Move, PartialColoring)>, PsiError> {
    let before = potential(g, c)?;
    let mut search = moves::MoveSearch::new(g, c, before.clone());
    for kind in MoveKind::ALL {
        if let Some(next) = search.try_kind(kind) {
            let after = potential_unchecked(&next);
            debug_assert!(after > before);
            let mv = Move { kind, edges: changed_edges(c, &next), before, after };
            return Ok(Some((mv, next)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default)]
pub struct PsiOptions {
    /// Palette; defaults to `Δ(g)` (at least 1).
    pub palette: Option<usize>,
    /// Overrides the default iteration cap.
    pub iteration_cap: Option<u64>,
    /// Record every accepted move.
    pub trace: bool,
}

#[derive(Clone, Debug)]
pub struct PsiRun {
    pub coloring: PartialColoring,
    pub potential: Potential,
    pub iterations: u64,
    /// Accepted moves per kind, indexed like [`MoveKind::ALL`].
    pub move_counts: [u64; 8],
    pub trace: Vec<Move>,
}

/// `10 |E| (|E| + |V|)^⌊Δ/2⌋`, saturating.
pub fn default_iteration_cap(g: &MultiGraph, palette: usize) -> u64 {
    let base = (g.edge_count() + g.vertex_count()) as u64;
    let mut cap = 10u64.saturating_mul(g.edge_count() as u64);
    for _ in 0..palette / 2 {
        cap = cap.saturating_mul(base);
    }
    cap.max(1)
}

/// Runs [`improve_once`] from the empty coloring until no move applies.
pub fn maximize_psi(g: &MultiGraph) -> Result<PartialColoring, PsiError> {
    Ok(maximize_psi_with(g, &PsiOptions::default())?.coloring)
}

pub fn maximize_psi_with(g: &MultiGraph, opts: &PsiOptions) -> Result<PsiRun, PsiError> {
    let palette = opts.palette.unwrap_or(g.max_degree()).max(1);
    let start = PartialColoring::new(g, palette)?;
    improve_from(g, start, opts)
}

/// Continues the local search from an existing coloring.
pub fn improve_from(g: &MultiGraph, start: PartialColoring, opts: &PsiOptions) -> Result<PsiRun, PsiError> {
    let cap = opts.iteration_cap.unwrap_or_else(|| default_iteration_cap(g, start.k()));
    let mut c = start;
    potential(g, &c)?;
    let mut iterations = 0u64;
    let mut move_counts = [0u64; 8];
    let mut trace = Vec::new();
    while let Some((mv, next)) = improve_once(g, &c)? {
        iterations += 1;
        if iterations > cap {
            return Err(PsiError::IterationCapExceeded(cap));
        }
        move_counts[mv.kind as usize] += 1;
        if opts.trace {
            trace.push(mv);
        }
        c = next;
    }
    let potential = potential_unchecked(&c);
    Ok(PsiRun { coloring: c, potential, iterations, move_counts, trace })
}

/// The colored fraction the local search guarantees for connected simple
/// graphs of maximum degree Δ. With `exception` set (the graph is the one
/// excluded clique for Δ ∈ {4, 6}, or G3 for Δ = 3) the fallback Δ/(Δ+1)
/// is returned; Δ ∈ {5, 7} have no exception.
pub fn guaranteed_fraction(delta: usize, exception: bool) -> Result<Ratio<i64>, PsiError> {
    let r = |a, b| Ok(Ratio::new(a, b));
    match (delta, exception) {
        (3 | 4 | 6, true) => r(delta as i64, delta as i64 + 1),
        (3, false) => r(13, 15),
        (4, false) => r(5, 6),
        (5, _) => r(23, 27),
        (6, false) => r(19, 22),
        (7, _) => r(22, 25),
        _ => Err(PsiError::UnsupportedDelta(delta)),
    }
}

/// `⌈fraction · m⌉`.
pub fn required_edges(fraction: Ratio<i64>, m: usize) -> usize {
    (fraction * Ratio::from_integer(m as i64)).ceil().to_integer() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{validate_coloring, Color};
    use crate::gen::{gen_named, NamedGraph};
    use crate::oracle::c_k;

    #[test]
    fn single_edge_potential() {
        let g = MultiGraph::simple(2, &[(0, 1)]).unwrap();
        for k in 2..=3 {
            let c = PartialColoring::new(&g, k).unwrap();
            let p = potential(&g, &c).unwrap();
            assert_eq!(p.colored, 0);
            assert_eq!(*p.profile.last().unwrap(), 1);
        }
        let c = PartialColoring::new(&g, 1).unwrap();
        let p = potential(&g, &c).unwrap();
        assert_eq!(p.profile, Vec::<usize>::new());
    }

    #[test]
    fn fully_colored_potential() {
        let g = MultiGraph::simple(3, &[(0, 1), (1, 2)]).unwrap();
        let mut c = PartialColoring::new(&g, 2).unwrap();
        c.assign(EdgeId(0), Color(1)).unwrap();
        c.assign(EdgeId(1), Color(2)).unwrap();
        let p = potential(&g, &c).unwrap();
        assert_eq!(p, Potential { colored: 2, profile: vec![0], cycles: 0, free_deficit: 6 });
    }

    #[test]
    fn k4_empty_potential() {
        let g = gen_named(&NamedGraph::K(4)).unwrap();
        let c = PartialColoring::new(&g, 3).unwrap();
        let p = potential(&g, &c).unwrap();
        assert_eq!(p.colored, 0);
        assert_eq!(p.profile, vec![0]);
        assert_eq!(p.cycles, 3);
    }

    #[test]
    fn palette_too_small() {
        let g = gen_named(&NamedGraph::K(4)).unwrap();
        let c = PartialColoring::new(&g, 2).unwrap();
        assert_eq!(potential(&g, &c), Err(PsiError::PaletteMismatch { palette: 2, delta: 3 }));
    }

    #[test]
    fn fractions() {
        assert_eq!(guaranteed_fraction(4, false).unwrap(), Ratio::new(5, 6));
        assert_eq!(guaranteed_fraction(6, false).unwrap(), Ratio::new(19, 22));
        assert_eq!(guaranteed_fraction(5, true).unwrap(), Ratio::new(23, 27));
        assert_eq!(guaranteed_fraction(4, true).unwrap(), Ratio::new(4, 5));
        assert_eq!(guaranteed_fraction(8, false), Err(PsiError::UnsupportedDelta(8)));
        assert_eq!(required_edges(Ratio::new(13, 15), 15), 13);
        assert_eq!(required_edges(Ratio::new(5, 6), 7), 6);
    }

    #[test]
    fn named_graphs() {
        for (tag, expect) in [(NamedGraph::K(4), 6), (NamedGraph::K(5), 8), (NamedGraph::Petersen, 13)] {
            let g = gen_named(&tag).unwrap();
            let c = maximize_psi(&g).unwrap();
            assert!(validate_coloring(&g, &c).is_valid());
            assert_eq!(c.colored_count(), expect, "{tag}");
            assert_eq!(c_k(&g, g.max_degree()).unwrap(), expect);
        }
    }

    #[test]
    fn trace_is_strictly_increasing() {
        let g = gen_named(&NamedGraph::K(7)).unwrap();
        let run = maximize_psi_with(&g, &PsiOptions { trace: true, ..Default::default() }).unwrap();
        assert_eq!(run.coloring.colored_count(), 18);
        for mv in &run.trace {
            assert!(mv.after > mv.before);
        }
        assert_eq!(run.trace.len() as u64, run.iterations);
    }
}
