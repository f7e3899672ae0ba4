//! Partial edge colorings and the recoloring primitives built on them.

mod fan;
mod free;
mod kempe;

pub use fan::{build_maximal_fan, build_maximal_fan_at, is_stable_fan, rotate_fan, Fan};
pub use free::{free_components, FreeComponent, FreeComponentIndex};
pub use kempe::{alternating_path, swap_alternating_path, AlternatingPath};

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, VertexId};

/// Largest supported palette.
pub const MAX_COLORS: usize = 32;

/// A color in `1..=k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(pub u8);

impl Color {
    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn bit(self) -> u32 {
        1 << (self.0 - 1)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of colors as a bit mask (bit `c-1` for color `c`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ColorSet(pub u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn full(k: usize) -> Self {
        if k >= 32 {
            ColorSet(u32::MAX)
        } else {
            ColorSet((1u32 << k) - 1)
        }
    }

    #[inline]
    pub fn contains(self, c: Color) -> bool {
        self.0 & c.bit() != 0
    }

    #[inline]
    pub fn insert(&mut self, c: Color) {
        self.0 |= c.bit();
    }

    #[inline]
    pub fn remove(&mut self, c: Color) {
        self.0 &= !c.bit();
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The smallest color in the set.
    #[inline]
    pub fn first(self) -> Option<Color> {
        (self.0 != 0).then(|| Color(self.0.trailing_zeros() as u8 + 1))
    }

    #[inline]
    pub fn union(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & !o.0)
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let t = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Color(t as u8 + 1))
        })
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("palette size {0} is outside 1..={MAX_COLORS}")]
    BadPalette(usize),
    #[error("color {color} is outside the palette 1..={k}")]
    ColorOutOfRange { color: usize, k: usize },
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} is already colored")]
    EdgeAlreadyColored(usize),
    #[error("edge {0} is not uncolored")]
    EdgeNotUncolored(usize),
    #[error("color {color} is already used at vertex {vertex} (edge {edge})")]
    ColorConflict { edge: usize, color: usize, vertex: usize },
    #[error("alternating path needs two distinct colors, got {0} twice")]
    SameColor(usize),
    #[error("neither color {a} nor {b} is free at vertex {x}")]
    BothOrNeitherFreeAtStart { a: usize, b: usize, x: usize },
    #[error("the fan was built for an older version of the coloring")]
    StaleFan,
    #[error("fan index {index} out of range for a fan of length {len}")]
    FanIndexOutOfRange { index: usize, len: usize },
    #[error("coloring line {line}: {message}")]
    Parse { line: usize, message: String },
}

static NEXT_VERSION: AtomicU64 = AtomicU64::new(1);

fn fresh_version() -> u64 {
    NEXT_VERSION.fetch_add(1, Ordering::Relaxed)
}

const NO_EDGE: usize = usize::MAX;

/// A proper partial k-edge-coloring of a fixed graph.
///
/// Keeps per-vertex used-color masks and a color -> edge index so that
/// alternating paths can be walked in constant time per step. Every mutation
/// takes a fresh version number; fans remember the version they were built
/// against.
#[derive(Clone, Debug)]
pub struct PartialColoring {
    k: usize,
    colors: Vec<u8>,
    ends: Vec<(VertexId, VertexId)>,
    used: Vec<ColorSet>,
    at: Vec<usize>,
    colored: usize,
    version: u64,
}

impl PartialEq for PartialColoring {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.colors == other.colors && self.ends == other.ends
    }
}

impl Eq for PartialColoring {}

impl PartialColoring {
    /// The empty coloring of `g` with palette `1..=k`.
    pub fn new(g: &MultiGraph, k: usize) -> Result<Self, ColoringError> {
        if k == 0 || k > MAX_COLORS {
            return Err(ColoringError::BadPalette(k));
        }
        let n = g.vertex_count();
        Ok(Self {
            k,
            colors: vec![0; g.edge_count()],
            ends: g.edges().map(|e| g.endpoints(e)).collect(),
            used: vec![ColorSet::EMPTY; n],
            at: vec![NO_EDGE; n * k],
            colored: 0,
            version: fresh_version(),
        })
    }

    /// Builds a coloring from per-edge colors (`None` = uncolored).
    pub fn from_assignment(
        g: &MultiGraph,
        k: usize,
        assignment: &[Option<Color>],
    ) -> Result<Self, ColoringError> {
        let mut c = Self::new(g, k)?;
        if assignment.len() != g.edge_count() {
            return Err(ColoringError::EdgeOutOfRange(assignment.len()));
        }
        for (i, col) in assignment.iter().enumerate() {
            if let Some(col) = col {
                c.assign(EdgeId(i), *col)?;
            }
        }
        Ok(c)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn palette(&self) -> ColorSet {
        ColorSet::full(self.k)
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.used.len()
    }

    #[inline]
    pub fn version(&self) -> u64 {
        self.version
    }

    #[inline]
    pub fn colored_count(&self) -> usize {
        self.colored
    }

    #[inline]
    pub fn uncolored_count(&self) -> usize {
        self.colors.len() - self.colored
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e.0]
    }

    #[inline]
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.ends[e.0];
        if a == v {
            b
        } else {
            a
        }
    }

    #[inline]
    pub fn color(&self, e: EdgeId) -> Option<Color> {
        match self.colors[e.0] {
            0 => None,
            c => Some(Color(c)),
        }
    }

    #[inline]
    pub fn is_colored(&self, e: EdgeId) -> bool {
        self.colors[e.0] != 0
    }

    pub fn assignment(&self) -> Vec<Option<Color>> {
        (0..self.colors.len()).map(|i| self.color(EdgeId(i))).collect()
    }

    pub fn uncolored_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors.iter().enumerate().filter(|(_, &c)| c == 0).map(|(i, _)| EdgeId(i))
    }

    pub fn colored_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| EdgeId(i))
    }

    #[inline]
    pub fn used(&self, v: VertexId) -> ColorSet {
        self.used[v.0]
    }

    /// Colors not used by any edge at `v`.
    #[inline]
    pub fn free(&self, v: VertexId) -> ColorSet {
        self.palette().difference(self.used[v.0])
    }

    /// The edge at `v` colored `c`, if any.
    #[inline]
    pub fn edge_at(&self, v: VertexId, c: Color) -> Option<EdgeId> {
        match self.at[v.0 * self.k + c.get() - 1] {
            NO_EDGE => None,
            e => Some(EdgeId(e)),
        }
    }

    fn check_color(&self, c: Color) -> Result<(), ColoringError> {
        if c.0 == 0 || c.get() > self.k {
            Err(ColoringError::ColorOutOfRange { color: c.get(), k: self.k })
        } else {
            Ok(())
        }
    }

    /// Colors an uncolored edge, keeping the coloring proper.
    pub fn assign(&mut self, e: EdgeId, c: Color) -> Result<(), ColoringError> {
        if e.0 >= self.colors.len() {
            return Err(ColoringError::EdgeOutOfRange(e.0));
        }
        self.check_color(c)?;
        if self.colors[e.0] != 0 {
            return Err(ColoringError::EdgeAlreadyColored(e.0));
        }
        let (u, v) = self.ends[e.0];
        for w in [u, v] {
            if self.used[w.0].contains(c) {
                return Err(ColoringError::ColorConflict { edge: e.0, color: c.get(), vertex: w.0 });
            }
        }
        self.colors[e.0] = c.0;
        for w in [u, v] {
            self.used[w.0].insert(c);
            self.at[w.0 * self.k + c.get() - 1] = e.0;
        }
        self.colored += 1;
        self.version = fresh_version();
        Ok(())
    }

    /// Uncolors `e`, returning its previous color.
    pub fn unassign(&mut self, e: EdgeId) -> Option<Color> {
        let c = self.color(e)?;
        let (u, v) = self.ends[e.0];
        for w in [u, v] {
            self.used[w.0].remove(c);
            self.at[w.0 * self.k + c.get() - 1] = NO_EDGE;
        }
        self.colors[e.0] = 0;
        self.colored -= 1;
        self.version = fresh_version();
        Some(c)
    }

    /// Changes the color of `e` (colored or not) to `c`. On failure the
    /// coloring is left unchanged.
    pub fn recolor(&mut self, e: EdgeId, c: Color) -> Result<(), ColoringError> {
        let old = self.unassign(e);
        if let Err(err) = self.assign(e, c) {
            if let Some(o) = old {
                self.assign(e, o).expect("restoring a previous color is always proper");
            }
            return Err(err);
        }
        Ok(())
    }

    /// Applies a batch of `(edge, new color)` changes atomically: all edges
    /// are uncolored first, then recolored. Rolls back if the result would
    /// not be proper.
    pub fn apply_batch(&mut self, changes: &[(EdgeId, Option<Color>)]) -> Result<(), ColoringError> {
        let before: Vec<(EdgeId, Option<Color>)> = changes.iter().map(|&(e, _)| (e, self.color(e))).collect();
        for &(e, _) in changes {
            self.unassign(e);
        }
        for (i, &(e, c)) in changes.iter().enumerate() {
            if let Some(c) = c {
                if let Err(err) = self.assign(e, c) {
                    for &(e2, _) in &changes[..i] {
                        self.unassign(e2);
                    }
                    for &(e2, old) in &before {
                        if let Some(o) = old {
                            self.assign(e2, o).expect("restoring a proper coloring");
                        }
                    }
                    return Err(err);
                }
            }
        }
        Ok(())
    }

    /// One line per edge, `<edge-index> <color|0>`.
    pub fn to_lines(&self) -> String {
        let mut s = String::with_capacity(self.colors.len() * 6);
        for (i, &c) in self.colors.iter().enumerate() {
            s.push_str(&format!("{i} {c}\n"));
        }
        s
    }

    /// Parses the format written by [`PartialColoring::to_lines`]. Blank
    /// lines and `#` comments are ignored; edges not listed stay uncolored.
    pub fn from_lines(g: &MultiGraph, k: usize, text: &str) -> Result<Self, ColoringError> {
        let mut c = Self::new(g, k)?;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |m: &str| ColoringError::Parse { line: no + 1, message: m.to_string() };
            let mut parts = line.split_whitespace();
            let e: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err("expected an edge index"))?;
            let col: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err("expected a color"))?;
            if parts.next().is_some() {
                return Err(parse_err("trailing tokens"));
            }
            if e >= g.edge_count() {
                return Err(ColoringError::EdgeOutOfRange(e));
            }
            if col > 0 {
                if col > 255 {
                    return Err(ColoringError::ColorOutOfRange { color: col, k });
                }
                c.recolor(EdgeId(e), Color(col as u8))?;
            }
        }
        Ok(c)
    }
}

/// Outcome of [`validate_coloring`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks properness and that every cached structure agrees with the
/// per-edge colors.
pub fn validate_coloring(g: &MultiGraph, c: &PartialColoring) -> ValidationReport {
    let mut problems = Vec::new();
    if c.edge_count() != g.edge_count() || c.vertex_count() != g.vertex_count() {
        problems.push(format!(
            "coloring is for {} vertices / {} edges, graph has {} / {}",
            c.vertex_count(),
            c.edge_count(),
            g.vertex_count(),
            g.edge_count()
        ));
        return ValidationReport { problems };
    }
    let mut colored = 0;
    for e in g.edges() {
        if c.endpoints(e) != g.endpoints(e) {
            problems.push(format!("{e} endpoints differ from the graph"));
        }
        if let Some(col) = c.color(e) {
            colored += 1;
            if col.0 == 0 || col.get() > c.k() {
                problems.push(format!("{e} has color {col} outside 1..={}", c.k()));
            }
        }
    }
    if colored != c.colored_count() {
        problems.push(format!("colored count {} but {} edges carry a color", c.colored_count(), colored));
    }
    for v in g.vertices() {
        let mut seen = ColorSet::EMPTY;
        for &e in g.incident(v) {
            if let Some(col) = c.color(e) {
                if col.get() > c.k() {
                    continue;
                }
                if seen.contains(col) {
                    problems.push(format!("color {col} repeats at {v}"));
                }
                seen.insert(col);
                if c.edge_at(v, col) != Some(e) {
                    problems.push(format!("index at {v} for color {col} does not point to {e}"));
                }
            }
        }
        if seen != c.used(v) {
            problems.push(format!("used set at {v} is {:#b}, edges give {:#b}", c.used(v).0, seen.0));
        }
        for col in c.palette().difference(seen).iter() {
            if c.edge_at(v, col).is_some() {
                problems.push(format!("stale index entry at {v} for color {col}"));
            }
        }
    }
    ValidationReport { problems }
}
