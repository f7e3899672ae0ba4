//! Maximum k-edge-colorable subgraph solvers.

pub mod baseline;
pub mod coloring;
pub mod gen;
pub mod meta;
pub mod graph;
pub mod oracle;
pub mod factor;
pub mod format;
pub mod psi;
pub mod subcubic;

pub use graph::{EdgeId, MultiGraph, VertexId};
