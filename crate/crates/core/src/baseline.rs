//! Reference strategy: single-edge augmentation in edge order, no potential.

use crate::coloring::{ColoringError, PartialColoring};
use crate::graph::MultiGraph;
use crate::psi::vizing_augment;

/// Visits the edges once in id order and colors each one that a direct
/// color, fan rotation or single alternating-path exchange can fit into the
/// palette `k`. Edges that cannot be fitted stay uncolored.
pub fn vizing_baseline(g: &MultiGraph, k: usize) -> Result<PartialColoring, ColoringError> {
    let mut c = PartialColoring::new(g, k)?;
    for e in g.edges() {
        if let Some(next) = vizing_augment(&c, e) {
            c = next;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_coloring;
    use crate::gen::{gen_named, NamedGraph};

    #[test]
    fn colors_everything_with_a_spare_color() {
        let g = gen_named(&NamedGraph::Petersen).unwrap();
        let c = vizing_baseline(&g, 4).unwrap();
        assert_eq!(c.colored_count(), 15);
    }

    #[test]
    fn stays_proper_at_palette_delta() {
        for tag in [NamedGraph::Petersen, NamedGraph::K(5), NamedGraph::BDelta(5)] {
            let g = gen_named(&tag).unwrap();
            let c = vizing_baseline(&g, g.max_degree()).unwrap();
            assert!(validate_coloring(&g, &c).is_valid());
            assert!(c.colored_count() * 2 >= g.edge_count());
        }
    }
}
