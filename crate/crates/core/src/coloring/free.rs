use super::{ColorSet, PartialColoring};
use crate::graph::{EdgeId, VertexId};

/// A connected component of the graph of free edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComponent {
    /// Sorted.
    pub vertices: Vec<VertexId>,
    /// Sorted.
    pub edges: Vec<EdgeId>,
    /// Union of the free sets of the vertices.
    pub free_union: ColorSet,
    /// Cyclomatic number `|E| - |V| + 1`.
    pub cycles: usize,
}

impl FreeComponent {
    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Components of the graph whose edges are the uncolored edges and whose
/// vertices are those with a free color, together with the endpoints of
/// uncolored edges (which coincide when the palette is at least the maximum
/// degree).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComponentIndex {
    pub components: Vec<FreeComponent>,
    /// Component per vertex; `None` for vertices outside the graph of free
    /// edges.
    pub component_of: Vec<Option<usize>>,
}

impl FreeComponentIndex {
    pub fn nontrivial(&self) -> impl Iterator<Item = (usize, &FreeComponent)> {
        self.components.iter().enumerate().filter(|(_, q)| !q.is_trivial())
    }

    pub fn of_vertex(&self, v: VertexId) -> Option<&FreeComponent> {
        self.component_of[v.0].map(|i| &self.components[i])
    }

    /// Component containing the uncolored edge `e`.
    pub fn of_edge(&self, c: &PartialColoring, e: EdgeId) -> Option<usize> {
        if c.is_colored(e) {
            return None;
        }
        self.component_of[c.endpoints(e).0 .0]
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn free_components(c: &PartialColoring) -> FreeComponentIndex {
    let n = c.vertex_count();
    let mut member = vec![false; n];
    for (v, slot) in member.iter_mut().enumerate() {
        *slot = !c.free(VertexId(v)).is_empty();
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for e in c.uncolored_edges() {
        let (u, v) = c.endpoints(e);
        member[u.0] = true;
        member[v.0] = true;
        let (ru, rv) = (find(&mut parent, u.0), find(&mut parent, v.0));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut component_of = vec![None; n];
    let mut components: Vec<FreeComponent> = Vec::new();
    for v in 0..n {
        if !member[v] {
            continue;
        }
        let r = find(&mut parent, v);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = components.len();
            components.push(FreeComponent {
                vertices: Vec::new(),
                edges: Vec::new(),
                free_union: ColorSet::EMPTY,
                cycles: 0,
            });
        }
        let id = id_of_root[r];
        component_of[v] = Some(id);
        let q = &mut components[id];
        q.vertices.push(VertexId(v));
        q.free_union = q.free_union.union(c.free(VertexId(v)));
    }
    for e in c.uncolored_edges() {
        let id = component_of[c.endpoints(e).0 .0].expect("endpoint of a free edge is a member");
        components[id].edges.push(e);
    }
    for q in &mut components {
        q.cycles = (q.edges.len() + 1).saturating_sub(q.vertices.len());
    }
    FreeComponentIndex { components, component_of }
}
