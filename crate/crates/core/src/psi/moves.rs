use std::collections::VecDeque;

use super::{dense, potential_unchecked, MoveKind, Potential};
use crate::coloring::{
    alternating_path, build_maximal_fan_at, free_components, is_stable_fan, rotate_fan, swap_alternating_path, Color,
    Fan, FreeComponentIndex, PartialColoring,
};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// Stable fan and end index through which a vertex joins a component.
type FanEnd = Option<(usize, usize)>;

/// Colors the uncolored edge `e`, recoloring other edges if needed, and
/// returns the new coloring. Tries a common free color, then a rotation of
/// the maximal fan at either endpoint, then the same after one alternating
/// path exchange. With a palette of at least `Δ + 1` on a simple graph this
/// always succeeds.
pub fn vizing_augment(c: &PartialColoring, e: EdgeId) -> Option<PartialColoring> {
    if c.is_colored(e) {
        return None;
    }
    let (x, y) = c.endpoints(e);
    let direct = |t: &PartialColoring| fan_augment(t, e, x).or_else(|| fan_augment(t, e, y));
    if let Some(t) = direct(c) {
        return Some(t);
    }
    for center in [x, y] {
        let fan = build_maximal_fan_at(c, center, e).ok()?;
        for alpha in c.free(center).iter() {
            for &z in &fan.ends {
                for beta in c.free(z).iter().filter(|&b| b != alpha) {
                    for start in [z, center] {
                        let mut t = c.clone();
                        if swap_alternating_path(&mut t, alpha, beta, start).is_ok() {
                            if let Some(r) = direct(&t) {
                                return Some(r);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn fan_augment(c: &PartialColoring, e: EdgeId, x: VertexId) -> Option<PartialColoring> {
    let y = c.other_end(e, x);
    if let Some(col) = c.free(x).intersection(c.free(y)).first() {
        let mut t = c.clone();
        t.assign(e, col).ok()?;
        return Some(t);
    }
    let fan = build_maximal_fan_at(c, x, e).ok()?;
    let fx = c.free(x);
    for i in 1..fan.len() {
        if let Some(col) = fx.intersection(c.free(fan.ends[i])).first() {
            let mut t = c.clone();
            rotate_fan(&mut t, &fan, i).ok()?;
            if t.assign(fan.edges[i], col).is_ok() {
                return Some(t);
            }
        }
    }
    None
}

/// Shortest path from `v` to `w` through uncolored edges.
fn free_path(g: &MultiGraph, c: &PartialColoring, v: VertexId, w: VertexId) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
    let n = g.vertex_count();
    let mut via: Vec<Option<EdgeId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[v.0] = true;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        if u == w {
            break;
        }
        for &e in g.incident(u) {
            if c.is_colored(e) {
                continue;
            }
            let z = g.other_end(e, u);
            if !seen[z.0] {
                seen[z.0] = true;
                via[z.0] = Some(e);
                queue.push_back(z);
            }
        }
    }
    if !seen[w.0] {
        return None;
    }
    let (mut verts, mut edges) = (vec![w], Vec::new());
    let mut u = w;
    while u != v {
        let e = via[u.0]?;
        u = g.other_end(e, u);
        edges.push(e);
        verts.push(u);
    }
    verts.reverse();
    edges.reverse();
    Some((verts, edges))
}

/// `v` and `w` lie in one free component and share the free color `a`:
/// walk the shortest free path back from `w`, moving `a` one step closer
/// with each exchange, until an edge of the path can be colored.
fn repair_shared(g: &MultiGraph, c: &PartialColoring, v: VertexId, w: VertexId, a: Color) -> Option<PartialColoring> {
    let (verts, edges) = free_path(g, c, v, w)?;
    let mut t = c.clone();
    let mut d = edges.len();
    loop {
        let (x, w, e) = (verts[d - 1], verts[d], edges[d - 1]);
        if d == 1 || t.free(x).contains(a) {
            t.assign(e, a).ok()?;
            return Some(t);
        }
        let b = t.free(x).first()?;
        if t.free(w).contains(b) {
            t.assign(e, b).ok()?;
            return Some(t);
        }
        let r = swap_alternating_path(&mut t, a, b, w).ok()?;
        if r.end() != x {
            t.assign(e, b).ok()?;
            return Some(t);
        }
        d -= 1;
    }
}

/// First successful repair of a shared free color inside a free component.
fn first_shared_repair(g: &MultiGraph, c: &PartialColoring) -> Option<PartialColoring> {
    let idx = free_components(c);
    for (_, q) in idx.nontrivial() {
        for (i, &v) in q.vertices.iter().enumerate() {
            for &w in &q.vertices[i + 1..] {
                if let Some(a) = c.free(v).intersection(c.free(w)).first() {
                    if let Some(t) = repair_shared(g, c, v, w, a) {
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

/// Sets the given edges, all colored `a` or `b`, to the other color.
fn exchange(t: &mut PartialColoring, edges: &[EdgeId], a: Color, b: Color) -> Option<()> {
    let changes: Vec<_> = edges
        .iter()
        .map(|&e| (e, t.color(e).map(|col| if col == a { b } else { a })))
        .collect();
    t.apply_batch(&changes).ok()
}

/// Applies the rotation of `f` at `i` computed against the current colors
/// of `t`. The fan may have been built on an earlier coloring.
fn rotate_on(t: &mut PartialColoring, f: &Fan, i: usize) -> Option<()> {
    if i == 0 {
        return Some(());
    }
    if t.is_colored(f.edges[0]) {
        return None;
    }
    let changes = f.rotation_changes(t, i);
    t.apply_batch(&changes).ok()
}

struct FanInfo {
    fan: Fan,
    component: usize,
    stable: bool,
}

pub(crate) struct MoveSearch<'a> {
    g: &'a MultiGraph,
    c: &'a PartialColoring,
    before: Potential,
    idx: FreeComponentIndex,
    fans: Option<Vec<FanInfo>>,
}

impl<'a> MoveSearch<'a> {
    pub(crate) fn new(g: &'a MultiGraph, c: &'a PartialColoring, before: Potential) -> Self {
        let idx = free_components(c);
        MoveSearch { g, c, before, idx, fans: None }
    }

    fn better(&self, t: PartialColoring) -> Option<PartialColoring> {
        (potential_unchecked(&t) > self.before).then_some(t)
    }

    pub(crate) fn try_kind(&mut self, kind: MoveKind) -> Option<PartialColoring> {
        match kind {
            MoveKind::M0 => self.m0(),
            MoveKind::M1 => self.m1(),
            MoveKind::M2 => self.m2(),
            MoveKind::M3 => self.double_rotation(false),
            MoveKind::M4 => self.double_rotation(true),
            MoveKind::M5 => self.m5(),
            MoveKind::M6 => self.m6(),
            MoveKind::M7 => self.m7(),
        }
    }

    fn m0(&self) -> Option<PartialColoring> {
        self.c.uncolored_edges().find_map(|e| vizing_augment(self.c, e).and_then(|t| self.better(t)))
    }

    fn m1(&self) -> Option<PartialColoring> {
        let (g, c) = (self.g, self.c);
        if let Some(t) = first_shared_repair(g, c) {
            return self.better(t);
        }
        // Free sets are disjoint inside each component. An exchange from
        // v that misses w makes w's color free at v as well.
        for (_, q) in self.idx.nontrivial() {
            for &v in &q.vertices {
                for &w in &q.vertices {
                    if v == w {
                        continue;
                    }
                    for a in c.free(v).iter() {
                        for b in c.free(w).iter() {
                            let Ok(p) = alternating_path(c, a, b, v) else { continue };
                            if p.end() == w {
                                continue;
                            }
                            let mut t = c.clone();
                            if exchange(&mut t, &p.edges, a, b).is_none() {
                                continue;
                            }
                            if let Some(r) = repair_shared(g, &t, v, w, b).and_then(|r| self.better(r)) {
                                return Some(r);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn m2(&self) -> Option<PartialColoring> {
        let c = self.c;
        for e in c.colored_edges() {
            let a = c.color(e).unwrap();
            let (p, q) = c.endpoints(e);
            for (x, y) in [(p, q), (q, p)] {
                let (Some(i1), Some(i2)) = (self.idx.component_of[x.0], self.idx.component_of[y.0]) else {
                    continue;
                };
                let (q1, q2) = (&self.idx.components[i1], &self.idx.components[i2]);
                if i1 == i2 || q1.is_trivial() || !q1.free_union.contains(a) {
                    continue;
                }
                let common = q1.free_union.intersection(q2.free_union);
                if common.is_empty() {
                    continue;
                }
                let mut staged = Vec::new();
                if q2.free_union.contains(a) {
                    staged.extend(self.seen_with_own_color(e, y, i2));
                }
                for b in common.iter().filter(|&b| b != a) {
                    staged.extend(self.seen_with_common_color(e, x, y, i1, i2, b));
                }
                for t in staged {
                    if let Some(r) = first_shared_repair(self.g, &t).and_then(|r| self.better(r)) {
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    /// `xy` is colored `a`, `a` is free in the component of `y`. Moves `a`
    /// along a free path towards `y` and then shifts `xy`'s color onto the
    /// free edge at `y`, leaving `a` free at `x`.
    fn seen_with_own_color(&self, xy: EdgeId, y: VertexId, qi: usize) -> Option<PartialColoring> {
        let (g, c) = (self.g, self.c);
        let a = c.color(xy)?;
        let z = *self.idx.components[qi].vertices.iter().find(|&&z| c.free(z).contains(a))?;
        let (verts, edges) = free_path(g, c, y, z)?;
        let mut t = c.clone();
        let mut j = edges.len();
        while j > 1 {
            let (z, z1, zz1) = (verts[j], verts[j - 1], edges[j - 1]);
            if t.free(z1).contains(a) {
                j -= 1;
                continue;
            }
            let cc = t.free(z1).first()?;
            if t.free(z).contains(cc) {
                t.assign(zz1, cc).ok()?;
                return Some(t);
            }
            let r = alternating_path(&t, a, cc, z).ok()?;
            if let Some(pos) = r.edges.iter().position(|&f| f == xy) {
                t.unassign(xy);
                exchange(&mut t, &r.edges[..pos], a, cc)?;
                t.assign(zz1, cc).ok()?;
                return Some(t);
            }
            exchange(&mut t, &r.edges, a, cc)?;
            j -= 1;
        }
        t.unassign(xy);
        t.assign(edges[0], a).ok()?;
        Some(t)
    }

    /// `b` is free in both components: move it to `x` and `y` by exchanges
    /// inside each component and recolor `xy` with it.
    fn seen_with_common_color(
        &self,
        xy: EdgeId,
        x: VertexId,
        y: VertexId,
        i1: usize,
        i2: usize,
        b: Color,
    ) -> Option<PartialColoring> {
        let c = self.c;
        let mut t = c.clone();
        for (end, qi) in [(x, i1), (y, i2)] {
            if t.free(end).contains(b) {
                continue;
            }
            let holder = *self.idx.components[qi].vertices.iter().find(|&&v| t.free(v).contains(b))?;
            let cc = t.free(end).first()?;
            if t.free(holder).contains(cc) {
                continue;
            }
            swap_alternating_path(&mut t, b, cc, holder).ok()?;
        }
        if !t.free(x).contains(b) || !t.free(y).contains(b) {
            return None;
        }
        t.recolor(xy, b).ok()?;
        Some(t)
    }

    fn fans(&mut self) -> &[FanInfo] {
        if self.fans.is_none() {
            let c = self.c;
            let mut out = Vec::new();
            for (qi, q) in self.idx.nontrivial() {
                for &e in &q.edges {
                    let (u, v) = c.endpoints(e);
                    for center in [u, v] {
                        if let Ok(fan) = build_maximal_fan_at(c, center, e) {
                            let stable = is_stable_fan(c, &fan);
                            out.push(FanInfo { fan, component: qi, stable });
                        }
                    }
                }
            }
            self.fans = Some(out);
        }
        self.fans.as_deref().unwrap()
    }

    /// Rotates a stable fan and a second fan at a shared end. With
    /// `same_component` false the fans lie in different components (M3),
    /// otherwise in the same tree component (M4).
    fn double_rotation(&mut self, same_component: bool) -> Option<PartialColoring> {
        self.fans();
        let fans = self.fans.as_ref().unwrap();
        let comps = &self.idx.components;
        for f1 in fans.iter().filter(|f| f.stable) {
            let size1 = comps[f1.component].edges.len();
            for f2 in fans {
                if f2.fan.edges[0] == f1.fan.edges[0] {
                    continue;
                }
                if same_component {
                    if f2.component != f1.component || !f2.stable || comps[f1.component].cycles != 0 {
                        continue;
                    }
                } else if f2.component == f1.component || !(f2.stable || comps[f2.component].edges.len() <= size1) {
                    continue;
                }
                for (i, yi) in f1.fan.ends.iter().enumerate() {
                    for (j, uj) in f2.fan.ends.iter().enumerate() {
                        if yi != uj {
                            continue;
                        }
                        let mut t = self.c.clone();
                        if rotate_on(&mut t, &f1.fan, i).is_none() || rotate_on(&mut t, &f2.fan, j).is_none() {
                            continue;
                        }
                        if let Some(r) = self.better(t) {
                            return Some(r);
                        }
                    }
                }
            }
        }
        None
    }

    fn m5(&mut self) -> Option<PartialColoring> {
        self.fans();
        let fans = self.fans.as_ref().unwrap();
        for f in fans.iter().filter(|f| f.stable) {
            for i in 1..f.fan.len() {
                let mut t = self.c.clone();
                if rotate_on(&mut t, &f.fan, i).is_some() {
                    if let Some(r) = self.better(t) {
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    /// Vertices of each component together with the full ends of its stable
    /// fans, each with the rotation that brings it into the component.
    fn reach_sets(&mut self) -> Vec<Vec<(VertexId, FanEnd)>> {
        self.fans();
        let mut sets: Vec<Vec<(VertexId, FanEnd)>> =
            self.idx.components.iter().map(|q| q.vertices.iter().map(|&v| (v, None)).collect()).collect();
        for (fi, f) in self.fans.as_ref().unwrap().iter().enumerate() {
            if !f.stable {
                continue;
            }
            for (i, &z) in f.fan.ends.iter().enumerate() {
                if f.fan.full[i] && !sets[f.component].iter().any(|&(v, _)| v == z) {
                    sets[f.component].push((z, Some((fi, i))));
                }
            }
        }
        sets
    }

    fn m6(&mut self) -> Option<PartialColoring> {
        let k = self.c.k();
        let full: Vec<usize> = self
            .idx
            .nontrivial()
            .filter(|(_, q)| q.free_union.len() == k)
            .map(|(i, _)| i)
            .collect();
        if full.is_empty() {
            return None;
        }
        let sets = self.reach_sets();
        let n = self.c.vertex_count();
        let mut owner: Vec<Vec<(usize, FanEnd)>> = vec![Vec::new(); n];
        for (qi, s) in sets.iter().enumerate() {
            for &(v, via) in s {
                owner[v.0].push((qi, via));
            }
        }
        let fans = self.fans.as_ref().unwrap();
        for &qi in &full {
            for &(u, via_u) in &sets[qi] {
                for &e in self.g.incident(u) {
                    if !self.c.is_colored(e) {
                        continue;
                    }
                    let v = self.g.other_end(e, u);
                    for &(ri, via_v) in &owner[v.0] {
                        if ri == qi {
                            continue;
                        }
                        let mut t = self.c.clone();
                        let mut ok = true;
                        for via in [via_v, via_u].into_iter().flatten() {
                            ok &= rotate_on(&mut t, &fans[via.0].fan, via.1).is_some();
                        }
                        if !ok {
                            continue;
                        }
                        let inner = MoveSearch::new(self.g, &t, potential_unchecked(&t));
                        let next = inner.m2().or_else(|| inner.m1());
                        if let Some(r) = next.and_then(|r| self.better(r)) {
                            return Some(r);
                        }
                    }
                }
            }
        }
        None
    }

    fn m7(&self) -> Option<PartialColoring> {
        let (g, c) = (self.g, self.c);
        for set in dense::dense_sets(g, c.k()) {
            let region = dense::region_edges(g, &set);
            let before = region.iter().filter(|&&e| c.is_colored(e)).count();
            if before == region.len() {
                continue;
            }
            if let Some(t) = dense::extend_exact(c, &region, dense::NODE_BUDGET) {
                let after = region.iter().filter(|&&e| t.is_colored(e)).count();
                if after > before {
                    if let Some(r) = self.better(t) {
                        return Some(r);
                    }
                }
            }
        }
        None
    }
}
