use num_rational::Ratio;
use serde::Serialize;

use super::{
    detect_exceptions, edge_components, guaranteed_ratio, initial_matching, lowest_free, normalize_f, Component,
    CoreSolver, ExceptionFamily, GammaEntry, MetaError, StarForest,
};
use crate::coloring::{validate_coloring, Color, ColorSet, PartialColoring};
use crate::factor::build_exception_matching_r;
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::psi::required_edges;

#[derive(Clone, Debug, Serialize)]
pub struct GammaLog {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub member: String,
    pub deficit: usize,
}

/// A leaf component absorbed through `xy`, with `yz` taken out of `F`.
#[derive(Clone, Debug, Serialize)]
pub struct Step2Log {
    /// Index into the run's Γ list.
    pub q: usize,
    pub xy: EdgeId,
    pub yz: EdgeId,
    /// A second leaf `Q'` hanging off `z` through `zw`.
    pub zw: Option<EdgeId>,
    pub q2: Option<usize>,
    /// Edges taken out of `F` for this group.
    pub removed: usize,
    /// Edges the group contributes to the final coloring.
    pub colored: usize,
}

/// A leaf component removed together with `yz` and the family component
/// `P_yz` hanging off `z`.
#[derive(Clone, Debug, Serialize)]
pub struct Step3Log {
    pub q: usize,
    pub xy: EdgeId,
    pub yz: EdgeId,
    pub p_yz: Vec<EdgeId>,
    pub removed: usize,
    pub colored: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoreLog {
    pub edges: usize,
    pub colored: usize,
    /// `⌈α·edges⌉`.
    pub required: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunLog {
    pub k: usize,
    pub family: String,
    pub core: String,
    pub f_size: usize,
    pub normalize_swaps: usize,
    pub gamma: Vec<GammaLog>,
    pub r: Vec<EdgeId>,
    pub star_forest: StarForest,
    pub step2: Vec<Step2Log>,
    pub step3: Vec<Step3Log>,
    /// Components of the final `F` colored from the family tables.
    pub exact_components: usize,
    pub core_components: Vec<CoreLog>,
    pub colored: usize,
    /// `min{α, β, γ}` as `p/q`.
    pub guarantee: String,
}

impl RunLog {
    pub fn core_misses(&self) -> usize {
        self.core_components.iter().filter(|c| c.colored < c.required).count()
    }
}

#[derive(Clone, Debug)]
pub struct MetaOutcome {
    pub coloring: PartialColoring,
    pub guarantee: Ratio<i64>,
    pub log: RunLog,
}

impl MetaOutcome {
    /// Fails with the first component the core solved below its ratio.
    pub fn check_core(&self) -> Result<(), MetaError> {
        match self.log.core_components.iter().find(|c| c.colored < c.required) {
            Some(c) => Err(MetaError::CoreRatioMiss { colored: c.colored, required: c.required, edges: c.edges }),
            None => Ok(()),
        }
    }
}

struct State<'a> {
    g: &'a MultiGraph,
    fam: &'a ExceptionFamily,
    gamma: &'a [GammaEntry],
    in_f: Vec<bool>,
    in_r: Vec<bool>,
}

/// Components of the current `F`; isolated vertices get their own node.
struct Layout {
    node_of: Vec<usize>,
    comps: Vec<Component>,
    forest: StarForest,
}

impl State<'_> {
    fn f_edges(&self) -> Vec<EdgeId> {
        self.g.edges().filter(|e| self.in_f[e.0]).collect()
    }

    fn r_edges(&self) -> Vec<EdgeId> {
        self.g.edges().filter(|e| self.in_r[e.0]).collect()
    }

    fn alive(&self, q: usize) -> bool {
        self.gamma[q].component.edges.iter().all(|e| self.in_f[e.0])
    }

    fn layout(&self) -> Layout {
        let comps = edge_components(self.g, &self.f_edges());
        let mut node_of = vec![usize::MAX; self.g.vertex_count()];
        for (i, c) in comps.iter().enumerate() {
            for v in &c.vertices {
                node_of[v.0] = i;
            }
        }
        let mut nodes = comps.len();
        for slot in node_of.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = nodes;
            nodes += 1;
        }
        let forest = StarForest::build(self.g, &node_of, nodes, &self.r_edges());
        Layout { node_of, comps, forest }
    }

    fn degree_in(&self, v: VertexId, set: &[bool]) -> usize {
        self.g.incident(v).iter().filter(|e| set[e.0]).count()
    }

    fn f_edges_at(&self, v: VertexId) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.g.incident(v).iter().copied().filter(|e| self.in_f[e.0]).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// `R` edges leaving component `q`, as `(xy, x, y)` in edge order.
    fn r_edges_leaving(&self, q: usize) -> Vec<(EdgeId, VertexId, VertexId)> {
        let comp = &self.gamma[q].component;
        let mut out = Vec::new();
        for &x in &comp.vertices {
            for &e in self.g.incident(x) {
                let y = self.g.other_end(e, x);
                if self.in_r[e.0] && !comp.vertices.contains(&y) {
                    out.push((e, x, y));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Components of `P - yz` that are family members.
    fn family_parts(&self, p: &Component, yz: EdgeId) -> Vec<(Component, usize)> {
        let rest: Vec<EdgeId> = p.edges.iter().copied().filter(|&e| e != yz).collect();
        edge_components(self.g, &rest)
            .into_iter()
            .filter_map(|c| {
                let sub = self.g.subgraph_on(&c.vertices, &c.edges);
                self.fam.member_of(&sub.graph).map(|m| (c, m))
            })
            .collect()
    }

    /// Leaf components of Γ that still have an `R` edge, in Γ order.
    fn leaves(&self, lay: &Layout) -> Vec<usize> {
        let deg = lay.forest.degrees();
        (0..self.gamma.len())
            .filter(|&q| self.alive(q) && deg[lay.node_of[self.gamma[q].component.vertices[0].0]] == 1)
            .filter(|&q| !self.r_edges_leaving(q).is_empty())
            .collect()
    }

    fn remove_f(&mut self, edges: &[EdgeId]) {
        for e in edges {
            self.in_f[e.0] = false;
        }
    }

    fn check(&self, when: &str) -> Result<(), MetaError> {
        let bad = |what: String| Err(MetaError::InvariantViolated(format!("{what} {when}")));
        for v in self.g.vertices() {
            let (dr, df) = (self.degree_in(v, &self.in_r), self.degree_in(v, &self.in_f));
            if dr > df {
                return bad(format!("deg_R({}) = {dr} exceeds deg_F = {df}", v.0));
            }
        }
        let lay = self.layout();
        for c in &lay.comps {
            let sub = self.g.subgraph_on(&c.vertices, &c.edges);
            if self.fam.member_of(&sub.graph).is_some()
                && !(0..self.gamma.len()).any(|q| self.alive(q) && self.gamma[q].component.edges == c.edges)
            {
                return bad(format!("new family component at vertex {}", c.vertices[0].0));
            }
        }
        if !lay.forest.is_star_forest() {
            return bad("H_F is not a star forest".into());
        }
        Ok(())
    }
}

/// A vertex-disjoint colored piece, joined to the rest through at most one
/// edge `(edge, own end, host end)`.
struct Piece {
    vertices: Vec<VertexId>,
    colors: Vec<(EdgeId, Color)>,
    attach: Option<(EdgeId, VertexId, VertexId)>,
}

/// Colors `comp` from the table of family member `member`, leaving `skip`
/// (a host edge of `comp`) uncolored.
fn table_piece(
    g: &MultiGraph,
    fam: &ExceptionFamily,
    member: usize,
    comp: &Component,
    skip: Option<EdgeId>,
) -> Result<Piece, MetaError> {
    let sub = g.subgraph_on(&comp.vertices, &comp.edges);
    let local_skip = skip.map(|e| EdgeId(sub.edge_map.iter().position(|&h| h == e).expect("skip edge in component")));
    let c = fam.members[member]
        .color_copy(&sub.graph, local_skip)
        .ok_or_else(|| MetaError::InvariantViolated("table does not fit its component".into()))?;
    Ok(Piece { vertices: comp.vertices.clone(), colors: lift(&sub.edge_map, &c), attach: None })
}

fn lift(edge_map: &[EdgeId], c: &PartialColoring) -> Vec<(EdgeId, Color)> {
    c.colored_edges().map(|e| (edge_map[e.0], c.color(e).unwrap())).collect()
}

fn first_edge_at(g: &MultiGraph, comp: &Component, x: VertexId) -> EdgeId {
    *comp
        .edges
        .iter()
        .find(|&&e| {
            let (a, b) = g.endpoints(e);
            a == x || b == x
        })
        .expect("component vertex has an edge")
}

fn ratio_string(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Runs the meta algorithm: a maximum k-matching `F`, exception components
/// glued to their neighbours through the repair set, exact tables for the
/// exceptions and the core solver for everything else.
pub fn run_meta(g: &MultiGraph, fam: &ExceptionFamily, core: &dyn CoreSolver) -> Result<MetaOutcome, MetaError> {
    let k = fam.k;
    if core.k() != k {
        return Err(MetaError::UnsupportedK(core.k()));
    }
    let guarantee = guaranteed_ratio(fam, core.alpha())?;
    let mut f = initial_matching(g, k);
    let f_size = f.len();
    let normalize_swaps = normalize_f(g, &mut f, fam)?;
    let gamma = detect_exceptions(g, &f, fam);
    let gamma_vertices: Vec<Vec<VertexId>> = gamma.iter().map(|q| q.component.vertices.clone()).collect();
    let deficits: Vec<usize> = gamma.iter().map(|q| fam.members[q.member].deficit()).collect();
    let r = build_exception_matching_r(g, &gamma_vertices, &deficits, k)?;

    let mut st = State { g, fam, gamma: &gamma, in_f: vec![false; g.edge_count()], in_r: vec![false; g.edge_count()] };
    for &e in &f {
        st.in_f[e.0] = true;
    }
    for &e in &r {
        st.in_r[e.0] = true;
    }
    let star_forest = st.layout().forest;
    st.check("after building R")?;

    // Peel leaf components joined to a neighbor through an F edge whose removal keeps P free of family copies.
    let mut step2 = Vec::new();
    'step2: loop {
        let lay = st.layout();
        for q in st.leaves(&lay) {
            for (xy, _x, y) in st.r_edges_leaving(q) {
                let p = &lay.comps[lay.node_of[y.0]];
                for yz in st.f_edges_at(y) {
                    if !st.family_parts(p, yz).is_empty() {
                        continue;
                    }
                    let z = g.other_end(yz, y);
                    let qe = gamma[q].component.edges.clone();
                    st.in_r[xy.0] = false;
                    st.remove_f(&qe);
                    st.in_f[yz.0] = false;
                    let mut removed = qe.len() + 1;
                    let mut colored = fam.members[gamma[q].member].c_k + 1;
                    let (mut zw, mut q2) = (None, None);
                    let mut at_z: Vec<EdgeId> =
                        g.incident(z).iter().copied().filter(|e| st.in_r[e.0]).collect();
                    at_z.sort_unstable();
                    if let Some(&e) = at_z.first() {
                        let w = g.other_end(e, z);
                        let owner = (0..gamma.len())
                            .find(|&j| st.alive(j) && gamma[j].component.vertices.contains(&w))
                            .ok_or_else(|| {
                                MetaError::InvariantViolated(format!("edge {} of R leaves no exception", e.0))
                            })?;
                        let oe = gamma[owner].component.edges.clone();
                        st.in_r[e.0] = false;
                        st.remove_f(&oe);
                        removed += oe.len();
                        colored += fam.members[gamma[owner].member].c_k + 1;
                        zw = Some(e);
                        q2 = Some(owner);
                    }
                    step2.push(Step2Log { q, xy, yz, zw, q2, removed, colored });
                    st.check("after step 2")?;
                    continue 'step2;
                }
            }
        }
        break;
    }

    // Peel leaf components whose attaching F edge lies in exactly one family copy.
    let mut step3 = Vec::new();
    loop {
        let lay = st.layout();
        let Some(&q) = st.leaves(&lay).first() else { break };
        let (xy, _x, y) = st.r_edges_leaving(q)[0];
        let p = lay.comps[lay.node_of[y.0]].clone();
        let yz = *st
            .f_edges_at(y)
            .first()
            .ok_or_else(|| MetaError::InvariantViolated(format!("vertex {} has an R edge but no F edge", y.0)))?;
        let z = g.other_end(yz, y);
        let parts = st.family_parts(&p, yz);
        if parts.len() != 1 || !parts[0].0.vertices.contains(&z) {
            return Err(MetaError::InvariantViolated(format!(
                "P - yz has {} family components for yz = {}",
                parts.len(),
                yz.0
            )));
        }
        let (p_yz, pm) = parts.into_iter().next().unwrap();
        let qe = gamma[q].component.edges.clone();
        st.in_r[xy.0] = false;
        st.remove_f(&qe);
        st.in_f[yz.0] = false;
        st.remove_f(&p_yz.edges);
        let removed = qe.len() + 1 + p_yz.edges.len();
        let colored = fam.members[gamma[q].member].c_k + fam.members[pm].c_k + 1;
        step3.push((Step3Log { q, xy, yz, p_yz: p_yz.edges.clone(), removed, colored }, p_yz, pm, z, y));
        st.check("after step 3")?;
    }

    // Color what is left piece by piece, then reattach the peeled parts.
    let mut pieces = Vec::new();
    let mut exact_components = 0;
    let mut core_components = Vec::new();
    let lay = st.layout();
    for comp in &lay.comps {
        let sub = g.subgraph_on(&comp.vertices, &comp.edges);
        if let Some(q) = (0..gamma.len()).find(|&q| st.alive(q) && gamma[q].component.edges == comp.edges) {
            pieces.push(table_piece(g, fam, gamma[q].member, comp, None)?);
            exact_components += 1;
            continue;
        }
        let c = core.solve(&sub.graph)?;
        if !validate_coloring(&sub.graph, &c).is_valid() || c.k() != k {
            return Err(MetaError::InvariantViolated("core returned an invalid coloring".into()));
        }
        core_components.push(CoreLog {
            edges: comp.edges.len(),
            colored: c.colored_count(),
            required: required_edges(core.alpha(), comp.edges.len()),
        });
        pieces.push(Piece { vertices: comp.vertices.clone(), colors: lift(&sub.edge_map, &c), attach: None });
    }
    for (log, p_yz, pm, z, y) in &step3 {
        pieces.push(table_piece(g, fam, gamma[log.q].member, &gamma[log.q].component, None)?);
        let mut p = table_piece(g, fam, *pm, p_yz, None)?;
        p.attach = Some((log.yz, *z, *y));
        pieces.push(p);
    }
    for log in &step2 {
        let comp = &gamma[log.q].component;
        let (x, y) = {
            let (a, b) = g.endpoints(log.xy);
            if comp.vertices.contains(&a) {
                (a, b)
            } else {
                (b, a)
            }
        };
        let mut p = table_piece(g, fam, gamma[log.q].member, comp, Some(first_edge_at(g, comp, x)))?;
        p.attach = Some((log.xy, x, y));
        pieces.push(p);
        if let (Some(zw), Some(q2)) = (log.zw, log.q2) {
            let comp2 = &gamma[q2].component;
            let (a, b) = g.endpoints(zw);
            let (w, z) = if comp2.vertices.contains(&a) { (a, b) } else { (b, a) };
            let mut p = table_piece(g, fam, gamma[q2].member, comp2, Some(first_edge_at(g, comp2, w)))?;
            p.attach = Some((zw, w, z));
            pieces.push(p);
        }
    }
    let coloring = assemble(g, k, &pieces)?;

    let colored = coloring.colored_count();
    let log = RunLog {
        k,
        family: fam.to_string(),
        core: core.name().to_string(),
        f_size,
        normalize_swaps,
        gamma: gamma
            .iter()
            .map(|q| GammaLog {
                vertices: q.component.vertices.clone(),
                edges: q.component.edges.clone(),
                member: fam.members[q.member].pattern.to_string(),
                deficit: fam.members[q.member].deficit(),
            })
            .collect(),
        r,
        star_forest,
        step2,
        step3: step3.into_iter().map(|t| t.0).collect(),
        exact_components,
        core_components,
        colored,
        guarantee: ratio_string(guarantee),
    };
    Ok(MetaOutcome { coloring, guarantee, log })
}

/// Places the pieces, hosts before the pieces attached to them. An
/// attached piece has its colors permuted so that one color free at its own
/// end is also free at the host, and the attaching edge takes that color.
fn assemble(g: &MultiGraph, k: usize, pieces: &[Piece]) -> Result<PartialColoring, MetaError> {
    let mut out = PartialColoring::new(g, k)?;
    let mut owner = vec![usize::MAX; g.vertex_count()];
    for (i, p) in pieces.iter().enumerate() {
        for v in &p.vertices {
            owner[v.0] = i;
        }
    }
    let mut placed = vec![false; pieces.len()];
    let mut pending: Vec<usize> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        if p.attach.is_none() {
            for &(e, c) in &p.colors {
                out.assign(e, c)?;
            }
            placed[i] = true;
        } else {
            pending.push(i);
        }
    }
    while !pending.is_empty() {
        let ready = pending.iter().position(|&i| {
            let host = pieces[i].attach.unwrap().2;
            owner[host.0] == usize::MAX || placed[owner[host.0]]
        });
        let Some(pos) = ready else {
            return Err(MetaError::InvariantViolated("attachments form a cycle".into()));
        };
        let i = pending.remove(pos);
        let (edge, own, host) = pieces[i].attach.unwrap();
        let mut used = ColorSet::EMPTY;
        for &(e, c) in &pieces[i].colors {
            let (a, b) = g.endpoints(e);
            if a == own || b == own {
                used.insert(c);
            }
        }
        let free_own = ColorSet::full(k).difference(used).first();
        let free_host = lowest_free(&out, host);
        let (Some(a), Some(b)) = (free_own, free_host) else {
            return Err(MetaError::InvariantViolated(format!("no free color to attach edge {}", edge.0)));
        };
        let swap = |c: Color| {
            if c == a {
                b
            } else if c == b {
                a
            } else {
                c
            }
        };
        for &(e, c) in &pieces[i].colors {
            out.assign(e, swap(c))?;
        }
        out.assign(edge, b)?;
        placed[i] = true;
    }
    Ok(out)
}
