use std::time::Instant;

use anyhow::{bail, Result};
use clap::ValueEnum;
use kecs::baseline::vizing_baseline;
use kecs::coloring::{validate_coloring, PartialColoring};
use kecs::graph::{are_isomorphic, Pattern};
use kecs::meta::{guaranteed_ratio, run_meta, standard_binding, CoreSolver, ExceptionFamily, PsiCore, SubcubicCore};
use kecs::oracle::exact_max_ecs_with_cap;
use kecs::psi::{guaranteed_fraction, maximize_psi_with, PsiOptions};
use kecs::subcubic::{classify, components, contains_g3, solve_subcubic, SubcubicCase};
use kecs::MultiGraph;
use num_rational::Ratio;

use crate::report::{ceil_times, fraction, ratio, Basis, Instance, RunReport, TraceSummary, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Psi,
    Subcubic,
    Meta,
    VizingBaseline,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Psi => "psi",
            Strategy::Subcubic => "subcubic",
            Strategy::Meta => "meta",
            Strategy::VizingBaseline => "vizing-baseline",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    #[value(name = "G3")]
    G3,
    #[value(name = "B3")]
    B3,
    #[value(name = "K5")]
    K5,
    #[value(name = "K7")]
    K7,
    None,
}

impl FamilyChoice {
    fn patterns(self) -> Vec<Pattern> {
        match self {
            FamilyChoice::G3 => vec![Pattern::G3],
            FamilyChoice::B3 => vec![Pattern::B3],
            FamilyChoice::K5 => vec![Pattern::K(5)],
            FamilyChoice::K7 => vec![Pattern::K(7)],
            FamilyChoice::None => Vec::new(),
        }
    }
}

pub struct SolveOptions {
    pub k: usize,
    pub strategy: Strategy,
    pub family: Option<FamilyChoice>,
    /// Largest instance the oracle is run on.
    pub cap: usize,
    pub timing: bool,
}

/// Fraction of all edges the local search promises on `g` at palette `k`:
/// simple graphs of maximum degree exactly `k ∈ 4..=7` whose components
/// are not `K_{k+1}`, or `K_{k+1}` itself.
fn psi_claim(g: &MultiGraph, k: usize) -> Option<Ratio<i64>> {
    if !g.is_simple() || g.max_degree() != k || !(4..=7).contains(&k) {
        return None;
    }
    let clique = kecs::gen::gen_named(&kecs::gen::NamedGraph::K(k + 1)).ok()?;
    if are_isomorphic(g, &clique) {
        return guaranteed_fraction(k, true).ok();
    }
    let has_clique_component = components(g).iter().any(|c| are_isomorphic(&g.induced_subgraph(c).graph, &clique));
    if has_clique_component && k.is_multiple_of(2) {
        return None;
    }
    guaranteed_fraction(k, false).ok()
}

/// Fraction of all edges the subcubic pipeline promises: 13/15 without
/// G3 subgraphs and B3 or G5* components, 7/9 without G3 components.
fn subcubic_claim(g: &MultiGraph) -> Option<Ratio<i64>> {
    let cases: Vec<SubcubicCase> = components(g).iter().map(|c| classify(&g.induced_subgraph(c).graph)).collect();
    if cases.contains(&SubcubicCase::G3) {
        return None;
    }
    if !contains_g3(g) && !cases.iter().any(|c| matches!(c, SubcubicCase::B3 | SubcubicCase::GStar5)) {
        return Some(kecs::subcubic::thirteen_fifteenths());
    }
    Some(kecs::subcubic::seven_ninths())
}

pub fn solve(g: &MultiGraph, opts: &SolveOptions) -> Result<(PartialColoring, RunReport)> {
    let k = opts.k;
    let start = Instant::now();
    let mut trace = None;
    let mut meta_log = None;
    let (coloring, claim, basis) = match opts.strategy {
        Strategy::Psi => {
            let run = maximize_psi_with(g, &PsiOptions { palette: Some(k), ..PsiOptions::default() })?;
            trace = Some(TraceSummary::new(run.iterations, &run.move_counts));
            (run.coloring, psi_claim(g, k), Basis::Edges)
        }
        Strategy::Subcubic => {
            if k != 3 {
                bail!("the subcubic strategy needs -k 3");
            }
            (solve_subcubic(g)?, subcubic_claim(g), Basis::Edges)
        }
        Strategy::VizingBaseline => (vizing_baseline(g, k)?, None, Basis::Edges),
        Strategy::Meta => {
            let (standard, standard_core) = standard_binding(k, g.is_simple())?;
            let (fam, core): (ExceptionFamily, Box<dyn CoreSolver>) = match opts.family {
                None => (standard, standard_core),
                Some(choice) => {
                    let fam = ExceptionFamily::new(k, &choice.patterns())?;
                    let core: Box<dyn CoreSolver> = if k == 3 {
                        Box::new(SubcubicCore { simple: g.is_simple() })
                    } else {
                        Box::new(PsiCore { k })
                    };
                    (fam, core)
                }
            };
            let is_standard = opts.family.is_none()
                || fam.members.iter().map(|m| m.pattern).eq(standard_binding(k, g.is_simple())?.0.members.iter().map(|m| m.pattern));
            let out = run_meta(g, &fam, core.as_ref())?;
            let claim = if is_standard { Some(guaranteed_ratio(&fam, core.alpha())?) } else { None };
            meta_log = Some(out.log);
            (out.coloring, claim, Basis::Optimum)
        }
    };
    let wall = start.elapsed();
    if !validate_coloring(g, &coloring).is_valid() {
        bail!("strategy {} produced an improper coloring", opts.strategy.name());
    }

    let m = g.edge_count();
    let oracle_optimum = if m <= opts.cap { Some(exact_max_ecs_with_cap(g, k, opts.cap)?.optimum) } else { None };
    let colored = coloring.colored_count();
    let required = claim.and_then(|r| match basis {
        Basis::Edges => Some(ceil_times(r, m)),
        Basis::Optimum => oracle_optimum.map(|opt| ceil_times(r, opt)),
    });
    let core_ok = meta_log.as_ref().is_none_or(|log| claim.is_none() || log.core_misses() == 0);
    let guarantee_met = required.map(|req| colored >= req && core_ok);
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        instance: Instance::of(g),
        strategy: opts.strategy.name().to_string(),
        k,
        colored,
        fraction: fraction(colored, m),
        guarantee: claim.map(ratio),
        guarantee_basis: claim.map(|_| basis),
        required,
        guarantee_met,
        oracle_optimum,
        wall_time_ms: opts.timing.then_some(wall.as_millis() as u64),
        trace,
        meta: meta_log,
    };
    Ok((coloring, report))
}
