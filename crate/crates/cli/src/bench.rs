//! Ratio table over a seeded random corpus, one row per palette size.

use std::fmt::Write as _;
use std::thread;

use anyhow::Result;
use kecs::baseline::vizing_baseline;
use kecs::gen::{gen_random_bounded_degree, gen_random_bounded_degree_multi};
use kecs::meta::{approximate, guaranteed_ratio, standard_binding};
use kecs::oracle::c_k;
use kecs::MultiGraph;
use num_rational::Ratio;

use crate::report::{ceil_times, ratio};

pub struct BenchOptions {
    pub seed: u64,
    /// Instances per row.
    pub count: usize,
    pub threads: usize,
}

struct Row {
    k: usize,
    multi: bool,
}

const ROWS: [Row; 6] = [
    Row { k: 3, multi: false },
    Row { k: 3, multi: true },
    Row { k: 4, multi: false },
    Row { k: 5, multi: false },
    Row { k: 6, multi: false },
    Row { k: 7, multi: false },
];

/// Per-instance result: colored/OPT for meta and for the baseline.
struct Sample {
    meta: Ratio<i64>,
    baseline: Ratio<i64>,
    violated: bool,
}

fn instance(row: &Row, seed: u64) -> Option<MultiGraph> {
    // Small enough for the oracle, dense enough to exceed degree k.
    let n = 5 + (seed % 5) as usize;
    let delta = row.k + 1 + (seed % 2) as usize;
    let density = Ratio::new(5 + (seed % 6) as i64, 10);
    let g = if row.multi {
        gen_random_bounded_degree_multi(n, delta, density, seed)
    } else {
        gen_random_bounded_degree(n, delta, density, seed)
    }
    .ok()?;
    (g.edge_count() <= 20).then_some(g)
}

fn sample(row: &Row, g: &MultiGraph) -> Result<Sample> {
    let opt = c_k(g, row.k)?;
    let out = approximate(g, row.k)?;
    let base = vizing_baseline(g, row.k)?;
    let frac = |c: usize| if opt == 0 { Ratio::from_integer(1) } else { Ratio::new(c as i64, opt as i64) };
    Ok(Sample {
        meta: frac(out.coloring.colored_count()),
        baseline: frac(base.colored_count()),
        violated: out.coloring.colored_count() < ceil_times(out.guarantee, opt),
    })
}

/// Runs the corpus and returns the table and the number of guarantee
/// violations. Instances are split across `threads` workers; results are
/// merged by instance id so the table does not depend on scheduling.
pub fn run(opts: &BenchOptions) -> Result<(String, usize)> {
    let mut jobs = Vec::new();
    for (r, row) in ROWS.iter().enumerate() {
        let mut seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(r as u64 * 100_000);
        let mut made = 0;
        while made < opts.count {
            if let Some(g) = instance(row, seed) {
                jobs.push((r, g));
                made += 1;
            }
            seed = seed.wrapping_add(1);
        }
    }
    let threads = opts.threads.max(1);
    let mut results: Vec<Option<Result<Sample>>> = (0..jobs.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let jobs = &jobs;
                s.spawn(move || {
                    (t..jobs.len())
                        .step_by(threads)
                        .map(|i| (i, sample(&ROWS[jobs[i].0], &jobs[i].1)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("bench worker panicked") {
                results[i] = Some(r);
            }
        }
    });

    let mut table = String::new();
    writeln!(table, "{:<3} {:<8} {:>9} {:>9} {:>12} {:>14} {:>10}", "k", "graphs", "proven", "instances", "worst meta", "worst baseline", "violations")?;
    let mut total_violations = 0;
    for (r, row) in ROWS.iter().enumerate() {
        let (fam, core) = standard_binding(row.k, !row.multi)?;
        let proven = guaranteed_ratio(&fam, core.alpha())?;
        let mut worst_meta: Option<Ratio<i64>> = None;
        let mut worst_base: Option<Ratio<i64>> = None;
        let mut violations = 0;
        let mut count = 0;
        for (i, res) in results.iter_mut().enumerate() {
            if jobs[i].0 != r {
                continue;
            }
            let s = res.take().expect("every job ran")?;
            count += 1;
            worst_meta = Some(worst_meta.map_or(s.meta, |w| w.min(s.meta)));
            worst_base = Some(worst_base.map_or(s.baseline, |w| w.min(s.baseline)));
            violations += usize::from(s.violated);
        }
        total_violations += violations;
        let show = |r: Option<Ratio<i64>>| r.map_or("-".to_string(), ratio);
        writeln!(
            table,
            "{:<3} {:<8} {:>9} {:>9} {:>12} {:>14} {:>10}",
            row.k,
            if row.multi { "multi" } else { "simple" },
            ratio(proven),
            count,
            show(worst_meta),
            show(worst_base),
            violations
        )?;
    }
    Ok((table, total_violations))
}
