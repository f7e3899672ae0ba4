//! Acceptance suite. Every test writes one `PASS` or `FAIL` line for its
//! criterion straight to stderr, so the verdicts show up even when the
//! harness captures output.

use std::io::Write;
use std::time::{Duration, Instant};

use kecs::coloring::{free_components, validate_coloring, ColorSet};
use kecs::factor::{max_k_matching, max_weight_fg_factor, DegreeBounds, FactorError, FactorInstance};
use kecs::gen::{
    gen_named, gen_random_bounded_degree, gen_random_bounded_degree_multi, triangle_preimages, NamedGraph,
};
use kecs::graph::{are_isomorphic, EdgeId, Pattern};
use kecs::meta::{approximate, family_constants, ExceptionFamily};
use kecs::oracle::exact_max_ecs;
use kecs::psi::{clique_color, guaranteed_fraction, maximize_psi_with, PsiOptions};
use kecs::subcubic::{classify, contains_g3, solve_subcubic, SubcubicCase};
use kecs::MultiGraph;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn verdict(n: usize, title: &str, v: Verdict) {
    let line = match &v {
        Ok(detail) => format!("PASS criterion {n} ({title}): {detail}\n"),
        Err(why) => format!("FAIL criterion {n} ({title}): {why}\n"),
    };
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    if let Err(why) = v {
        panic!("criterion {n}: {why}");
    }
}

fn ceil_times(r: Ratio<i64>, n: usize) -> usize {
    (r * Ratio::from_integer(n as i64)).ceil().to_integer() as usize
}

fn named(tag: NamedGraph) -> MultiGraph {
    gen_named(&tag).unwrap()
}

/// Plain backtracking over edge colors, kept separate from the library's
/// oracle so the two can check each other.
fn brute_ck(g: &MultiGraph, k: usize) -> usize {
    fn rec(i: usize, e: &[(usize, usize)], k: usize, used: &mut [u32], top: usize, cur: usize, best: &mut usize) {
        if cur + (e.len() - i) <= *best {
            return;
        }
        if i == e.len() {
            *best = cur;
            return;
        }
        let (u, v) = e[i];
        for c in 0..k.min(top + 1) {
            let bit = 1 << c;
            if used[u] & bit == 0 && used[v] & bit == 0 {
                used[u] |= bit;
                used[v] |= bit;
                rec(i + 1, e, k, used, top.max(c + 1), cur + 1, best);
                used[u] &= !bit;
                used[v] &= !bit;
            }
        }
        rec(i + 1, e, k, used, top, cur, best);
    }
    let e = g.edge_pairs();
    let mut best = 0;
    rec(0, &e, k, &mut vec![0; g.vertex_count()], 0, 0, &mut best);
    best
}

#[test]
fn criterion_1_tight_values() {
    let run = || -> Verdict {
        let cases = [
            (NamedGraph::G3, 3, 3, 4),
            (NamedGraph::B3, 3, 6, 7),
            (NamedGraph::Petersen, 3, 13, 15),
            (NamedGraph::K(5), 4, 8, 10),
            (NamedGraph::K(7), 6, 18, 21),
            (NamedGraph::KMinusE(5), 4, 8, 9),
            (NamedGraph::BDelta(5), 5, 15, 17),
        ];
        let mut slowest = Duration::ZERO;
        for (tag, k, c, m) in cases {
            let g = named(tag.clone());
            let t = Instant::now();
            let r = exact_max_ecs(&g, k).map_err(|e| e.to_string())?;
            let took = t.elapsed();
            slowest = slowest.max(took);
            if took > Duration::from_secs(5) {
                return Err(format!("{tag} took {took:?}"));
            }
            if (r.optimum, g.edge_count()) != (c, m) || r.gamma != Ratio::new(c as i64, m as i64) {
                return Err(format!("{tag}: c_{k} = {} of {}, want {c} of {m}", r.optimum, g.edge_count()));
            }
            if !validate_coloring(&g, &r.witness).is_valid() || r.witness.colored_count() != c {
                return Err(format!("{tag}: bad witness"));
            }
            if m <= 15 && brute_ck(&g, k) != c {
                return Err(format!("{tag}: backtracking disagrees"));
            }
        }
        Ok(format!("7 exact values reproduced, slowest {slowest:?}"))
    };
    verdict(1, "tight values via oracle", run());
}

/// A connected simple graph with maximum degree exactly `delta` that is
/// not `K_{delta+1}`.
fn degree_exact_graph(delta: usize, rng: &mut ChaCha8Rng, seed: &mut u64) -> MultiGraph {
    let clique = named(NamedGraph::K(delta + 1));
    loop {
        *seed += 1;
        let n = rng.gen_range(delta + 1..=40);
        let density = Ratio::new(rng.gen_range(3..=10), 10);
        if let Ok(g) = gen_random_bounded_degree(n, delta, density, *seed) {
            if g.max_degree() == delta && !are_isomorphic(&g, &clique) {
                return g;
            }
        }
    }
}

#[test]
fn criterion_2_local_search_sweep() {
    let run = || -> Verdict {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut seed = 0;
        let mut worst = Vec::new();
        for delta in 4..=7 {
            let fraction = guaranteed_fraction(delta, false).unwrap();
            let mut low: Option<Ratio<i64>> = None;
            for _ in 0..200 {
                let g = degree_exact_graph(delta, &mut rng, &mut seed);
                let run = maximize_psi_with(&g, &PsiOptions::default()).map_err(|e| format!("Δ={delta}: {e}"))?;
                let colored = run.coloring.colored_count();
                if colored < ceil_times(fraction, g.edge_count()) {
                    return Err(format!("Δ={delta} seed {seed}: {colored} of {} below {fraction}", g.edge_count()));
                }
                let r = Ratio::new(colored as i64, g.edge_count() as i64);
                low = Some(low.map_or(r, |l| l.min(r)));
            }
            worst.push(format!("Δ={delta} worst {}", low.unwrap()));
        }
        let took = start.elapsed();
        if took > Duration::from_secs(600) {
            return Err(format!("took {took:?}"));
        }
        Ok(format!("800 graphs in {took:?}; {}", worst.join(", ")))
    };
    verdict(2, "local search guarantee sweep", run());
}

#[test]
fn criterion_3_subcubic_sweep() {
    let run = || -> Verdict {
        let seven_ninths = Ratio::new(7, 9);
        let thirteen_fifteenths = Ratio::new(13, 15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut total, mut strong) = (0, 0);
        let mut seed = 0u64;
        while total < 300 {
            seed += 1;
            let n = rng.gen_range(2..=30);
            let density = Ratio::new(rng.gen_range(3..=10), 10);
            let g = if seed.is_multiple_of(2) {
                gen_random_bounded_degree_multi(n, 3, density, seed)
            } else {
                gen_random_bounded_degree(n, 3, density, seed)
            };
            let Ok(g) = g else { continue };
            let case = classify(&g);
            if case == SubcubicCase::G3 {
                continue;
            }
            total += 1;
            let c = solve_subcubic(&g).map_err(|e| format!("seed {seed}: {e}"))?;
            if !validate_coloring(&g, &c).is_valid() {
                return Err(format!("seed {seed}: improper coloring"));
            }
            let m = g.edge_count();
            if c.colored_count() < ceil_times(seven_ninths, m) {
                return Err(format!("seed {seed}: {} of {m} below 7/9", c.colored_count()));
            }
            if !contains_g3(&g) && !matches!(case, SubcubicCase::B3 | SubcubicCase::GStar5) {
                strong += 1;
                if c.colored_count() < ceil_times(thirteen_fifteenths, m) {
                    return Err(format!("seed {seed}: {} of {m} below 13/15", c.colored_count()));
                }
            }
        }
        let g = named(NamedGraph::TwoG3Bridge);
        let c = solve_subcubic(&g).map_err(|e| e.to_string())?;
        if (c.colored_count(), g.edge_count()) != (7, 9) {
            return Err(format!("two bridged G3: {} of {}", c.colored_count(), g.edge_count()));
        }
        Ok(format!("{total} graphs at 7/9, {strong} of them at 13/15, two bridged G3 gives 7 of 9"))
    };
    verdict(3, "subcubic guarantee sweep", run());
}

/// `copies` disjoint copies of `block`, `outside` extra vertices, one link
/// from every copy to the outside and random extra edges up to `limit`.
fn linked_instance(block: &MultiGraph, copies: usize, outside: usize, limit: usize, rng: &mut ChaCha8Rng) -> MultiGraph {
    let bn = block.vertex_count();
    let n = copies * bn + outside;
    let simple = block.is_simple();
    let mut pairs = Vec::new();
    for i in 0..copies {
        pairs.extend(block.edge_pairs().into_iter().map(|(u, v)| (u + i * bn, v + i * bn)));
    }
    let push = |pairs: &mut Vec<(usize, usize)>, u: usize, v: usize| {
        let p = (u.min(v), u.max(v));
        if u != v && pairs.len() < limit && (!simple || !pairs.contains(&p)) {
            pairs.push(p);
        }
    };
    for i in 0..copies {
        let u = i * bn + rng.gen_range(0..bn);
        let v = copies * bn + rng.gen_range(0..outside);
        push(&mut pairs, u, v);
    }
    let extra = rng.gen_range(0..=limit.saturating_sub(pairs.len()));
    for _ in 0..extra {
        let v = copies * bn + rng.gen_range(0..outside);
        let u = rng.gen_range(0..n);
        push(&mut pairs, u, v);
    }
    MultiGraph::new(n, &pairs, simple).unwrap()
}

#[test]
fn criterion_4_meta_ratio() {
    let run = || -> Verdict {
        let r = |a, b| Ratio::new(a, b);
        let table = [
            (Pattern::G3, 3, Some(r(7, 9)), r(4, 5)),
            (Pattern::B3, 3, Some(r(13, 15)), r(7, 8)),
            (Pattern::K(5), 4, None, r(9, 11)),
            (Pattern::K(7), 6, None, r(19, 22)),
        ];
        for (p, k, beta, gamma) in table {
            let fc = family_constants(&ExceptionFamily::new(k, &[p]).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if (fc.beta, fc.gamma) != (beta, gamma) {
                return Err(format!("{{{p}}}: β = {:?}, γ = {}", fc.beta, fc.gamma));
            }
        }

        // K7 alone has 21 edges, so its instances get a larger edge limit.
        let setups = [
            (NamedGraph::G3, 3, r(7, 9), 14, 3),
            (NamedGraph::B3, 3, r(13, 15), 14, 1),
            (NamedGraph::K(5), 4, r(9, 11), 14, 1),
            (NamedGraph::K(7), 6, r(19, 22), 25, 1),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut summary = Vec::new();
        for (tag, k, ratio, limit, max_copies) in setups {
            let block = named(tag.clone());
            let mut instances: Vec<MultiGraph> = Vec::new();
            if tag == NamedGraph::G3 {
                // G3 hanging off K3,3 by one edge.
                let mut pairs = vec![(0, 1), (0, 1), (1, 2), (2, 0), (2, 3)];
                for a in 3..6 {
                    for b in 6..9 {
                        pairs.push((a, b));
                    }
                }
                instances.push(MultiGraph::multi(9, &pairs).unwrap());
            }
            while instances.len() < 50 {
                let copies = rng.gen_range(1..=max_copies);
                let outside = rng.gen_range(1..=4);
                if copies * block.edge_count() + copies > limit {
                    continue;
                }
                instances.push(linked_instance(&block, copies, outside, limit, &mut rng));
            }
            let mut worst: Option<Ratio<i64>> = None;
            for (i, g) in instances.iter().enumerate() {
                let out = approximate(g, k).map_err(|e| format!("{tag} #{i}: {e}"))?;
                if out.guarantee != ratio {
                    return Err(format!("{tag}: guarantee {} instead of {ratio}", out.guarantee));
                }
                if !validate_coloring(g, &out.coloring).is_valid() {
                    return Err(format!("{tag} #{i}: improper coloring"));
                }
                let opt = exact_max_ecs(g, k).map_err(|e| e.to_string())?.optimum;
                if g.edge_count() <= 14 && brute_ck(g, k) != opt {
                    return Err(format!("{tag} #{i}: oracles disagree"));
                }
                let got = out.coloring.colored_count();
                if got < ceil_times(ratio, opt) {
                    return Err(format!("{tag} #{i}: {got} below {ratio} of {opt}: {:?}", g.edge_pairs()));
                }
                let q = if opt == 0 { r(1, 1) } else { r(got as i64, opt as i64) };
                worst = Some(worst.map_or(q, |w| w.min(q)));
            }
            summary.push(format!("{{{tag}}} worst {}", worst.unwrap()));
        }
        Ok(format!("β, γ exact; 200 instances; {}", summary.join(", ")))
    };
    verdict(4, "meta algorithm ratio vs oracle", run());
}

fn degrees_of(g: &MultiGraph, subset: u32) -> Vec<usize> {
    let mut d = vec![0; g.vertex_count()];
    for (i, (u, v)) in g.edge_pairs().into_iter().enumerate() {
        if subset >> i & 1 == 1 {
            d[u] += 1;
            d[v] += 1;
        }
    }
    d
}

#[test]
fn criterion_5_matching_machinery() {
    let run = || -> Verdict {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut infeasible = 0;
        for case in 0..500 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(1..=14);
            let pairs: Vec<(usize, usize)> = (0..m)
                .map(|_| {
                    let u = rng.gen_range(0..n);
                    let mut v = rng.gen_range(0..n - 1);
                    if v >= u {
                        v += 1;
                    }
                    (u, v)
                })
                .collect();
            let g = MultiGraph::multi(n, &pairs).unwrap();
            let k = rng.gen_range(1..=3);

            let best_k = (0u32..1 << m).filter(|&s| degrees_of(&g, s).iter().all(|&d| d <= k)).map(|s| s.count_ones()).max();
            let f = max_k_matching(&g, k);
            let fs: u32 = f.iter().map(|e| 1 << e.0).sum();
            if degrees_of(&g, fs).iter().any(|&d| d > k) || Some(f.len() as u32) != best_k {
                return Err(format!("case {case}: k-matching of size {} vs {best_k:?}", f.len()));
            }

            let lo: Vec<usize> = (0..n).map(|v| rng.gen_range(0..=g.degree(kecs::VertexId(v)).min(2))).collect();
            let hi: Vec<usize> = lo.iter().map(|&l| l + rng.gen_range(0..=2)).collect();
            let weights: Vec<Ratio<i64>> =
                (0..m).map(|_| Ratio::new(rng.gen_range(0..=12), rng.gen_range(1..=4))).collect();
            let inst = FactorInstance { graph: g.clone(), bounds: DegreeBounds { f: lo.clone(), g: hi.clone() }, weights };
            let mut best: Option<Ratio<i64>> = None;
            for s in 0u32..1 << m {
                let d = degrees_of(&g, s);
                if (0..n).all(|v| lo[v] <= d[v] && d[v] <= hi[v]) {
                    let edges: Vec<EdgeId> = (0..m).filter(|i| s >> i & 1 == 1).map(EdgeId).collect();
                    let w = inst.weight_of(&edges);
                    best = Some(best.map_or(w, |b| b.max(w)));
                }
            }
            match (max_weight_fg_factor(&inst), best) {
                (Ok(edges), Some(b)) => {
                    if !inst.is_factor(&edges) || inst.weight_of(&edges) != b {
                        return Err(format!("case {case}: factor weight {} vs {b}", inst.weight_of(&edges)));
                    }
                }
                (Err(FactorError::Infeasible), None) => infeasible += 1,
                (got, want) => return Err(format!("case {case}: got {got:?}, exhaustive {want:?}")),
            }
        }
        Ok(format!("500 instances agree with exhaustive search ({infeasible} infeasible factor instances)"))
    };
    verdict(5, "matching machinery", run());
}

#[test]
fn criterion_6_potential_monotone_and_fixpoints() {
    let run = || -> Verdict {
        let mut runs = 0;
        let mut moves = 0;
        let mut seed = 0u64;
        while runs < 1000 {
            seed += 1;
            let delta = 3 + (seed % 5) as usize;
            let n = delta + 2 + (seed % 17) as usize;
            let density = Ratio::new(4 + (seed % 7) as i64, 10);
            let Ok(g) = gen_random_bounded_degree(n, delta, density, seed) else { continue };
            runs += 1;
            let d = g.max_degree();
            let run = maximize_psi_with(&g, &PsiOptions { trace: true, ..PsiOptions::default() })
                .map_err(|e| format!("seed {seed}: {e}"))?;
            for mv in &run.trace {
                moves += 1;
                if mv.before >= mv.after {
                    return Err(format!("seed {seed}: {:?} did not raise the potential", mv.kind));
                }
            }
            for (_, q) in free_components(&run.coloring).nontrivial() {
                if q.edges.len() > d / 2 {
                    return Err(format!("seed {seed}: free component with {} edges at Δ={d}", q.edges.len()));
                }
                let mut seen = ColorSet::EMPTY;
                for &v in &q.vertices {
                    let f = run.coloring.free(v);
                    if !seen.intersection(f).is_empty() {
                        return Err(format!("seed {seed}: free sets overlap in a component"));
                    }
                    seen = seen.union(f);
                }
            }
        }
        Ok(format!("{runs} runs, {moves} moves, all strictly increasing; fixpoints well-formed"))
    };
    verdict(6, "potential monotonicity and fixpoint structure", run());
}

#[test]
fn criterion_7_clique_colorings() {
    let run = || -> Verdict {
        for k in [3, 5, 7] {
            let (g, c) = clique_color(k + 1, k).map_err(|e| e.to_string())?;
            if !validate_coloring(&g, &c).is_valid() || c.colored_count() != g.edge_count() {
                return Err(format!("K{} not fully {k}-colored", k + 1));
            }
        }
        for k in [4, 6] {
            let (g, c) = clique_color(k + 1, k).map_err(|e| e.to_string())?;
            if !validate_coloring(&g, &c).is_valid() || c.colored_count() != k * k / 2 {
                return Err(format!("K{}: {} colored", k + 1, c.colored_count()));
            }
            let mut hit = vec![false; g.vertex_count()];
            for e in c.uncolored_edges() {
                let (a, b) = g.endpoints(e);
                if hit[a.0] || hit[b.0] {
                    return Err(format!("K{}: uncolored edges are not a matching", k + 1));
                }
                hit[a.0] = true;
                hit[b.0] = true;
            }
            let free: Vec<ColorSet> = g.vertices().map(|v| c.free(v)).collect();
            for i in 0..free.len() {
                for j in i + 1..free.len() {
                    if free[i] == free[j] {
                        return Err(format!("K{}: vertices {i} and {j} have equal free sets", k + 1));
                    }
                }
            }
        }
        Ok("K4, K6, K8 fully colored; K5, K7 have k²/2 colored, a matching left, distinct free sets".into())
    };
    verdict(7, "clique colorings", run());
}

#[test]
fn criterion_8_preimages() {
    let run = || -> Verdict {
        for tag in [NamedGraph::B3, NamedGraph::GStar5] {
            let pre = triangle_preimages(&named(tag.clone()));
            if pre.len() != 3 {
                return Err(format!("{tag}: {} preimages", pre.len()));
            }
            for (i, h) in pre.iter().enumerate() {
                if h.max_degree() > 3 || h.edge_count() != 10 || brute_ck(h, 3) != 9 {
                    return Err(format!("{tag} preimage {i}: {} edges, Δ {}", h.edge_count(), h.max_degree()));
                }
                if exact_max_ecs(h, 3).map_err(|e| e.to_string())?.optimum != 9 {
                    return Err(format!("{tag} preimage {i}: oracle disagrees"));
                }
                for other in &pre[..i] {
                    if are_isomorphic(h, other) {
                        return Err(format!("{tag}: isomorphic preimages"));
                    }
                }
            }
        }
        Ok("B3 and G5* each have 3 distinct preimages with 10 edges and c_3 = 9".into())
    };
    verdict(8, "triangle preimages", run());
}
