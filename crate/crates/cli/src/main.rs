mod bench;
mod report;
mod solve;

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kecs::coloring::{validate_coloring, PartialColoring};
use kecs::format::{parse_graph, write_graph};
use kecs::gen::{gen_named, gen_random_bounded_degree, gen_random_bounded_degree_multi, NamedGraph};
use kecs::oracle::{exact_max_ecs_with_cap, DEFAULT_EDGE_CAP};
use kecs::MultiGraph;
use num_rational::Ratio;
use serde::Serialize;

use crate::report::{fraction, ratio};
use crate::solve::{FamilyChoice, SolveOptions, Strategy};

/// Exit status when a run colors fewer edges than its guarantee.
const GUARANTEE_VIOLATED: u8 = 2;

#[derive(Parser)]
#[command(name = "kecs", version, about = "Large k-edge-colorable subgraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print progress and summaries to stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Args)]
struct Common {
    /// Number of colors.
    #[arg(short = 'k')]
    k: usize,
    /// Graph file; standard input when omitted or `-`.
    graph: Option<PathBuf>,
    /// Largest edge count the exact oracle is run on.
    #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
    cap: usize,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Color a large k-edge-colorable subgraph.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "meta")]
        strategy: Strategy,
        /// Exception family for the meta strategy; defaults to the standard one for k.
        #[arg(long, value_enum)]
        family: Option<FamilyChoice>,
        /// Write the coloring here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Exact maximum k-edge-colorable subgraph size.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Write the witness coloring here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact ratio c_k / |E| as p/q.
    Gamma {
        #[command(flatten)]
        common: Common,
    },
    /// Write a named or random graph.
    Gen {
        /// Named graph: G3, B3, Gstar5, petersen, K<n>, K<n>-e, B(<odd>), two-g3-bridge, ...
        #[arg(long, conflicts_with = "random")]
        named: Option<String>,
        /// Random connected graph `n,delta,density` with density as p/q or an integer.
        #[arg(long)]
        random: Option<String>,
        /// Allow parallel edges in random graphs.
        #[arg(long)]
        multi: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ratio table over a seeded random corpus for k = 3..7.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per row.
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that a coloring file is proper for a graph.
    Verify {
        #[arg(short = 'k')]
        k: usize,
        graph: PathBuf,
        coloring: PathBuf,
    },
}

fn read_input(path: Option<&Path>) -> Result<String> {
    let mut s = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        _ => {
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
        }
    }
    Ok(s)
}

fn read_graph(path: Option<&Path>) -> Result<MultiGraph> {
    Ok(parse_graph(&read_input(path)?)?)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactReport {
    schema_version: u32,
    k: usize,
    m: usize,
    optimum: usize,
    gamma: String,
    nodes: u64,
}

fn exact(common: &Common) -> Result<(kecs::oracle::OracleResult, ExactReport)> {
    let g = read_graph(common.graph.as_deref())?;
    let r = exact_max_ecs_with_cap(&g, common.k, common.cap)?;
    let report = ExactReport {
        schema_version: report::SCHEMA_VERSION,
        k: common.k,
        m: g.edge_count(),
        optimum: r.optimum,
        gamma: ratio(r.gamma),
        nodes: r.nodes,
    };
    Ok((r, report))
}

fn parse_density(s: &str) -> Result<Ratio<i64>> {
    let r = match s.split_once('/') {
        Some((p, q)) => Ratio::new(p.trim().parse()?, q.trim().parse()?),
        None => Ratio::from_integer(s.trim().parse()?),
    };
    Ok(r)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { common, strategy, family, output, timing } => {
            let g = read_graph(common.graph.as_deref())?;
            let opts = SolveOptions { k: common.k, strategy, family, cap: common.cap, timing };
            let (coloring, report) = solve::solve(&g, &opts)?;
            emit(output.as_deref(), &coloring.to_lines())?;
            write_json(common.json.as_deref(), &report)?;
            if cli.verbose {
                eprintln!(
                    "{}: colored {} of {} ({}), guarantee {}, optimum {}",
                    report.strategy,
                    report.colored,
                    report.instance.m,
                    report.fraction,
                    report.guarantee.as_deref().unwrap_or("none"),
                    report.oracle_optimum.map_or("-".to_string(), |o| o.to_string()),
                );
            }
            if report.guarantee_met == Some(false) {
                let required = report.required.unwrap();
                if report.colored < required {
                    eprintln!("guarantee violated: colored {} < required {required}", report.colored);
                } else {
                    eprintln!("guarantee violated: the core solver missed its ratio on a component");
                }
                return Ok(ExitCode::from(GUARANTEE_VIOLATED));
            }
        }
        Command::Oracle { common, output } => {
            let (r, report) = exact(&common)?;
            println!("{}", r.optimum);
            if let Some(p) = output {
                emit(Some(&p), &r.witness.to_lines())?;
            }
            if cli.verbose {
                eprintln!("{} search nodes", r.nodes);
            }
            write_json(common.json.as_deref(), &report)?;
        }
        Command::Gamma { common } => {
            let (_, report) = exact(&common)?;
            println!("{}", report.gamma);
            write_json(common.json.as_deref(), &report)?;
        }
        Command::Gen { named, random, multi, seed, output } => {
            let g = match (named, random) {
                (Some(tag), _) => gen_named(&tag.parse::<NamedGraph>()?)?,
                (None, Some(arg)) => {
                    let parts: Vec<&str> = arg.split(',').collect();
                    if parts.len() != 3 {
                        bail!("--random expects n,delta,density");
                    }
                    let (n, delta, density) = (parts[0].trim().parse()?, parts[1].trim().parse()?, parse_density(parts[2])?);
                    if multi {
                        gen_random_bounded_degree_multi(n, delta, density, seed)?
                    } else {
                        gen_random_bounded_degree(n, delta, density, seed)?
                    }
                }
                (None, None) => bail!("gen needs --named or --random"),
            };
            emit(output.as_deref(), &write_graph(&g))?;
        }
        Command::Bench { seed, count, json } => {
            let threads = std::env::var("KECS_THREADS")
                .ok()
                .and_then(|t| t.parse().ok())
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let (table, violations) = bench::run(&bench::BenchOptions { seed, count, threads })?;
            print!("{table}");
            #[derive(Serialize)]
            struct BenchReport {
                schema_version: u32,
                seed: u64,
                count: usize,
                table: String,
                violations: usize,
            }
            write_json(
                json.as_deref(),
                &BenchReport { schema_version: report::SCHEMA_VERSION, seed, count, table, violations },
            )?;
            if violations > 0 {
                return Ok(ExitCode::from(GUARANTEE_VIOLATED));
            }
        }
        Command::Verify { k, graph, coloring } => {
            let g = read_graph(Some(&graph))?;
            let c = PartialColoring::from_lines(&g, k, &read_input(Some(&coloring))?)?;
            let v = validate_coloring(&g, &c);
            if !v.is_valid() {
                bail!("coloring is not proper: {}", v.problems.join("; "));
            }
            println!("valid: {} of {} edges colored ({})", c.colored_count(), g.edge_count(), fraction(c.colored_count(), g.edge_count()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
