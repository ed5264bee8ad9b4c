use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rtile::experiment::{
    colour_with, generate_fixtures, run_sweep, standard_fixture_requests, verify_fixtures, Adversary, AdversarySpec,
    SweepPlan,
};
use rtile::oracles::{aux_degree_check, build_aux_hypergraph, exact_rt, good_copy_count};
use rtile::sample::{sample_gnp, threshold_probability};
use rtile::tiling::{extract_tiling, ExtractConfig, ProbeOrder};
use rtile::{ColouredGraph, Error, Graph, PatternStats, VertexSet};

#[derive(Parser)]
#[command(name = "rtile", version, about = "Monochromatic H-tilings of 2-coloured random graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Work limit for exhaustive oracles (colourings, n^k estimates).
    #[arg(long, global = true, default_value_t = 1u128 << 40)]
    budget: u128,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p); p is given directly or as C·n^(−1/max(m2(H), 1)).
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "c")]
        p: Option<f64>,
        #[arg(long, requires = "pattern")]
        c: Option<f64>,
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Colour a graph file with one of the adversaries.
    Colour {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "uniform-random")]
        adversary: String,
        /// Pattern the copy avoider steers away from.
        #[arg(long, default_value = "k3")]
        pattern: String,
        /// Explicit red part for planted-partition.
        #[arg(long, value_delimiter = ',')]
        part: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.2)]
        fraction: f64,
    },
    /// Extract a monochromatic tiling from a coloured graph file.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        eta: Option<f64>,
        /// Randomise which probe runs first in each round.
        #[arg(long)]
        randomized_probes: bool,
    },
    /// Exact Rt(H, G) by colouring enumeration.
    RtExact {
        #[arg(long)]
        pattern: String,
        /// Use K_n as the host.
        #[arg(long, conflicts_with = "graph")]
        complete: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Count (A, B)-good copies; B is the complement of A.
    GoodCount {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
    },
    /// Build the auxiliary hypergraph on K_n and check its degree bounds.
    AuxCheck {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        /// Side A; defaults to the first half of the vertices.
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<usize>>,
    },
    /// Threshold sweep over n, C and adversaries.
    Sweep {
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Comma-separated adversary names, or `all`.
        #[arg(long, default_value = "uniform-random")]
        adversaries: String,
        #[arg(long)]
        eta: Option<f64>,
        /// Add a wall-time column (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Recompute every cached oracle fixture in a directory.
    VerifyFixtures { dir: PathBuf },
    /// Write the standard fixture corpus to a directory.
    GenFixtures { dir: PathBuf },
}

enum Failure {
    Usage(String),
    Budget(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::FixtureMismatch(_) => Failure::Mismatch(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let text = match cli.command {
        Command::Sample { n, p, c, pattern } => {
            let p = match (p, c) {
                (Some(p), _) => p,
                (None, Some(c)) => threshold_probability(n, c, &PatternStats::parse(pattern.as_deref().unwrap_or("k3"))?),
                (None, None) => return Err(Failure::Usage("give --p or --c with --pattern".into())),
            };
            let graph = sample_gnp(n, p, g.seed)?;
            match g.format {
                Format::Csv => graph.to_text(),
                Format::Json => pretty(&json!({"n": graph.n(), "p": p, "edges": graph.edges().collect::<Vec<_>>()}))?,
            }
        }
        Command::Colour {
            graph,
            adversary,
            pattern,
            part,
            fraction,
        } => {
            let host = Graph::from_text(&read(&graph)?)?;
            let mut adv: Adversary = adversary.parse()?;
            if let Adversary::PlantedPartition { part: p, fraction: f } = &mut adv {
                *p = part;
                *f = fraction;
            }
            let coloured = colour_with(&host, &AdversarySpec::new(adv, g.seed), &PatternStats::parse(&pattern)?)?;
            match g.format {
                Format::Csv => coloured.to_text(),
                Format::Json => pretty(&json!({
                    "n": coloured.n(),
                    "edges": coloured.edges().map(|(u, v, c)| json!([u, v, c])).collect::<Vec<_>>(),
                }))?,
            }
        }
        Command::Extract {
            graph,
            pattern,
            epsilon,
            eta,
            randomized_probes,
        } => {
            let host = ColouredGraph::from_text(&read(&graph)?)?;
            let h = PatternStats::parse(&pattern)?;
            let mut cfg = ExtractConfig::new(epsilon, g.seed);
            cfg.eta = eta;
            if randomized_probes {
                cfg.probe_order = ProbeOrder::Randomized;
            }
            let (tiling, report) = extract_tiling(&host, &h, &cfg)?;
            match g.format {
                Format::Json => pretty(&json!({"report": report, "tiling": tiling}))?,
                Format::Csv => {
                    let Value::Object(fields) = serde_json::to_value(&report)? else {
                        unreachable!("reports serialise to objects")
                    };
                    let header: Vec<&str> = fields.keys().map(String::as_str).collect();
                    let row: Vec<String> = fields.values().map(csv_cell).collect();
                    format!("{}\n{}\n", header.join(","), row.join(","))
                }
            }
        }
        Command::RtExact { pattern, complete, graph } => {
            let host = match (complete, graph) {
                (Some(n), _) => Graph::complete(n),
                (None, Some(path)) => Graph::from_text(&read(&path)?)?,
                (None, None) => return Err(Failure::Usage("give --complete N or --graph FILE".into())),
            };
            let h = PatternStats::parse(&pattern)?;
            let v = exact_rt(&h, &host, g.budget)?;
            match g.format {
                Format::Json => pretty(&json!({"pattern": h.name(), "n": host.n(), "rt": v}))?,
                Format::Csv => match v {
                    rtile::oracles::RtValue::Exact(x) => format!("pattern,n,lower,upper\n{},{},{x},{x}\n", h.name(), host.n()),
                    rtile::oracles::RtValue::Bracket { lower, upper } => {
                        format!("pattern,n,lower,upper\n{},{},{lower},{upper}\n", h.name(), host.n())
                    }
                },
            }
        }
        Command::GoodCount { graph, pattern, a } => {
            let host = ColouredGraph::from_text(&read(&graph)?)?;
            let n = host.n();
            let a = side(n, &a)?;
            let b = VertexSet::full(n).difference(&a);
            let count = good_copy_count(&host, &PatternStats::parse(&pattern)?, &a, &b, g.budget)?;
            match g.format {
                Format::Json => pretty(&json!({"count": count, "a": a.to_vec(), "b": b.to_vec()}))?,
                Format::Csv => format!("count\n{count}\n"),
            }
        }
        Command::AuxCheck { pattern, n, a } => {
            let h = PatternStats::parse(&pattern)?;
            let a = side(n, &a.unwrap_or_else(|| (0..n / 2).collect()))?;
            let b = VertexSet::full(n).difference(&a);
            let aux = build_aux_hypergraph(n, &a, &b, &h, g.budget)?;
            let report = aux_degree_check(&aux, &h);
            match g.format {
                Format::Json => pretty(&report)?,
                Format::Csv => {
                    let mut s = String::from("j,max_degree,bound,pass\n");
                    for r in &report.rows {
                        s.push_str(&format!("{},{},{},{}\n", r.j, r.max_degree, r.bound, r.pass));
                    }
                    s.push_str(&format!(
                        "# hyperedges={} edge_bound={} uniform={} colour_consistent={} refined_single_pass={} all_pass={}\n",
                        report.hyperedges,
                        report.edge_count_bound,
                        report.uniform,
                        report.colour_consistent,
                        report.refined_single_pass,
                        report.all_pass()
                    ));
                    s
                }
            }
        }
        Command::Sweep {
            pattern,
            n,
            c,
            epsilon,
            trials,
            adversaries,
            eta,
            timing,
        } => {
            let mut plan = SweepPlan::new(pattern, n, c, epsilon, trials, g.seed);
            plan.adversaries = if adversaries == "all" {
                Adversary::all()
            } else {
                adversaries.split(',').map(str::parse).collect::<Result<_, _>>()?
            };
            plan.eta = eta;
            plan.timing = timing;
            plan.work_ceiling = g.budget;
            plan.workers = g.workers;
            let result = run_sweep(&plan)?;
            match g.format {
                Format::Csv => result.to_csv(),
                Format::Json => pretty(&result)?,
            }
        }
        Command::VerifyFixtures { dir } => {
            let report = verify_fixtures(&dir, g.budget)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let summary = match g.format {
                Format::Json => pretty(&report)?,
                Format::Csv => format!(
                    "checked,mismatches\n{},{}\n{}",
                    report.checked,
                    report.mismatches.len(),
                    report.mismatches.iter().map(|m| format!("# {m}\n")).collect::<String>()
                ),
            };
            emit(g.out.as_deref(), &summary)?;
            if !report.passed() {
                return Err(Error::FixtureMismatch(report.mismatches).into());
            }
            return Ok(());
        }
        Command::GenFixtures { dir } => {
            let paths = generate_fixtures(&dir, standard_fixture_requests(), g.budget)?;
            paths.iter().map(|p| format!("{}\n", p.display())).collect()
        }
    };
    emit(g.out.as_deref(), &text)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn side(n: usize, vs: &[usize]) -> Result<VertexSet, Failure> {
    if let Some(v) = vs.iter().find(|&&v| v >= n) {
        return Err(Failure::Usage(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(VertexSet::from_vertices(n, vs.iter().copied()))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
