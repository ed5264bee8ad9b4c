use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adversary::{colour_with, Adversary, AdversarySpec};
use crate::error::{Error, Result};
use crate::pattern::PatternStats;
use crate::sample::{derive_seed, sample_gnp, threshold_probability};
use crate::search::work_estimate;
use crate::tiling::{extract_tiling, extraction_target, ExtractConfig};

pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub pattern: String,
    pub ns: Vec<usize>,
    pub cs: Vec<f64>,
    pub epsilon: f64,
    pub trials: usize,
    pub seed_base: u64,
    pub adversaries: Vec<Adversary>,
    pub eta: Option<f64>,
    /// Adds a wall-time column; off by default so output is reproducible.
    pub timing: bool,
    /// Refuse plans whose summed `n^k` estimate exceeds this.
    pub work_ceiling: u128,
    pub workers: Option<usize>,
}

impl SweepPlan {
    pub fn new(pattern: impl Into<String>, ns: Vec<usize>, cs: Vec<f64>, epsilon: f64, trials: usize, seed_base: u64) -> Self {
        Self {
            pattern: pattern.into(),
            ns,
            cs,
            epsilon,
            trials,
            seed_base,
            adversaries: vec![Adversary::UniformRandom],
            eta: None,
            timing: false,
            work_ceiling: 1 << 40,
            workers: None,
        }
    }

    pub fn cells(&self) -> usize {
        self.ns.len() * self.cs.len() * self.adversaries.len()
    }

    pub fn trial_seed(&self, n: usize, c: f64, adversary: usize, trial: usize) -> u64 {
        derive_seed(&[self.seed_base, n as u64, c.to_bits(), adversary as u64, trial as u64])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub adversary: String,
    pub trial: usize,
    pub seed: u64,
    pub edges: usize,
    pub achieved: usize,
    pub target: i64,
    pub success: bool,
    pub probe_failures: usize,
    pub colour: String,
    pub wall_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellAggregate {
    pub n: usize,
    pub c: f64,
    pub adversary: String,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub plan: SweepPlan,
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<CellAggregate>,
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    // Rounding can leave an endpoint a hair on the wrong side of p at 0 or 1.
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Runs every (n, C, adversary, trial) task, concurrently up to
/// `plan.workers`; rows come back in canonical order regardless of completion
/// order. A trial that errors becomes a row with `error` set.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    let pattern = PatternStats::parse(&plan.pattern)?;
    if plan.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(plan.epsilon > 0.0 && plan.epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {}", plan.epsilon)));
    }
    if let Some(c) = plan.cs.iter().find(|c| !(**c > 0.0)) {
        return Err(Error::InvalidArgument(format!("threshold constant {c} must be positive")));
    }
    let estimate = plan.ns.iter().fold(0u128, |acc, &n| {
        let per = work_estimate(n, pattern.k()).saturating_mul((plan.trials * plan.cs.len() * plan.adversaries.len()) as u128);
        acc.saturating_add(per)
    });
    if estimate > plan.work_ceiling {
        return Err(Error::BudgetExceeded {
            what: "sweep",
            estimate,
            budget: plan.work_ceiling,
        });
    }

    let mut tasks = Vec::with_capacity(plan.cells() * plan.trials);
    for &n in &plan.ns {
        for &c in &plan.cs {
            for a in 0..plan.adversaries.len() {
                for t in 0..plan.trials {
                    tasks.push((n, c, a, t));
                }
            }
        }
    }
    let run = || -> Vec<SweepRow> {
        tasks
            .par_iter()
            .map(|&(n, c, a, t)| run_trial(plan, &pattern, n, c, a, t))
            .collect()
    };
    let rows = match plan.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(run),
        None => run(),
    };
    let aggregates = aggregate(&rows, plan.trials);
    Ok(SweepResult {
        plan: plan.clone(),
        rows,
        aggregates,
    })
}

fn run_trial(plan: &SweepPlan, pattern: &PatternStats, n: usize, c: f64, a: usize, trial: usize) -> SweepRow {
    let start = plan.timing.then(Instant::now);
    let seed = plan.trial_seed(n, c, a, trial);
    let p = threshold_probability(n, c, pattern);
    let target = extraction_target(n, pattern, plan.epsilon);
    let adversary = &plan.adversaries[a];
    let mut row = SweepRow {
        n,
        c,
        p,
        adversary: adversary.name().to_string(),
        trial,
        seed,
        edges: 0,
        achieved: 0,
        target,
        success: false,
        probe_failures: 0,
        colour: String::new(),
        wall_ms: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let g = sample_gnp(n, p, derive_seed(&[seed, 0]))?;
        row.edges = g.edge_count();
        let coloured = colour_with(&g, &AdversarySpec::new(adversary.clone(), derive_seed(&[seed, 1])), pattern)?;
        let mut cfg = ExtractConfig::new(plan.epsilon, seed);
        cfg.eta = plan.eta;
        let (tiling, report) = extract_tiling(&coloured, pattern, &cfg)?;
        row.achieved = tiling.len();
        row.probe_failures = report.probe_failures;
        row.colour = report.colour.to_string();
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row.success = row.error.is_none() && row.achieved as i64 >= row.target;
    row.wall_ms = start.map(|s| s.elapsed().as_secs_f64() * 1e3);
    row
}

fn aggregate(rows: &[SweepRow], trials: usize) -> Vec<CellAggregate> {
    rows.chunks(trials)
        .map(|cell| {
            let successes = cell.iter().filter(|r| r.success).count();
            let (wilson_low, wilson_high) = wilson_interval(successes, cell.len());
            CellAggregate {
                n: cell[0].n,
                c: cell[0].c,
                adversary: cell[0].adversary.clone(),
                trials: cell.len(),
                successes,
                frequency: successes as f64 / cell.len() as f64,
                wilson_low,
                wilson_high,
            }
        })
        .collect()
}

impl SweepResult {
    /// Rows, then one `#`-prefixed aggregate line per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# rtile sweep csv schema {CSV_SCHEMA_VERSION}; pattern={} epsilon={} trials={} seed_base={}",
            self.plan.pattern, self.plan.epsilon, self.plan.trials, self.plan.seed_base
        );
        let mut header = "n,c,p,adversary,trial,seed,edges,achieved,target,success,probe_failures,colour".to_string();
        if self.plan.timing {
            header.push_str(",wall_ms");
        }
        header.push_str(",error");
        let _ = writeln!(out, "{header}");
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.n, r.c, r.p, r.adversary, r.trial, r.seed, r.edges, r.achieved, r.target, r.success, r.probe_failures, r.colour
            );
            if self.plan.timing {
                let _ = write!(out, ",{:.3}", r.wall_ms.unwrap_or(0.0));
            }
            let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
            let _ = writeln!(out, ",{err}");
        }
        let _ = writeln!(out, "# aggregate,n,c,adversary,trials,successes,frequency,wilson_low,wilson_high");
        for a in &self.aggregates {
            let _ = writeln!(
                out,
                "# aggregate,{},{},{},{},{},{:.6},{:.6},{:.6}",
                a.n, a.c, a.adversary, a.trials, a.successes, a.frequency, a.wilson_low, a.wilson_high
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(10, 10);
        assert!(lo > 0.69 && hi == 1.0);
        let (lo, hi) = wilson_interval(0, 10);
        assert!(lo == 0.0 && hi < 0.31);
    }

    #[test]
    fn empty_n_list_gives_header_only() {
        let plan = SweepPlan::new("k3", vec![], vec![1.0], 0.1, 2, 0);
        let r = run_sweep(&plan).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.to_csv().lines().filter(|l| !l.starts_with('#')).count(), 1);
    }

    #[test]
    fn rows_and_aggregates_line_up() {
        let mut plan = SweepPlan::new("k3", vec![12, 15], vec![0.5, 100.0], 0.2, 3, 9);
        plan.adversaries = Adversary::all();
        let r = run_sweep(&plan).unwrap();
        assert_eq!(r.rows.len(), plan.cells() * plan.trials);
        assert_eq!(r.aggregates.len(), plan.cells());
        for row in &r.rows {
            assert_eq!(row.success, row.achieved as i64 >= row.target);
        }
    }

    #[test]
    fn over_ceiling_is_refused() {
        let mut plan = SweepPlan::new("k3", vec![1000], vec![1.0], 0.1, 10, 0);
        plan.work_ceiling = 1000;
        assert!(matches!(run_sweep(&plan), Err(Error::BudgetExceeded { .. })));
    }
}
