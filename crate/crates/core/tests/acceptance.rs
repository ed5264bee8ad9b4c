//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; any failure makes the binary exit 1.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;

use common::{graph_from_mask, is_connected, isomorphism_classes, planted, tiling_is_valid, Cross};
use rtile::experiment::{colour_with, run_sweep, Adversary, AdversarySpec, SweepPlan};
use rtile::oracles::{
    aux_degree_check, build_aux_hypergraph, clique_supersat_count, exact_rt, good_copies_between, good_copy_count,
    naive_m2_density, RtValue,
};
use rtile::pattern::m2_density;
use rtile::sample::{derive_seed, rng_from_seed, shuffle};
use rtile::tiling::{
    cluster_process, extract_tiling, richness_probe, verify_cluster, ClusterOutcome, ExtractConfig, FailureReason,
    ProbeOrder, ProcessConfig, StepKind,
};
use rtile::{ColouredGraph, Colour, Graph, PatternStats, VertexSet};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn m2_oracle() -> Result<String, String> {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=5).map(|n| isomorphism_classes(n).len()).collect();
    ensure(counts == [1, 2, 4, 11, 34], || format!("class counts {counts:?}"))?;
    let six = isomorphism_classes(6);
    let connected_six = six.iter().filter(|&&m| is_connected(&graph_from_mask(6, m))).count();
    ensure(six.len() == 156 && connected_six == 112, || {
        format!("6-vertex classes {} connected {}", six.len(), connected_six)
    })?;

    let mut checked = 0;
    for n in 1..=6 {
        for &mask in isomorphism_classes(n).iter() {
            let g = graph_from_mask(n, mask);
            let fast = m2_density(&g).map_err(|e| e.to_string())?;
            let naive = naive_m2_density(&g);
            ensure(fast == naive, || format!("n={n} mask={mask:#x}: {fast} vs {naive}"))?;
            let matching = (0..n).all(|v| g.degree(v) <= 1);
            ensure((fast >= Ratio::from_integer(1)) == !matching, || format!("n={n} mask={mask:#x}: m2={fast}"))?;
            checked += 1;
        }
    }
    for (t, want) in [(2, Ratio::new(1, 2)), (3, Ratio::new(2, 1)), (4, Ratio::new(5, 2))] {
        let got = m2_density(&Graph::complete(t)).unwrap();
        ensure(got == want, || format!("K{t}: {got} != {want}"))?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{checked} classes on <= 6 vertices (52 on <= 5, 112 connected on 6)"))
}

fn rt_fixtures() -> Result<String, String> {
    let start = Instant::now();
    let cases = [(2, 3, 1), (3, 5, 0), (3, 6, 1)];
    for (h, n, want) in cases {
        let got = exact_rt(&PatternStats::clique(h), &Graph::complete(n), 1 << 20).map_err(|e| e.to_string())?;
        ensure(got == RtValue::Exact(want), || format!("Rt(K{h}, K{n}) = {got:?}, want {want}"))?;
    }
    within(Duration::from_secs(60), start)?;
    Ok("Rt(K2,K3)=1 Rt(K3,K5)=0 Rt(K3,K6)=1".into())
}

fn aux_degrees() -> Result<String, String> {
    let start = Instant::now();
    let mut reports = 0;
    for name in ["k3", "p4"] {
        let pattern = PatternStats::parse(name).map_err(|e| e.to_string())?;
        for n in [6, 8, 10] {
            let first_half = VertexSet::from_vertices(n, 0..n / 2);
            let mut order: Vec<usize> = (0..n).collect();
            shuffle(&mut order, &mut rng_from_seed(n as u64));
            let random_half = VertexSet::from_vertices(n, order[..n / 2].iter().copied());
            for a in [first_half, random_half] {
                let b = VertexSet::full(n).difference(&a);
                let aux = build_aux_hypergraph(n, &a, &b, &pattern, 1 << 30).map_err(|e| e.to_string())?;
                let report = aux_degree_check(&aux, &pattern);
                ensure(report.all_pass(), || format!("{name} n={n}: {report:?}"))?;
                reports += 1;
            }
        }
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{reports} hypergraphs, zero violations"))
}

fn process_invariants() -> Result<String, String> {
    let k3 = PatternStats::clique(3);
    let (k, alpha) = (3usize, 1usize);
    let families: [(usize, Cross, &[f64]); 6] = [
        (24, Cross::Random, &[0.3, 0.35, 0.45]),
        (48, Cross::Random, &[0.21, 0.25, 0.3]),
        (24, Cross::XLabel, &[0.21, 0.3]),
        (48, Cross::XLabel, &[0.15, 0.18, 0.25]),
        (24, Cross::YLabel, &[0.21, 0.3]),
        (48, Cross::YLabel, &[0.15, 0.18, 0.25]),
    ];
    let results: Vec<Result<(bool, bool), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let (s, cross, etas) = families[i as usize % families.len()];
            let eta = etas[(i as usize / families.len()) % etas.len()];
            let p = planted(s, cross, derive_seed(&[4, i]));
            let mut cfg = ProcessConfig::new(eta, derive_seed(&[4, i, 1]));
            if i % 2 == 1 {
                cfg.probe_order = ProbeOrder::Randomized;
            }
            let out = cluster_process(&p.host, &k3, &p.x, &p.y, &p.blue_x, &p.red_y, &cfg).map_err(|e| e.to_string())?;
            let tr = out.trace();
            let fail = |m: String| format!("instance {i} (s={s} {cross:?} eta={eta}): {m}");
            for st in &tr.steps {
                let lhs_x = tr.x1_len as i64 - st.ax_len as i64;
                let rhs_x = (k * st.t_x) as i64 - st.y_star_len as i64 + st.blue_removed_from_ax as i64;
                ensure(lhs_x == rhs_x, || fail(format!("X identity {lhs_x} != {rhs_x}")))?;
                let lhs_y = tr.y1_len as i64 - st.ay_len as i64;
                let rhs_y = (k * st.t_y) as i64 - st.x_star_len as i64 + st.red_removed_from_ay as i64;
                ensure(lhs_y == rhs_y, || fail(format!("Y identity {lhs_y} != {rhs_y}")))?;
                let cross_removed = match st.kind {
                    StepKind::RedHitsW => st.removed_from_ay,
                    StepKind::BlueHitsU => st.removed_from_ax,
                };
                ensure(cross_removed <= k - alpha, || fail(format!("round removed {cross_removed} from the far pool")))?;
                ensure(st.y_star_len <= (k - alpha) * st.t_x && st.x_star_len <= (k - alpha) * st.t_y, || {
                    fail("star set outgrew its rounds".into())
                })?;
            }
            if let Some(sc) = tr.size_check {
                ensure(sc.closed_form == sc.t_len as i64, || fail(format!("closed form {} vs |T| {}", sc.closed_form, sc.t_len)))?;
                ensure(sc.t_len < sc.upper_bound, || fail(format!("|T| {} >= {}", sc.t_len, sc.upper_bound)))?;
                let unrounded = tr.s as f64 - (alpha * tr.s) as f64 / (2 * k) as f64 + eta * eta * tr.s as f64;
                ensure((sc.t_len as f64) < unrounded, || fail(format!("|T| {} >= {unrounded}", sc.t_len)))?;
            }
            match &out {
                ClusterOutcome::Success { certificate, .. } => {
                    ensure(verify_cluster(&p.host, &k3, certificate), || fail("certificate rejected".into()))?;
                    Ok((true, tr.size_check.is_some()))
                }
                ClusterOutcome::Failure(report) => {
                    ensure(report.reason != FailureReason::ProbeExhausted, || fail("probe exhausted on a rich host".into()))?;
                    Ok((false, tr.size_check.is_some()))
                }
            }
        })
        .collect();
    let mut successes = 0;
    let mut balanced = 0;
    for r in results {
        let (ok, sized) = r?;
        successes += ok as usize;
        balanced += sized as usize;
    }
    ensure(successes > 0, || "no instance succeeded".into())?;
    Ok(format!("1000 instances, {successes} certified, {balanced} balanced-case size checks"))
}

fn complete_host_extraction() -> Result<String, String> {
    let start = Instant::now();
    let k3 = PatternStats::clique(3);
    let host = Graph::complete(50);
    let runs: Vec<(Adversary, u64)> = Adversary::all().into_iter().flat_map(|a| (0..25).map(move |s| (a.clone(), s))).collect();
    let sizes: Vec<Result<usize, String>> = runs
        .par_iter()
        .map(|(adv, seed)| {
            let g = colour_with(&host, &AdversarySpec::new(adv.clone(), *seed), &k3).map_err(|e| e.to_string())?;
            let (tiling, report) = extract_tiling(&g, &k3, &ExtractConfig::new(0.1, *seed)).map_err(|e| e.to_string())?;
            tiling_is_valid(&g, &k3, &tiling).map_err(|e| format!("{adv} seed {seed}: {e}"))?;
            ensure(report.target_size == 5, || format!("target {}", report.target_size))?;
            ensure(tiling.len() >= 5, || format!("{adv} seed {seed}: only {} copies", tiling.len()))?;
            Ok(tiling.len())
        })
        .collect();
    let mut min = usize::MAX;
    for s in sizes {
        min = min.min(s?);
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("100/100 runs reach 5 (smallest tiling {min})"))
}

fn phase_behaviour() -> Result<String, String> {
    let start = Instant::now();
    let plan = SweepPlan::new("k3", vec![300], vec![5.0, 0.01], 0.15, 50, 6);
    let result = run_sweep(&plan).map_err(|e| e.to_string())?;
    let freq = |c: f64| result.aggregates.iter().find(|a| a.c == c).map(|a| a.frequency);
    let (hi, lo) = (freq(5.0).ok_or("missing C=5")?, freq(0.01).ok_or("missing C=0.01")?);
    ensure(result.rows.iter().all(|r| r.error.is_none()), || "a trial errored".into())?;
    ensure(hi >= 0.9, || format!("C=5 frequency {hi}"))?;
    ensure(lo <= 0.1, || format!("C=0.01 frequency {lo}"))?;
    within(Duration::from_secs(600), start)?;
    Ok(format!("C=5: {hi:.2}, C=0.01: {lo:.2}"))
}

fn good_copy_counts() -> Result<String, String> {
    let start = Instant::now();
    let k3 = PatternStats::clique(3);
    let red = ColouredGraph::monochromatic(Graph::complete(6), Colour::Red);
    for a_mask in 0u32..64 {
        if a_mask.count_ones() != 3 {
            continue;
        }
        let a = VertexSet::from_vertices(6, (0..6).filter(|v| a_mask >> v & 1 == 1));
        let b = VertexSet::full(6).difference(&a);
        let c = good_copy_count(&red, &k3, &a, &b, u128::MAX).map_err(|e| e.to_string())?;
        ensure(c == 19, || format!("A={:?}: {c}", a.to_vec()))?;
    }
    let k5 = Graph::complete(5);
    let mut pairs = 0;
    for mask in 0u64..1 << 10 {
        let g = ColouredGraph::from_mask(&k5, mask);
        let swapped = g.swapped();
        for a_mask in 0u32..32 {
            let a = VertexSet::from_vertices(5, (0..5).filter(|v| a_mask >> v & 1 == 1));
            if a.len() != 2 && a.len() != 3 {
                continue;
            }
            let b = VertexSet::full(5).difference(&a);
            let lhs = good_copy_count(&g, &k3, &a, &b, u128::MAX).map_err(|e| e.to_string())?;
            let rhs = good_copy_count(&swapped, &k3, &b, &a, u128::MAX).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("mask {mask:#x} A={:?}: {lhs} vs {rhs}", a.to_vec()))?;
            pairs += 1;
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("19 for all 20 splits of K6; symmetry on {pairs} K5 cases"))
}

fn disjoint_pairs(n: usize, size: usize) -> Vec<(VertexSet, VertexSet)> {
    let subsets: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize == size).collect();
    let set = |m: u32| VertexSet::from_vertices(n, (0..n).filter(|v| m >> v & 1 == 1));
    let mut out = Vec::new();
    for &x in &subsets {
        for &y in &subsets {
            if x & y == 0 {
                out.push((set(x), set(y)));
            }
        }
    }
    out
}

fn richness_ground_truth() -> Result<String, String> {
    let start = Instant::now();
    let k3 = PatternStats::clique(3);
    let mut total = 0usize;
    for (n, sizes) in [(5usize, &[2usize][..]), (6, &[2, 3][..])] {
        let host = Graph::complete(n);
        let pairs: Vec<_> = sizes.iter().flat_map(|&s| disjoint_pairs(n, s)).collect();
        let edges = n * (n - 1) / 2;
        let disagreement = (0u64..1 << edges).into_par_iter().find_map_any(|mask| {
            let g = ColouredGraph::from_mask(&host, mask);
            pairs.iter().find_map(|(x, y)| {
                let probe = richness_probe(&g, &k3, x, y).ok()?.is_some();
                let brute = good_copies_between(&g, &k3, x, y, u128::MAX).ok()? > 0;
                (probe != brute).then(|| format!("K{n} mask {mask:#x} X={:?} Y={:?}", x.to_vec(), y.to_vec()))
            })
        });
        if let Some(d) = disagreement {
            return Err(d);
        }
        total += pairs.len() << edges;
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("{total} (colouring, X, Y) cases agree"))
}

fn supersaturation() -> Result<String, String> {
    let mut met = 0;
    for n in [8usize, 10, 12] {
        let g = Graph::complete(n);
        for t in 3..=(n as u64 + 2) {
            let r = clique_supersat_count(&g, 3, t, u128::MAX).map_err(|e| e.to_string())?;
            ensure(r.hypothesis_met == (t <= n as u64), || format!("n={n} t={t}: hypothesis {}", r.hypothesis_met))?;
            if r.hypothesis_met {
                ensure(r.satisfied == Some(true), || format!("n={n} t={t}: {} < {}", r.count, r.bound_approx))?;
                met += 1;
            }
        }
    }
    Ok(format!("{met} (n, t) pairs meet the hypothesis, all satisfied"))
}

fn reproducibility() -> Result<String, String> {
    let mut plan = SweepPlan::new("k3", vec![30, 45], vec![1.0, 3.0], 0.1, 4, 10);
    plan.adversaries = Adversary::all();
    plan.workers = Some(1);
    let a = run_sweep(&plan).map_err(|e| e.to_string())?.to_csv();
    plan.workers = Some(4);
    let b = run_sweep(&plan).map_err(|e| e.to_string())?.to_csv();
    ensure(a == b, || "CSV differs between runs".into())?;
    plan.seed_base = 11;
    let c = run_sweep(&plan).map_err(|e| e.to_string())?.to_csv();
    ensure(a != c, || "a different seed gave the same CSV".into())?;
    Ok(format!("{} bytes identical across worker counts", a.len()))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 10] = [
        ("m2 density matches the naive oracle", m2_oracle),
        ("exact Rt fixtures", rt_fixtures),
        ("auxiliary hypergraph degree bounds", aux_degrees),
        ("cluster process invariants", process_invariants),
        ("complete-host extraction", complete_host_extraction),
        ("random-graph phase behaviour", phase_behaviour),
        ("good-copy counting", good_copy_counts),
        ("richness ground truth", richness_ground_truth),
        ("clique supersaturation", supersaturation),
        ("sweep reproducibility", reproducibility),
    ];
    // Keep panic messages out of the summary lines.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
