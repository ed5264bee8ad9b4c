//! `(H, η)`-clusters: certificates, their verifier, and the probe/update
//! process that builds one from a blue tiling of `X` and a red tiling of `Y`.
//!
//! The process keeps two shrinking pools `A_X ⊆ X₁`, `A_Y ⊆ Y₁`. Each round it
//! takes the first `g` pool vertices (in a seeded order) as windows `W`, `U`
//! and probes `G[W ∪ U]`:
//!
//! * a red copy with `≥ α` vertices in `W` removes its vertices from both
//!   pools, records its `U`-part in `Y*` and bumps `t_X`;
//! * otherwise a blue copy with `≥ α` vertices in `U` does the mirror image
//!   (`X*`, `t_Y`).
//!
//! When one pool drops below `g`, the certificate is assembled from whichever
//! side has collected enough copies, or else from the exhausted side's pool
//! half plus reserved copies from the other side's second half.

use serde::{Deserialize, Serialize};

use super::probe::{probe_ordered, SideHit};
use super::{required_cluster_copies, validate_tiling, window_size, Tiling};
use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Colour};
use crate::pattern::PatternStats;
use crate::sample::{rng_from_seed, shuffle};
use crate::search::EmbeddedCopy;
use crate::vertex_set::VertexSet;

/// A vertex set `T` with red and blue tilings of `G[T]` witnessing an
/// `(H, η)`-cluster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCertificate {
    /// `T`, sorted.
    pub vertices: Vec<usize>,
    pub red_tiling: Tiling,
    pub blue_tiling: Tiling,
    pub eta: f64,
}

impl ClusterCertificate {
    pub fn new(vertices: &VertexSet, red_tiling: Tiling, blue_tiling: Tiling, eta: f64) -> Self {
        Self {
            vertices: vertices.to_vec(),
            red_tiling,
            blue_tiling,
            eta,
        }
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_vertices(universe, self.vertices.iter().copied())
    }

    pub fn tiling(&self, colour: Colour) -> &Tiling {
        match colour {
            Colour::Red => &self.red_tiling,
            Colour::Blue => &self.blue_tiling,
        }
    }

    /// Smallest `η ≥ 0` for which the carried tilings still certify a cluster.
    pub fn tightest_eta(&self, pattern: &PatternStats) -> f64 {
        let v = self.order() as f64;
        let smaller = self.red_tiling.len().min(self.blue_tiling.len()) as f64;
        (1.0 / pattern.tie_order() as f64 - smaller / v).max(0.0)
    }
}

/// Checks a certificate from scratch against the host: `T` is a nonempty set
/// of host vertices, both tilings are valid inside `G[T]` in their colour, and
/// each meets the clamped size requirement for `|T|` and `η`.
pub fn verify_cluster(host: &ColouredGraph, pattern: &PatternStats, cert: &ClusterCertificate) -> bool {
    if cert.vertices.is_empty() || cert.vertices.iter().any(|&v| v >= host.n()) {
        return false;
    }
    if cert.vertices.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if !(cert.eta >= 0.0) {
        return false;
    }
    let t = cert.vertex_set(host.n());
    let need = required_cluster_copies(cert.order(), pattern, cert.eta);
    [(&cert.red_tiling, Colour::Red), (&cert.blue_tiling, Colour::Blue)]
        .into_iter()
        .all(|(tiling, colour)| {
            tiling.colour == colour
                && tiling.len() >= need
                && validate_tiling(host, pattern, tiling, Some(&t)).is_ok()
        })
}

/// Which probe is tried first in each round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeOrder {
    /// Red copy hitting `W` before blue copy hitting `U`.
    #[default]
    RedFirst,
    /// A seeded coin decides per round.
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    pub eta: f64,
    pub seed: u64,
    pub probe_order: ProbeOrder,
}

impl ProcessConfig {
    pub fn new(eta: f64, seed: u64) -> Self {
        Self {
            eta,
            seed,
            probe_order: ProbeOrder::RedFirst,
        }
    }
}

/// `(A_X, A_Y, X*, Y*, t_X, t_Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessState {
    pub a_x: VertexSet,
    pub a_y: VertexSet,
    pub x_star: VertexSet,
    pub y_star: VertexSet,
    pub t_x: usize,
    pub t_y: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    /// Red copy with `≥ α` vertices in `W`.
    RedHitsW,
    /// Blue copy with `≥ α` vertices in `U`.
    BlueHitsU,
}

/// Counters after one round of the process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSnapshot {
    pub kind: StepKind,
    pub removed_from_ax: usize,
    pub removed_from_ay: usize,
    pub ax_len: usize,
    pub ay_len: usize,
    pub x_star_len: usize,
    pub y_star_len: usize,
    pub t_x: usize,
    pub t_y: usize,
    /// Total removed from `A_X` by blue rounds so far.
    pub blue_removed_from_ax: usize,
    /// Total removed from `A_Y` by red rounds so far.
    pub red_removed_from_ay: usize,
}

/// `|T|` against its closed form and upper bound in the balanced case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCheck {
    pub t_len: usize,
    /// `2·h·k + |Y*| − k·t_X` for the exhausted side (roles swapped if `A_Y` ran out).
    pub closed_form: i64,
    /// `h(2k − α) + g`; `|T|` must be strictly below it.
    pub upper_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssemblyCase {
    /// `η ≥ 1`: the whole input is returned.
    Degenerate,
    /// Enough red rounds: `T = X₁ ∪ Ỹ`.
    RedSurplus,
    /// Enough blue rounds: `T = Y₁ ∪ X̃`.
    BlueSurplus,
    /// Neither; `T` = exhausted pool half ∪ its star set ∪ reserved copies.
    Balanced { exhausted: SideHit },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub k: usize,
    pub alpha: usize,
    pub s: usize,
    /// Window size `g`.
    pub window: usize,
    /// Copies in each first half (`X₁`, `Y₁`).
    pub half: usize,
    pub x1_len: usize,
    pub y1_len: usize,
    pub steps: Vec<StepSnapshot>,
    pub case: Option<AssemblyCase>,
    pub size_check: Option<SizeCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FailureReason {
    /// Neither probe found a good copy in `G[W ∪ U]`.
    ProbeExhausted,
    /// The assembled tilings fall short of the cluster requirement (possible
    /// only through rounding at small `s`).
    BoundNotMet { required: usize, red: usize, blue: usize, t_len: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FailureReport {
    pub reason: FailureReason,
    pub exhausted_at: ProcessState,
    pub trace: ProcessTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClusterOutcome {
    Success {
        certificate: ClusterCertificate,
        trace: ProcessTrace,
    },
    Failure(FailureReport),
}

impl ClusterOutcome {
    pub fn certificate(&self) -> Option<&ClusterCertificate> {
        match self {
            ClusterOutcome::Success { certificate, .. } => Some(certificate),
            ClusterOutcome::Failure(_) => None,
        }
    }

    pub fn trace(&self) -> &ProcessTrace {
        match self {
            ClusterOutcome::Success { trace, .. } => trace,
            ClusterOutcome::Failure(f) => &f.trace,
        }
    }
}

/// One side's inputs after splitting its tiling.
struct Side<'t> {
    first: &'t [EmbeddedCopy],
    reserve: &'t [EmbeddedCopy],
    pool: VertexSet,
}

/// Builds an `(H, η)`-cluster inside `X ∪ Y`.
///
/// `blue_x` must tile `X` exactly with blue copies and `red_y` must tile `Y`
/// exactly with red copies, each with the same number `q ≥ 2` of copies.
/// Invalid inputs are errors; a probe that comes back empty on a non-rich
/// host is a [`ClusterOutcome::Failure`] carrying the state at that point.
pub fn cluster_process(
    host: &ColouredGraph,
    pattern: &PatternStats,
    x: &VertexSet,
    y: &VertexSet,
    blue_x: &Tiling,
    red_y: &Tiling,
    cfg: &ProcessConfig,
) -> Result<ClusterOutcome> {
    let n = host.n();
    let k = pattern.k();
    let alpha = pattern.alpha();
    check_inputs(host, pattern, x, y, blue_x, red_y, cfg)?;

    let q = blue_x.len();
    let half = q / 2;
    let s = x.len();
    let window = window_size(cfg.eta * cfg.eta * s as f64);

    let xs = Side {
        first: &blue_x.copies[..half],
        reserve: &blue_x.copies[half..],
        pool: union_of(n, &blue_x.copies[..half]),
    };
    let ys = Side {
        first: &red_y.copies[..half],
        reserve: &red_y.copies[half..],
        pool: union_of(n, &red_y.copies[..half]),
    };

    let mut trace = ProcessTrace {
        k,
        alpha,
        s,
        window,
        half,
        x1_len: xs.pool.len(),
        y1_len: ys.pool.len(),
        steps: Vec::new(),
        case: None,
        size_check: None,
    };
    let mut state = ProcessState {
        a_x: xs.pool.clone(),
        a_y: ys.pool.clone(),
        x_star: VertexSet::new(n),
        y_star: VertexSet::new(n),
        t_x: 0,
        t_y: 0,
    };

    if cfg.eta >= 1.0 {
        trace.case = Some(AssemblyCase::Degenerate);
        let certificate = ClusterCertificate::new(&x.union(y), red_y.clone(), blue_x.clone(), cfg.eta);
        return Ok(ClusterOutcome::Success { certificate, trace });
    }

    let mut rng = rng_from_seed(cfg.seed);
    let mut order_x = xs.pool.to_vec();
    let mut order_y = ys.pool.to_vec();
    shuffle(&mut order_x, &mut rng);
    shuffle(&mut order_y, &mut rng);

    // Good copies found by red rounds (with their U-part) and blue rounds (with their W-part).
    let mut red_rounds: Vec<(EmbeddedCopy, VertexSet)> = Vec::new();
    let mut blue_rounds: Vec<(EmbeddedCopy, VertexSet)> = Vec::new();
    let mut blue_removed_from_ax = 0;
    let mut red_removed_from_ay = 0;

    while state.a_x.len() >= window && state.a_y.len() >= window {
        let w = first_in_pool(n, &order_x, &state.a_x, window);
        let u = first_in_pool(n, &order_y, &state.a_y, window);
        let order = match cfg.probe_order {
            ProbeOrder::RedFirst => [SideHit::X, SideHit::Y],
            ProbeOrder::Randomized => {
                if rand::RngCore::next_u64(&mut rng) & 1 == 0 {
                    [SideHit::X, SideHit::Y]
                } else {
                    [SideHit::Y, SideHit::X]
                }
            }
        };
        let Some(good) = probe_ordered(host, pattern, &w, &u, order) else {
            return Ok(ClusterOutcome::Failure(FailureReport {
                reason: FailureReason::ProbeExhausted,
                exhausted_at: state,
                trace,
            }));
        };

        let verts = good.copy.vertex_set(n);
        let in_w = verts.intersection(&w);
        let in_u = verts.intersection(&u);
        debug_assert_eq!(in_w.len() + in_u.len(), k);
        let removed_from_ax = state.a_x.intersection_len(&verts);
        let removed_from_ay = state.a_y.intersection_len(&verts);
        state.a_x.difference_with(&verts);
        state.a_y.difference_with(&verts);
        let kind = match good.side_hit {
            SideHit::X => {
                state.y_star.union_with(&in_u);
                state.t_x += 1;
                red_removed_from_ay += removed_from_ay;
                red_rounds.push((good.copy, in_u));
                StepKind::RedHitsW
            }
            SideHit::Y => {
                state.x_star.union_with(&in_w);
                state.t_y += 1;
                blue_removed_from_ax += removed_from_ax;
                blue_rounds.push((good.copy, in_w));
                StepKind::BlueHitsU
            }
        };
        trace.steps.push(StepSnapshot {
            kind,
            removed_from_ax,
            removed_from_ay,
            ax_len: state.a_x.len(),
            ay_len: state.a_y.len(),
            x_star_len: state.x_star.len(),
            y_star_len: state.y_star.len(),
            t_x: state.t_x,
            t_y: state.t_y,
            blue_removed_from_ax,
            red_removed_from_ay,
        });
    }

    let exhausted = if state.a_x.len() < window {
        SideHit::X
    } else {
        SideHit::Y
    };

    let (t_set, red_tiling, blue_tiling, case) = if state.t_x >= half {
        let mut t = xs.pool.clone();
        let mut red = Tiling::new(Colour::Red);
        for (copy, u_part) in red_rounds.iter().take(half) {
            t.union_with(u_part);
            red.copies.push(copy.clone());
        }
        let blue = Tiling {
            colour: Colour::Blue,
            copies: xs.first.to_vec(),
        };
        (t, red, blue, AssemblyCase::RedSurplus)
    } else if state.t_y >= half {
        let mut t = ys.pool.clone();
        let mut blue = Tiling::new(Colour::Blue);
        for (copy, w_part) in blue_rounds.iter().take(half) {
            t.union_with(w_part);
            blue.copies.push(copy.clone());
        }
        let red = Tiling {
            colour: Colour::Red,
            copies: ys.first.to_vec(),
        };
        (t, red, blue, AssemblyCase::RedSurplus.mirror())
    } else {
        let (pool_side, star, t_count, rounds, reserve, own_colour) = match exhausted {
            SideHit::X => (&xs, &state.y_star, state.t_x, &red_rounds, ys.reserve, Colour::Red),
            SideHit::Y => (&ys, &state.x_star, state.t_y, &blue_rounds, xs.reserve, Colour::Blue),
        };
        let need = half - t_count;
        let mut t = pool_side.pool.union(star);
        let mut found = Tiling::new(own_colour);
        found.copies.extend(rounds.iter().map(|(c, _)| c.clone()));
        for copy in &reserve[..need] {
            t.union_with(&copy.vertex_set(n));
            found.copies.push(copy.clone());
        }
        let pool_tiling = Tiling {
            colour: own_colour.other(),
            copies: pool_side.first.to_vec(),
        };
        trace.size_check = Some(SizeCheck {
            t_len: t.len(),
            closed_form: (2 * half * k + star.len()) as i64 - (k * t_count) as i64,
            upper_bound: half * (2 * k - alpha) + window,
        });
        let (red, blue) = match own_colour {
            Colour::Red => (found, pool_tiling),
            Colour::Blue => (pool_tiling, found),
        };
        (t, red, blue, AssemblyCase::Balanced { exhausted })
    };
    trace.case = Some(case);

    let required = required_cluster_copies(t_set.len(), pattern, cfg.eta);
    if red_tiling.len() < required || blue_tiling.len() < required {
        return Ok(ClusterOutcome::Failure(FailureReport {
            reason: FailureReason::BoundNotMet {
                required,
                red: red_tiling.len(),
                blue: blue_tiling.len(),
                t_len: t_set.len(),
            },
            exhausted_at: state,
            trace,
        }));
    }
    let certificate = ClusterCertificate::new(&t_set, red_tiling, blue_tiling, cfg.eta);
    Ok(ClusterOutcome::Success { certificate, trace })
}

impl AssemblyCase {
    fn mirror(self) -> Self {
        match self {
            AssemblyCase::RedSurplus => AssemblyCase::BlueSurplus,
            AssemblyCase::BlueSurplus => AssemblyCase::RedSurplus,
            other => other,
        }
    }
}

fn check_inputs(
    host: &ColouredGraph,
    pattern: &PatternStats,
    x: &VertexSet,
    y: &VertexSet,
    blue_x: &Tiling,
    red_y: &Tiling,
    cfg: &ProcessConfig,
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidArgument(msg));
    if !(cfg.eta > 0.0 && cfg.eta.is_finite()) {
        return bad(format!("eta must be positive, got {}", cfg.eta));
    }
    if pattern.k() < 3 {
        return bad(format!("the cluster process needs k >= 3, got {}", pattern.k()));
    }
    if x.universe() != host.n() || y.universe() != host.n() {
        return bad("vertex sets do not match the host".into());
    }
    if !x.is_disjoint(y) || x.len() != y.len() {
        return bad("X and Y must be disjoint sets of equal size".into());
    }
    if blue_x.colour != Colour::Blue || red_y.colour != Colour::Red {
        return bad("expected a blue tiling of X and a red tiling of Y".into());
    }
    if blue_x.len() != red_y.len() || blue_x.len() < 2 {
        return bad(format!(
            "need the same number (at least 2) of copies on both sides, got {} and {}",
            blue_x.len(),
            red_y.len()
        ));
    }
    for (tiling, set, name) in [(blue_x, x, "X"), (red_y, y, "Y")] {
        if let Err(v) = validate_tiling(host, pattern, tiling, Some(set)) {
            return bad(format!("tiling of {name}: {v}"));
        }
        if tiling.vertex_set(host.n()) != *set {
            return bad(format!("tiling of {name} does not cover it exactly"));
        }
    }
    Ok(())
}

fn union_of(n: usize, copies: &[EmbeddedCopy]) -> VertexSet {
    let mut s = VertexSet::new(n);
    for c in copies {
        for &v in &c.vertex_map {
            s.insert(v);
        }
    }
    s
}

fn first_in_pool(n: usize, order: &[usize], pool: &VertexSet, count: usize) -> VertexSet {
    VertexSet::from_vertices(n, order.iter().copied().filter(|&v| pool.contains(v)).take(count))
}
