use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::MASK_CEILING;

/// Parameters of the clique supersaturation step. Only `t ≥ R ≥ 3` is
/// checked; `s` and `eta` are carried for reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupersatParams {
    pub t: u64,
    pub r: u64,
    pub s: u64,
    pub eta: f64,
}

impl SupersatParams {
    pub fn new(t: u64, r: u64, s: u64, eta: f64) -> Result<Self> {
        if !(t >= r && r >= 3) {
            return Err(Error::InvalidArgument(format!("need t >= R >= 3, got t = {t}, R = {r}")));
        }
        Ok(Self { t, r, s, eta })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupersatReport {
    pub n: usize,
    pub edges: usize,
    pub r: u64,
    pub t: u64,
    pub count: u64,
    /// `e(G) ≥ (1 − 1/t)·n²/2`.
    pub hypothesis_met: bool,
    /// `C(t, R)·(n/t)^R` as `numerator/denominator`.
    pub bound_numer: u128,
    pub bound_denom: u128,
    pub bound_approx: f64,
    /// `count ≥ bound`, or `None` when the hypothesis fails.
    pub satisfied: Option<bool>,
}

/// Number of `K_R` subgraphs, by extending cliques in increasing vertex order.
pub fn clique_count(g: &Graph, r: usize, budget: u128) -> Result<u64> {
    let n = g.n();
    if n > MASK_CEILING {
        return Err(Error::TooLarge(n, MASK_CEILING));
    }
    let estimate = crate::search::work_estimate(n, r);
    if estimate > budget {
        return Err(Error::BudgetExceeded {
            what: "clique counting",
            estimate,
            budget,
        });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbours(v).iter().fold(0u64, |m, u| m | 1 << u)).collect();
    fn extend(adj: &[u64], cand: u64, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        if (cand.count_ones() as usize) < left {
            return 0;
        }
        let mut total = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // Later vertices only, so each clique is counted once.
            total += extend(adj, adj[v] & rest, left - 1);
        }
        total
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(extend(&adj, all, r))
}

/// Counts `K_R` in `g` and compares with `C(t, R)·(n/t)^R` when
/// `e(g) ≥ (1 − 1/t)·n²/2`.
pub fn clique_supersat_count(g: &Graph, r: u64, t: u64, budget: u128) -> Result<SupersatReport> {
    if !(t >= r && r >= 3) {
        return Err(Error::InvalidArgument(format!("need t >= R >= 3, got t = {t}, R = {r}")));
    }
    let n = g.n() as u128;
    let e = g.edge_count() as u128;
    let count = clique_count(g, r as usize, budget)?;
    let hypothesis_met = 2 * t as u128 * e >= (t as u128 - 1) * n * n;
    let binom = (0..r as u128).fold(1u128, |acc, i| acc * (t as u128 - i) / (i + 1));
    let bound = Ratio::new(binom * n.pow(r as u32), (t as u128).pow(r as u32));
    let satisfied = hypothesis_met.then(|| Ratio::from_integer(count as u128) >= bound);
    Ok(SupersatReport {
        n: g.n(),
        edges: g.edge_count(),
        r,
        t,
        count,
        hypothesis_met,
        bound_numer: *bound.numer(),
        bound_denom: *bound.denom(),
        bound_approx: *bound.numer() as f64 / *bound.denom() as f64,
        satisfied,
    })
}
