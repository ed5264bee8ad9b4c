use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{ColouredGraph, Graph};
use crate::oracles::{
    aux_degree_check, build_aux_hypergraph, clique_supersat_count, exact_rt, good_copy_count, richness_decide,
};
use crate::pattern::PatternStats;
use crate::vertex_set::VertexSet;

/// One cached oracle query. Hosts are stored in the graph text format so a
/// fixture can be recomputed from the file alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operation", rename_all = "kebab-case")]
pub enum FixtureRequest {
    M2 { pattern: String },
    RtExact { pattern: String, host: String },
    GoodCount { pattern: String, host: String, a: Vec<usize>, b: Vec<usize> },
    AuxCheck { pattern: String, n: usize, a: Vec<usize> },
    Supersat { host: String, r: u64, t: u64 },
    Richness { pattern: String, host: String, s: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureKey {
    pub host_hash: String,
    pub pattern_hash: String,
    pub operation: String,
    pub params: String,
}

impl fmt::Display for FixtureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}]@{}:{}",
            self.operation,
            self.params,
            &self.host_hash[..12],
            &self.pattern_hash[..12]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub key: FixtureKey,
    pub request: FixtureRequest,
    pub value: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub checked: usize,
    /// Offending keys with what went wrong.
    pub mismatches: Vec<String>,
    pub warnings: Vec<String>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn sha(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn pattern_text(name: &str) -> Result<String> {
    Ok(PatternStats::parse(name)?.graph().to_text())
}

impl FixtureRequest {
    pub fn operation(&self) -> &'static str {
        match self {
            FixtureRequest::M2 { .. } => "m2",
            FixtureRequest::RtExact { .. } => "rt-exact",
            FixtureRequest::GoodCount { .. } => "good-count",
            FixtureRequest::AuxCheck { .. } => "aux-check",
            FixtureRequest::Supersat { .. } => "supersat",
            FixtureRequest::Richness { .. } => "richness",
        }
    }

    pub fn key(&self) -> Result<FixtureKey> {
        let (host, pattern, params) = match self {
            FixtureRequest::M2 { pattern } => (String::new(), pattern_text(pattern)?, String::new()),
            FixtureRequest::RtExact { pattern, host } => (host.clone(), pattern_text(pattern)?, String::new()),
            FixtureRequest::GoodCount { pattern, host, a, b } => {
                (host.clone(), pattern_text(pattern)?, format!("a={a:?};b={b:?}"))
            }
            FixtureRequest::AuxCheck { pattern, n, a } => {
                (Graph::complete(*n).to_text(), pattern_text(pattern)?, format!("a={a:?}"))
            }
            FixtureRequest::Supersat { host, r, t } => (host.clone(), String::new(), format!("r={r};t={t}")),
            FixtureRequest::Richness { pattern, host, s } => (host.clone(), pattern_text(pattern)?, format!("s={s}")),
        };
        Ok(FixtureKey {
            host_hash: sha(&host),
            pattern_hash: sha(&pattern),
            operation: self.operation().to_string(),
            params,
        })
    }
}

/// Runs the oracle behind a request.
pub fn evaluate_fixture(request: &FixtureRequest, budget: u128) -> Result<Value> {
    Ok(match request {
        FixtureRequest::M2 { pattern } => {
            let m = PatternStats::parse(pattern)?.m2();
            json!(format!("{}/{}", m.numer(), m.denom()))
        }
        FixtureRequest::RtExact { pattern, host } => {
            let v = exact_rt(&PatternStats::parse(pattern)?, &Graph::from_text(host)?, budget)?;
            serde_json::to_value(v)?
        }
        FixtureRequest::GoodCount { pattern, host, a, b } => {
            let g = ColouredGraph::from_text(host)?;
            let n = g.n();
            let count = good_copy_count(
                &g,
                &PatternStats::parse(pattern)?,
                &vertex_set(n, a)?,
                &vertex_set(n, b)?,
                budget,
            )?;
            json!(count)
        }
        FixtureRequest::AuxCheck { pattern, n, a } => {
            let h = PatternStats::parse(pattern)?;
            let a = vertex_set(*n, a)?;
            let b = VertexSet::full(*n).difference(&a);
            let aux = build_aux_hypergraph(*n, &a, &b, &h, budget)?;
            let report = aux_degree_check(&aux, &h);
            json!({
                "hyperedges": report.hyperedges,
                "max_degrees": report.rows.iter().map(|r| r.max_degree).collect::<Vec<_>>(),
                "all_pass": report.all_pass(),
            })
        }
        FixtureRequest::Supersat { host, r, t } => {
            let report = clique_supersat_count(&Graph::from_text(host)?, *r, *t, budget)?;
            json!({
                "count": report.count,
                "hypothesis_met": report.hypothesis_met,
                "satisfied": report.satisfied,
            })
        }
        FixtureRequest::Richness { pattern, host, s } => {
            let v = richness_decide(&Graph::from_text(host)?, &PatternStats::parse(pattern)?, *s, budget)?;
            serde_json::to_value(v)?
        }
    })
}

fn vertex_set(n: usize, vs: &[usize]) -> Result<VertexSet> {
    if let Some(&v) = vs.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(VertexSet::from_vertices(n, vs.iter().copied()))
}

/// Evaluates `request` and writes it to `dir`, named after its key.
pub fn write_fixture(dir: &Path, request: FixtureRequest, budget: u128) -> Result<PathBuf> {
    let key = request.key()?;
    let value = evaluate_fixture(&request, budget)?;
    let name = format!("{}-{}.json", key.operation, &sha(&key.to_string())[..16]);
    let path = dir.join(name);
    let record = FixtureRecord { key, request, value };
    let text = serde_json::to_string_pretty(&record)? + "\n";
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

pub fn generate_fixtures(dir: &Path, requests: Vec<FixtureRequest>, budget: u128) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    requests.into_iter().map(|r| write_fixture(dir, r, budget)).collect()
}

/// Recomputes every `*.json` record in `dir` and diffs it against the stored
/// value and key.
pub fn verify_fixtures(dir: &Path, budget: u128) -> Result<FixtureReport> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut report = FixtureReport::default();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        report.checked += 1;
        let record: FixtureRecord = match serde_json::from_str(&text) {
            Ok(r) => r,
            Err(e) => {
                report.mismatches.push(format!("{}: unreadable ({e})", path.display()));
                continue;
            }
        };
        match record.request.key() {
            Ok(k) if k == record.key => {}
            Ok(_) => {
                report.mismatches.push(format!("{}: key does not match request", record.key));
                continue;
            }
            Err(e) => {
                report.mismatches.push(format!("{}: {e}", record.key));
                continue;
            }
        }
        match evaluate_fixture(&record.request, budget) {
            Ok(v) if v == record.value => {}
            Ok(v) => report
                .mismatches
                .push(format!("{}: stored {} but recomputed {}", record.key, record.value, v)),
            Err(e) => report.mismatches.push(format!("{}: {e}", record.key)),
        }
    }
    if report.checked == 0 {
        report.warnings.push(format!("no fixtures found in {}", dir.display()));
    }
    Ok(report)
}

/// The regression corpus shipped with the repository.
pub fn standard_fixture_requests() -> Vec<FixtureRequest> {
    let kn = |n: usize| Graph::complete(n).to_text();
    let mut out: Vec<FixtureRequest> = ["k2", "k3", "k4", "p4", "c5", "2k2", "k1"]
        .iter()
        .map(|p| FixtureRequest::M2 { pattern: p.to_string() })
        .collect();
    for (pattern, n) in [("k2", 3), ("k2", 4), ("k2", 5), ("k3", 5), ("k3", 6), ("p3", 4), ("p3", 5)] {
        out.push(FixtureRequest::RtExact {
            pattern: pattern.into(),
            host: kn(n),
        });
    }
    let red_k6 = ColouredGraph::monochromatic(Graph::complete(6), crate::Colour::Red).to_text();
    out.push(FixtureRequest::GoodCount {
        pattern: "k3".into(),
        host: red_k6,
        a: vec![0, 1, 2],
        b: vec![3, 4, 5],
    });
    for (pattern, n) in [("k3", 6), ("k3", 8), ("p4", 6)] {
        out.push(FixtureRequest::AuxCheck {
            pattern: pattern.into(),
            n,
            a: (0..n / 2).collect(),
        });
    }
    for n in [8, 10, 12] {
        out.push(FixtureRequest::Supersat { host: kn(n), r: 3, t: n as u64 });
    }
    out.push(FixtureRequest::Supersat { host: kn(10), r: 3, t: 3 });
    out.push(FixtureRequest::Richness {
        pattern: "k3".into(),
        host: kn(4),
        s: 2,
    });
    out.push(FixtureRequest::Richness {
        pattern: "k3".into(),
        host: kn(6),
        s: 3,
    });
    out
}
