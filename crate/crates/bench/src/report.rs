//! Per-benchmark reports and the two suite tables.

use std::fmt::Write;

use cvdv_core::metrics::{FeatureVector, MetricOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisyStatus {
    Ok,
    NotDeskScale,
    Skipped,
    Failed,
}

impl NoisyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoisyStatus::Ok => "ok",
            NoisyStatus::NotDeskScale => "not desk-scale",
            NoisyStatus::Skipped => "skipped",
            NoisyStatus::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyResult {
    pub label: String,
    pub status: NoisyStatus,
    pub duration_s: Option<f64>,
    pub fidelity: Option<f64>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub name: String,
    pub title: String,
    pub seed: u64,
    pub params: Value,
    pub features: FeatureVector,
    pub metric_options: MetricOptions,
    pub depth_note: Option<String>,
    pub fidelity: Option<f64>,
    pub noisy: Vec<NoisyResult>,
    pub task: Value,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub name: String,
    pub title: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub reports: Vec<BenchmarkReport>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

/// The resolved config as `#`-prefixed TOML lines.
pub fn config_header(cfg: &Config) -> String {
    let mut s = String::from("# resolved config\n");
    for line in cfg.to_toml().lines() {
        if line.is_empty() {
            s.push_str("#\n");
        } else {
            let _ = writeln!(s, "# {line}");
        }
    }
    s
}

pub const FEATURE_HEADER: &str = "benchmark,qubits,qumodes,qubit_gates,qumode_gates,hybrid_gates,depth,\
max_energy,max_wigner_negativity,max_truncation_cost,raw_energy,raw_negativity,raw_truncation,status";

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Feature table: structure, normalized metrics (raw if the suite was not
/// normalized), raw metrics. Failed benchmarks get an empty row.
pub fn features_csv(cfg: &Config, suite: &SuiteResult) -> String {
    let mut s = config_header(cfg);
    s.push_str(FEATURE_HEADER);
    s.push('\n');
    for r in &suite.reports {
        let row = r.features.row();
        let raw = &r.features.raw;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.6},{:.6},{:.6},ok",
            quote(&r.title),
            row[0],
            row[1],
            row[2],
            row[3],
            row[4],
            row[5],
            row[6],
            row[7],
            row[8],
            raw.energy,
            raw.negativity,
            raw.truncation
        );
    }
    for f in &suite.failures {
        let _ = writeln!(s, "{},,,,,,,,,,,,,failed", quote(&f.title));
    }
    s
}

pub const NOISY_HEADER: &str = "benchmark,duration_us,fidelity,status,reason";

pub fn noisy_csv(cfg: &Config, suite: &SuiteResult) -> String {
    let mut s = config_header(cfg);
    s.push_str(NOISY_HEADER);
    s.push('\n');
    for r in &suite.reports {
        for n in &r.noisy {
            let dur = n.duration_s.map(|d| format!("{:.3}", d * 1e6)).unwrap_or_default();
            let fid = n.fidelity.map(|f| format!("{f:.4}")).unwrap_or_default();
            let _ = writeln!(s, "{},{dur},{fid},{},{}", quote(&n.label), n.status.as_str(), quote(n.reason.as_deref().unwrap_or("")));
        }
    }
    s
}

/// Parse a feature table back into `(names, rows)`, skipping `#` lines and
/// using the nine feature columns.
pub fn parse_features_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines.next().ok_or("empty feature table")?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 10 || cols[0] != "benchmark" {
        return Err(format!("unexpected header '{header}'"));
    }
    let (mut names, mut rows) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let fields = split_csv(line);
        if fields.len() < 10 {
            return Err(format!("row {}: expected at least 10 fields, got {}", i + 1, fields.len()));
        }
        if fields.get(13).map(|s| s.as_str()) == Some("failed") {
            continue;
        }
        let vals = fields[1..10]
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|_| format!("row {}: bad number '{f}'", i + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        names.push(fields[0].clone());
        rows.push(vals);
    }
    Ok((names, rows))
}

fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}
