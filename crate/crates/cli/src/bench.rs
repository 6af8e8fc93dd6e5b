//! Benchmark harness: runs two method specifications over a manifest of
//! datasets and reports per-dataset relative runtime and node differences.
//!
//! A method specification is `opus[:BOUND]` or `greedy[:BOUND|:none]` where
//! BOUND is `mon`, `spc`, or `staged` (the default); `greedy:none` disables
//! the early stop. Identical specifications are run once and compared to
//! themselves, so a self-comparison reports exactly zero.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use relfd_core::bounds::BoundKind;
use relfd_core::data::Dataset;
use relfd_core::search::{greedy_with, opus_with, SearchConfig};

use crate::load::{load_csv, LoadError};
use crate::pool::{CliPool, InstantClock};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MethodKind {
    Opus(BoundKind),
    Greedy(Option<BoundKind>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MethodSpec {
    kind: MethodKind,
}

fn parse_bound(s: &str) -> Result<BoundKind, String> {
    match s {
        "mon" => Ok(BoundKind::Mon),
        "spc" => Ok(BoundKind::Spc),
        "staged" => Ok(BoundKind::Staged),
        other => Err(format!("unknown bound {other:?} (use mon, spc, or staged)")),
    }
}

impl MethodSpec {
    pub fn parse(s: &str) -> Result<MethodSpec, String> {
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let kind = match head {
            "opus" => MethodKind::Opus(match tail {
                Some(t) => parse_bound(t)?,
                None => BoundKind::Staged,
            }),
            "greedy" => MethodKind::Greedy(match tail {
                Some("none") => None,
                Some(t) => Some(parse_bound(t)?),
                None => Some(BoundKind::Staged),
            }),
            other => {
                return Err(format!("unknown method {other:?} (use opus or greedy)"));
            }
        };
        Ok(MethodSpec { kind })
    }

    pub fn label(&self) -> String {
        match self.kind {
            MethodKind::Opus(b) => format!("opus:{}", b.name()),
            MethodKind::Greedy(Some(b)) => format!("greedy:{}", b.name()),
            MethodKind::Greedy(None) => String::from("greedy:none"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub target: String,
    pub alpha: f64,
    pub bins: usize,
}

#[derive(Debug)]
pub enum BenchError {
    Io(std::io::Error),
    /// The manifest itself is malformed.
    Manifest(String),
    /// A listed dataset failed to load.
    Load { dataset: String, source: LoadError },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Io(e) => write!(f, "{e}"),
            BenchError::Manifest(msg) => write!(f, "manifest: {msg}"),
            BenchError::Load { dataset, source } => {
                write!(f, "dataset {dataset:?}: {source}")
            }
        }
    }
}

impl std::error::Error for BenchError {}

impl From<std::io::Error> for BenchError {
    fn from(e: std::io::Error) -> BenchError {
        BenchError::Io(e)
    }
}

/// Reads a manifest CSV with header `name,path,target,alpha,bins`. Relative
/// dataset paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, BenchError> {
    let file = std::fs::File::open(path)?;
    let mut reader = csv::Reader::from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| BenchError::Manifest(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let field = |name: &str| -> Result<usize, BenchError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::Manifest(format!("missing column {name:?}")))
    };
    let (i_name, i_path, i_target, i_alpha, i_bins) = (
        field("name")?,
        field("path")?,
        field("target")?,
        field("alpha")?,
        field("bins")?,
    );
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| BenchError::Manifest(e.to_string()))?;
        let get = |i: usize| -> Result<&str, BenchError> {
            record
                .get(i)
                .ok_or_else(|| BenchError::Manifest(format!("row {}: short record", row + 2)))
        };
        let name = get(i_name)?.to_string();
        let raw_path = PathBuf::from(get(i_path)?);
        let resolved = if raw_path.is_absolute() {
            raw_path
        } else {
            base.join(raw_path)
        };
        let alpha: f64 = get(i_alpha)?.parse().map_err(|_| {
            BenchError::Manifest(format!("row {}: alpha is not a number", row + 2))
        })?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(BenchError::Manifest(format!(
                "row {}: alpha {alpha} outside (0, 1]",
                row + 2
            )));
        }
        let bins: usize = get(i_bins)?.parse().map_err(|_| {
            BenchError::Manifest(format!("row {}: bins is not an integer", row + 2))
        })?;
        if bins == 0 {
            return Err(BenchError::Manifest(format!("row {}: bins must be >= 1", row + 2)));
        }
        entries.push(ManifestEntry {
            name,
            path: resolved,
            target: get(i_target)?.to_string(),
            alpha,
            bins,
        });
    }
    if entries.is_empty() {
        return Err(BenchError::Manifest(String::from("no datasets listed")));
    }
    Ok(entries)
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub dataset: String,
    pub method: String,
    pub alpha: f64,
    pub time_s: f64,
    pub nodes: u64,
    pub f0: f64,
}

#[derive(Clone, Debug)]
pub struct RrdEntry {
    pub dataset: String,
    /// Relative runtime difference of A against B, in [-1, 1].
    pub rrd: f64,
    /// Relative nodes-explored difference of A against B, in [-1, 1].
    pub rnd: f64,
    pub time_a: f64,
    pub time_b: f64,
    pub nodes_a: u64,
    pub nodes_b: u64,
}

#[derive(Clone, Debug, Default)]
pub struct RrdReport {
    pub entries: Vec<RrdEntry>,
}

/// `(tau_a - tau_b) / max(tau_a, tau_b)`, defined as 0 when the maximum is
/// not positive.
pub fn rrd(tau_a: f64, tau_b: f64) -> f64 {
    let m = tau_a.max(tau_b);
    if m <= 0.0 {
        0.0
    } else {
        (tau_a - tau_b) / m
    }
}

fn measure(
    data: &Dataset,
    spec: &MethodSpec,
    alpha: f64,
    reps: usize,
    pool: &CliPool,
) -> (f64, u64, f64) {
    let mut total_time = 0.0;
    let mut nodes = 0u64;
    let mut f0 = 0.0;
    for rep in 0..reps {
        let clock = InstantClock::start();
        let result = match spec.kind {
            MethodKind::Opus(bound) => {
                let config = SearchConfig {
                    alpha,
                    bound,
                    node_budget: None,
                    time_budget: None,
                };
                opus_with(data, &config, pool, &clock).expect("alpha validated by the manifest")
            }
            MethodKind::Greedy(bound) => greedy_with(
                data,
                bound.is_some(),
                bound.unwrap_or(BoundKind::Staged),
                pool,
                &clock,
            ),
        };
        total_time += result.wall_time;
        if rep == 0 {
            nodes = result.nodes_explored;
            f0 = result.f0;
        }
    }
    (total_time / reps as f64, nodes, f0)
}

/// Runs both specifications over every dataset, `reps` repetitions each,
/// and reports mean times. When the two specifications are identical the
/// work is done once and compared to itself.
pub fn run_bench(
    entries: &[ManifestEntry],
    spec_a: &MethodSpec,
    spec_b: &MethodSpec,
    reps: usize,
    pool: &CliPool,
) -> Result<(Vec<BenchRecord>, RrdReport), BenchError> {
    let mut records = Vec::new();
    let mut report = RrdReport::default();
    for entry in entries {
        let loaded =
            load_csv(&entry.path, &entry.target, entry.bins).map_err(|source| BenchError::Load {
                dataset: entry.name.clone(),
                source,
            })?;
        let a = measure(&loaded.dataset, spec_a, entry.alpha, reps, pool);
        let b = if spec_a == spec_b {
            a
        } else {
            measure(&loaded.dataset, spec_b, entry.alpha, reps, pool)
        };
        records.push(BenchRecord {
            dataset: entry.name.clone(),
            method: spec_a.label(),
            alpha: entry.alpha,
            time_s: a.0,
            nodes: a.1,
            f0: a.2,
        });
        if spec_a != spec_b {
            records.push(BenchRecord {
                dataset: entry.name.clone(),
                method: spec_b.label(),
                alpha: entry.alpha,
                time_s: b.0,
                nodes: b.1,
                f0: b.2,
            });
        }
        report.entries.push(RrdEntry {
            dataset: entry.name.clone(),
            rrd: rrd(a.0, b.0),
            rnd: rrd(a.1 as f64, b.1 as f64),
            time_a: a.0,
            time_b: b.0,
            nodes_a: a.1,
            nodes_b: b.1,
        });
    }
    Ok((records, report))
}

/// Plot-ready CSV with header `dataset,method,alpha,time_s,nodes,f0`.
pub fn write_records_csv(records: &[BenchRecord], mut out: impl Write) -> io::Result<()> {
    writeln!(out, "dataset,method,alpha,time_s,nodes,f0")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.dataset, r.method, r.alpha, r.time_s, r.nodes, r.f0
        )?;
    }
    Ok(())
}
