//! Sweeps over all friendship graphs looking for games with an empty core.
//!
//! The graph space for each `n` is cut into contiguous edge-mask ranges. Ranges are
//! scanned independently (optionally in parallel) and merged in `(n, lo)` order, so the
//! report does not depend on the worker count. A checkpoint file records one line per
//! completed range and lets an interrupted sweep resume where it stopped.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coalition::{Coalition, Partition};
use crate::game::{Game, PreferenceModel};
use crate::stability::{find_blocking_coalition, verify_witness, StabilityNotion, Witness};

use super::core::find_core_partition;
use super::graphs::{edge_pairs, graph_from_mask, GraphStream};
use super::partitions::enumerate_partitions;
use super::{SearchError, SWEEP_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuntConfig {
    pub model: PreferenceModel,
    pub n_max: usize,
    pub connected_only: bool,
    pub workers: usize,
    /// Number of edge masks per checkpointed range.
    pub range_size: u64,
}

impl HuntConfig {
    pub fn new(model: PreferenceModel, n_max: usize, connected_only: bool) -> Self {
        HuntConfig {
            model,
            n_max,
            connected_only,
            workers: 1,
            range_size: 1 << 10,
        }
    }

    fn model_key(&self) -> String {
        match self.model {
            PreferenceModel::Fractional(agg) => format!("FR/{}", agg.as_str()),
            m => m.tag().to_string(),
        }
    }

    fn header(&self) -> String {
        format!(
            "# hedonic-hunt v1 model={} connected_only={} range_size={}",
            self.model_key(),
            self.connected_only,
            self.range_size
        )
    }

    fn ranges(&self) -> Vec<(usize, u64, u64)> {
        let mut out = Vec::new();
        for n in 1..=self.n_max {
            let total = 1u64 << edge_pairs(n).len();
            let mut lo = 0;
            while lo < total {
                let hi = (lo + self.range_size).min(total);
                out.push((n, lo, hi));
                lo = hi;
            }
        }
        out
    }

    /// Runs the sweep, skipping and recording ranges through `checkpoint` when given.
    pub fn run(&self, checkpoint: Option<&Checkpoint>) -> Result<HuntReport, SearchError> {
        if self.n_max > SWEEP_CAP {
            return Err(SearchError::SweepCap { n: self.n_max });
        }
        assert!(self.range_size > 0, "range size must be positive");
        if let Some(cp) = checkpoint {
            cp.check_header(&self.header())?;
        }
        let done: BTreeMap<(usize, u64), RangeRecord> = checkpoint
            .map(|cp| cp.completed().clone())
            .unwrap_or_default();
        let pending: Vec<(usize, u64, u64)> = self
            .ranges()
            .into_iter()
            .filter(|&(n, lo, hi)| done.get(&(n, lo)).is_none_or(|r| r.hi != hi))
            .collect();

        let progress = AtomicU64::new(0);
        let scan = |&(n, lo, hi): &(usize, u64, u64)| -> Result<RangeRecord, SearchError> {
            let record = scan_range(self.model, self.connected_only, n, lo, hi)?;
            progress.fetch_add(record.scanned, Ordering::Relaxed);
            if let Some(cp) = checkpoint {
                cp.append(&record)?;
            }
            Ok(record)
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .expect("thread pool");
        let fresh: Vec<RangeRecord> =
            pool.install(|| pending.par_iter().map(scan).collect::<Result<_, _>>())?;
        log::info!(
            "hunt {}: scanned {} games in {} new ranges",
            self.model_key(),
            progress.load(Ordering::Relaxed),
            fresh.len()
        );

        let mut records: BTreeMap<(usize, u64), RangeRecord> = done
            .into_iter()
            .filter(|((n, _), _)| *n <= self.n_max)
            .collect();
        for r in fresh {
            records.insert((r.n, r.lo), r);
        }

        let mut scanned_by_n = BTreeMap::new();
        let mut counterexamples = Vec::new();
        for r in records.values() {
            *scanned_by_n.entry(r.n).or_insert(0u64) += r.scanned;
            for &mask in &r.empty_core {
                counterexamples.push(Counterexample::certify(self.model, r.n, mask));
            }
        }
        Ok(HuntReport {
            model: self.model,
            n_max: self.n_max,
            connected_only: self.connected_only,
            scanned_by_n: (1..=self.n_max)
                .map(|n| (n, scanned_by_n.get(&n).copied().unwrap_or(0)))
                .collect(),
            counterexamples,
        })
    }
}

fn scan_range(
    model: PreferenceModel,
    connected_only: bool,
    n: usize,
    lo: u64,
    hi: u64,
) -> Result<RangeRecord, SearchError> {
    let mut record = RangeRecord {
        n,
        lo,
        hi,
        scanned: 0,
        empty_core: Vec::new(),
    };
    for (mask, graph) in GraphStream::range(n, connected_only, lo, Some(hi)) {
        record.scanned += 1;
        let game = Game::homogeneous(graph, model);
        if find_core_partition(&game)?.is_none() {
            log::warn!("empty core: model {} n={n} edge mask {mask}", model.tag());
            record.empty_core.push(mask);
        }
    }
    Ok(record)
}

/// Sweeps every labeled graph with `1..=n_max` players under a homogeneous `model`.
pub fn hunt_empty_core(
    model: PreferenceModel,
    n_max: usize,
    connected_only: bool,
) -> Result<HuntReport, SearchError> {
    HuntConfig::new(model, n_max, connected_only).run(None)
}

/// A game whose core is empty, with one blocking coalition for each of its partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: usize,
    pub edge_mask: u64,
    /// Partitions in stream order, each with its least blocking coalition.
    pub certificate: Vec<(Partition, Coalition)>,
}

impl Counterexample {
    fn certify(model: PreferenceModel, n: usize, edge_mask: u64) -> Self {
        let game = Game::homogeneous(graph_from_mask(n, edge_mask), model);
        let certificate = enumerate_partitions(n)
            .expect("sweep cap is below the partition cap")
            .map(|p| {
                let blocker = find_blocking_coalition(&game, &p)
                    .expect("partition of an empty-core game must be blocked");
                (p, blocker)
            })
            .collect();
        Counterexample {
            n,
            edge_mask,
            certificate,
        }
    }

    pub fn game(&self, model: PreferenceModel) -> Game {
        Game::homogeneous(graph_from_mask(self.n, self.edge_mask), model)
    }

    /// Independently re-checks that the certificate covers every partition and that each
    /// listed coalition blocks its partition.
    pub fn verify(&self, model: PreferenceModel) -> bool {
        let game = self.game(model);
        let Ok(stream) = enumerate_partitions(self.n) else {
            return false;
        };
        let all: Vec<Partition> = stream.collect();
        all.len() == self.certificate.len()
            && all.iter().zip(&self.certificate).all(|(p, (q, blocker))| {
                p == q
                    && verify_witness(
                        &game,
                        p,
                        StabilityNotion::Core,
                        Witness::Coalition(*blocker),
                    )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuntReport {
    pub model: PreferenceModel,
    pub n_max: usize,
    pub connected_only: bool,
    pub scanned_by_n: Vec<(usize, u64)>,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    model: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    aggregation: Option<&'a str>,
    n_max: usize,
    graph_filter: &'a str,
    games_scanned: u64,
    scanned_by_n: Vec<ScannedJson>,
    counterexamples: Vec<CounterexampleJson>,
}

#[derive(Serialize)]
struct ScannedJson {
    n: usize,
    games: u64,
}

#[derive(Serialize)]
pub(crate) struct CounterexampleJson {
    n: usize,
    edge_mask: u64,
    players: Vec<String>,
    edges: Vec<[String; 2]>,
    certificate: Vec<CertificateEntryJson>,
}

#[derive(Serialize)]
struct CertificateEntryJson {
    partition: Vec<Vec<String>>,
    blocking: Vec<String>,
}

impl Counterexample {
    pub(crate) fn to_json(&self, model: PreferenceModel) -> CounterexampleJson {
        let game = self.game(model);
        let names = |c: Coalition| c.members().map(|i| game.label(i).to_string()).collect();
        CounterexampleJson {
            n: self.n,
            edge_mask: self.edge_mask,
            players: game.labels().to_vec(),
            edges: game
                .graph()
                .edges()
                .map(|(i, j)| [game.label(i).to_string(), game.label(j).to_string()])
                .collect(),
            certificate: self
                .certificate
                .iter()
                .map(|(p, b)| CertificateEntryJson {
                    partition: p.blocks().iter().map(|&c| names(c)).collect(),
                    blocking: names(*b),
                })
                .collect(),
        }
    }

    /// Standalone certificate document for one counterexample.
    pub fn to_json_string(&self, model: PreferenceModel) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json(model)).expect("serializable");
        s.push('\n');
        s
    }
}

impl HuntReport {
    pub fn games_scanned(&self) -> u64 {
        self.scanned_by_n.iter().map(|(_, c)| c).sum()
    }

    /// Deterministic JSON rendering; identical for any worker count or resume history.
    pub fn to_json(&self) -> String {
        let report = ReportJson {
            model: self.model.tag(),
            aggregation: match self.model {
                PreferenceModel::Fractional(a) => Some(a.as_str()),
                _ => None,
            },
            n_max: self.n_max,
            graph_filter: if self.connected_only {
                "connected"
            } else {
                "all"
            },
            games_scanned: self.games_scanned(),
            scanned_by_n: self
                .scanned_by_n
                .iter()
                .map(|&(n, games)| ScannedJson { n, games })
                .collect(),
            counterexamples: self
                .counterexamples
                .iter()
                .map(|c| c.to_json(self.model))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&report).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("checkpoint {path} line {line}: malformed record `{text}`")]
    Malformed {
        path: PathBuf,
        line: usize,
        text: String,
    },
    #[error("checkpoint {path} belongs to a different sweep (`{found}`, expected `{expected}`)")]
    Mismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },
}

/// One completed edge-mask range `[lo, hi)` for `n` players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeRecord {
    pub n: usize,
    pub lo: u64,
    pub hi: u64,
    pub scanned: u64,
    /// Edge masks in the range whose game has an empty core.
    pub empty_core: Vec<u64>,
}

impl RangeRecord {
    /// `range n=5 lo=0 hi=1024 scanned=728 empty=-`
    pub fn to_line(&self) -> String {
        let empty = if self.empty_core.is_empty() {
            "-".to_string()
        } else {
            self.empty_core
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "range n={} lo={} hi={} scanned={} empty={}",
            self.n, self.lo, self.hi, self.scanned, empty
        )
    }

    pub fn parse_line(line: &str) -> Option<Self> {
        let mut fields = line.split_whitespace();
        if fields.next()? != "range" {
            return None;
        }
        let mut get = |key: &str| -> Option<String> {
            let (k, v) = fields.next()?.split_once('=')?;
            (k == key).then(|| v.to_string())
        };
        let n = get("n")?.parse().ok()?;
        let lo = get("lo")?.parse().ok()?;
        let hi = get("hi")?.parse().ok()?;
        let scanned = get("scanned")?.parse().ok()?;
        let empty = get("empty")?;
        let empty_core = if empty == "-" {
            Vec::new()
        } else {
            empty
                .split(',')
                .map(|m| m.parse().ok())
                .collect::<Option<Vec<u64>>>()?
        };
        Some(RangeRecord {
            n,
            lo,
            hi,
            scanned,
            empty_core,
        })
    }
}

/// Append-only record of completed ranges.
pub struct Checkpoint {
    path: PathBuf,
    header: Option<String>,
    completed: BTreeMap<(usize, u64), RangeRecord>,
    file: Mutex<File>,
}

impl Checkpoint {
    /// Opens (or creates) a checkpoint file and loads its completed ranges.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CheckpointError> {
        let path = path.as_ref().to_path_buf();
        let io = |source| CheckpointError::Io {
            path: path.clone(),
            source,
        };
        let mut header = None;
        let mut completed = BTreeMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (k, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                let text = line.trim();
                if text.is_empty() {
                    continue;
                }
                if text.starts_with('#') {
                    header.get_or_insert_with(|| text.to_string());
                    continue;
                }
                let record =
                    RangeRecord::parse_line(text).ok_or_else(|| CheckpointError::Malformed {
                        path: path.clone(),
                        line: k + 1,
                        text: text.to_string(),
                    })?;
                completed.insert((record.n, record.lo), record);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io)?;
        Ok(Checkpoint {
            path,
            header,
            completed,
            file: Mutex::new(file),
        })
    }

    pub fn completed(&self) -> &BTreeMap<(usize, u64), RangeRecord> {
        &self.completed
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn check_header(&self, expected: &str) -> Result<(), CheckpointError> {
        match &self.header {
            Some(found) if found != expected => Err(CheckpointError::Mismatch {
                path: self.path.clone(),
                found: found.clone(),
                expected: expected.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                if !self.completed.is_empty() {
                    return Err(CheckpointError::Mismatch {
                        path: self.path.clone(),
                        found: "<no header>".into(),
                        expected: expected.to_string(),
                    });
                }
                self.write_line(expected)
            }
        }
    }

    fn append(&self, record: &RangeRecord) -> Result<(), CheckpointError> {
        self.write_line(&record.to_line())
    }

    fn write_line(&self, line: &str) -> Result<(), CheckpointError> {
        let mut file = self.file.lock().expect("checkpoint lock poisoned");
        writeln!(file, "{line}")
            .and_then(|_| file.flush())
            .map_err(|source| CheckpointError::Io {
                path: self.path.clone(),
                source,
            })
    }
}
