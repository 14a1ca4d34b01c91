//! Multi-seed experiment grids over protocol x node count x speed.

use rayon::prelude::*;

use crate::config::{ProtocolKind, SimConfig};
use crate::engine::run_trial;
use crate::error::SweepError;
use crate::metrics::TrialResult;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub protocols: Vec<ProtocolKind>,
    pub nodes: Vec<u32>,
    pub speeds: Vec<f64>,
    /// Trial seeds are `base.seed + i` for `i` in `0..seeds`.
    pub seeds: u32,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
}

/// Metrics aggregated per cell, in column order.
pub const AGG_METRICS: [&str; 12] = [
    "pdr",
    "loss_pct",
    "intra_loss_pct",
    "inter_loss_pct",
    "intra_lost",
    "inter_lost",
    "lifetime_rounds",
    "avg_election_pkts",
    "hello_pkts",
    "gradient_pkts",
    "recovery_requests",
    "recovery_replies",
];

pub fn metric_value(r: &TrialResult, metric: &str) -> Option<f64> {
    match metric {
        "pdr" => r.pdr,
        "loss_pct" => r.loss_pct,
        "intra_loss_pct" => r.intra_loss_pct,
        "inter_loss_pct" => r.inter_loss_pct,
        "intra_lost" => Some(r.intra_lost as f64),
        "inter_lost" => Some(r.inter_lost as f64),
        "lifetime_rounds" => Some(r.lifetime_rounds as f64),
        "avg_election_pkts" => r.avg_election_pkts,
        "hello_pkts" => Some(r.hello_pkts as f64),
        "gradient_pkts" => Some(r.gradient_pkts as f64),
        "recovery_requests" => Some(r.recovery_requests as f64),
        "recovery_replies" => Some(r.recovery_replies as f64),
        _ => None,
    }
}

/// Mean and sample standard deviation over the values that are present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    pub count: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self {
                mean: None,
                stddev: None,
                count: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean: Some(mean),
            stddev: Some(stddev),
            count: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub protocol: ProtocolKind,
    pub nodes: u32,
    pub speed_mps: f64,
    pub seeds: u32,
    /// One entry per [`AGG_METRICS`] name.
    pub stats: Vec<Stat>,
}

impl CellSummary {
    pub fn stat(&self, metric: &str) -> Option<Stat> {
        AGG_METRICS
            .iter()
            .position(|m| *m == metric)
            .map(|i| self.stats[i])
    }

    pub fn mean(&self, metric: &str) -> Option<f64> {
        self.stat(metric).and_then(|s| s.mean)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Every trial, ordered by (protocol name, nodes, speed, seed).
    pub trials: Vec<TrialResult>,
    pub cells: Vec<CellSummary>,
}

impl SweepResult {
    pub fn cell(&self, protocol: ProtocolKind, nodes: u32, speed: f64) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.protocol == protocol && c.nodes == nodes && c.speed_mps == speed)
    }
}

fn sorted_protocols(protocols: &[ProtocolKind]) -> Vec<ProtocolKind> {
    let mut p = protocols.to_vec();
    p.sort_by_key(|k| k.name());
    p.dedup();
    p
}

fn sorted_f64(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn run_sweep(base: &SimConfig, spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    if spec.protocols.is_empty() {
        return Err(SweepError::EmptyAxis("protocols"));
    }
    if spec.nodes.is_empty() {
        return Err(SweepError::EmptyAxis("nodes"));
    }
    if spec.speeds.is_empty() {
        return Err(SweepError::EmptyAxis("speeds"));
    }
    if spec.seeds == 0 {
        return Err(SweepError::EmptyAxis("seeds"));
    }
    let protocols = sorted_protocols(&spec.protocols);
    let mut nodes = spec.nodes.clone();
    nodes.sort_unstable();
    nodes.dedup();
    let speeds = sorted_f64(&spec.speeds);

    let mut configs = Vec::new();
    for &protocol in &protocols {
        for &n in &nodes {
            for &speed in &speeds {
                for i in 0..spec.seeds {
                    configs.push(SimConfig {
                        protocol,
                        nodes: n,
                        mean_speed_mps: speed,
                        seed: base.seed.wrapping_add(i as u64),
                        ..base.clone()
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let outcomes: Vec<_> = pool.install(|| configs.par_iter().map(run_trial).collect());

    let mut trials = Vec::with_capacity(outcomes.len());
    for (cfg, outcome) in configs.iter().zip(outcomes) {
        let result = outcome.map_err(|source| SweepError::Trial {
            protocol: cfg.protocol.name().to_string(),
            nodes: cfg.nodes,
            speed: cfg.mean_speed_mps,
            seed: cfg.seed,
            source,
        })?;
        trials.push(result);
    }

    let cells = trials
        .chunks(spec.seeds as usize)
        .map(|chunk| {
            let first = &chunk[0];
            let stats = AGG_METRICS
                .iter()
                .map(|m| {
                    let vals: Vec<f64> = chunk.iter().filter_map(|r| metric_value(r, m)).collect();
                    Stat::of(&vals)
                })
                .collect();
            CellSummary {
                protocol: first.protocol,
                nodes: first.nodes,
                speed_mps: first.speed_mps,
                seeds: chunk.len() as u32,
                stats,
            }
        })
        .collect();
    Ok(SweepResult { trials, cells })
}
