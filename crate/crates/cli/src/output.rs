//! CSV emission for trials, sweep aggregates, and per-figure tables.

use std::io::Write;

use mwsn_core::sweep::AGG_METRICS;
use mwsn_core::{CellSummary, ProtocolKind, SweepResult, TrialResult};

pub const TRIAL_COLUMNS: [&str; 21] = [
    "protocol",
    "nodes",
    "speed_mps",
    "seed",
    "pdr",
    "loss_pct",
    "intra_loss_pct",
    "inter_loss_pct",
    "lifetime_rounds",
    "censored",
    "avg_election_pkts",
    "hello_pkts",
    "gradient_pkts",
    "recovery_requests",
    "recovery_replies",
    "rounds_completed",
    "intra_lost",
    "inter_lost",
    "election_pkts",
    "join_pkts",
    "config_fingerprint",
];

/// A figure table: one row per x value, one column per protocol.
#[derive(Debug, Clone, Copy)]
pub struct Figure {
    pub file: &'static str,
    pub metric: &'static str,
    pub x: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Nodes,
    Speed,
}

pub const FIGURES: [Figure; 7] = [
    Figure {
        file: "fig_pdr_vs_nodes.csv",
        metric: "pdr",
        x: Axis::Nodes,
    },
    Figure {
        file: "fig_pdr_vs_speed.csv",
        metric: "pdr",
        x: Axis::Speed,
    },
    Figure {
        file: "fig_loss_vs_speed.csv",
        metric: "loss_pct",
        x: Axis::Speed,
    },
    Figure {
        file: "fig_loss_vs_nodes.csv",
        metric: "loss_pct",
        x: Axis::Nodes,
    },
    Figure {
        file: "fig_ctrl_pkts.csv",
        metric: "avg_election_pkts",
        x: Axis::Nodes,
    },
    Figure {
        file: "fig_lifetime_vs_nodes.csv",
        metric: "lifetime_rounds",
        x: Axis::Nodes,
    },
    Figure {
        file: "fig_lifetime_vs_speed.csv",
        metric: "lifetime_rounds",
        x: Axis::Speed,
    },
];

/// Node count and speed the per-figure tables hold fixed when the sweep
/// covers them; otherwise the smallest swept value is used.
pub const REFERENCE_NODES: u32 = 100;
pub const REFERENCE_SPEED: f64 = 5.0;

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn trial_record(r: &TrialResult) -> Vec<String> {
    vec![
        r.protocol.name().to_string(),
        r.nodes.to_string(),
        num(r.speed_mps),
        r.seed.to_string(),
        opt(r.pdr),
        opt(r.loss_pct),
        opt(r.intra_loss_pct),
        opt(r.inter_loss_pct),
        r.lifetime_rounds.to_string(),
        r.censored.to_string(),
        opt(r.avg_election_pkts),
        r.hello_pkts.to_string(),
        r.gradient_pkts.to_string(),
        r.recovery_requests.to_string(),
        r.recovery_replies.to_string(),
        r.rounds_completed.to_string(),
        r.intra_lost.to_string(),
        r.inter_lost.to_string(),
        r.election_pkts.to_string(),
        r.join_pkts.to_string(),
        r.config_fingerprint.clone(),
    ]
}

pub fn write_trials<W: Write>(out: W, trials: &[TrialResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_COLUMNS)?;
    for t in trials {
        w.write_record(trial_record(t))?;
    }
    w.flush()?;
    Ok(())
}

pub fn aggregate_header() -> Vec<String> {
    let mut h: Vec<String> = ["protocol", "nodes", "speed_mps", "seeds"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for m in AGG_METRICS {
        h.push(format!("{m}_mean"));
        h.push(format!("{m}_std"));
    }
    h
}

pub fn write_aggregate<W: Write>(out: W, cells: &[CellSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(aggregate_header())?;
    for c in cells {
        let mut rec = vec![
            c.protocol.name().to_string(),
            c.nodes.to_string(),
            num(c.speed_mps),
            c.seeds.to_string(),
        ];
        for s in &c.stats {
            rec.push(opt(s.mean));
            rec.push(opt(s.stddev));
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

fn axes(result: &SweepResult) -> (Vec<ProtocolKind>, Vec<u32>, Vec<f64>) {
    let mut protocols = Vec::new();
    let mut nodes = Vec::new();
    let mut speeds: Vec<f64> = Vec::new();
    for c in &result.cells {
        if !protocols.contains(&c.protocol) {
            protocols.push(c.protocol);
        }
        if !nodes.contains(&c.nodes) {
            nodes.push(c.nodes);
        }
        if !speeds.contains(&c.speed_mps) {
            speeds.push(c.speed_mps);
        }
    }
    (protocols, nodes, speeds)
}

pub fn write_figure<W: Write>(out: W, fig: &Figure, result: &SweepResult) -> csv::Result<()> {
    let (protocols, nodes, speeds) = axes(result);
    let fixed_nodes = if nodes.contains(&REFERENCE_NODES) {
        REFERENCE_NODES
    } else {
        nodes.first().copied().unwrap_or(REFERENCE_NODES)
    };
    let fixed_speed = if speeds.contains(&REFERENCE_SPEED) {
        REFERENCE_SPEED
    } else {
        speeds.first().copied().unwrap_or(REFERENCE_SPEED)
    };

    let mut w = csv::Writer::from_writer(out);
    let x_name = match fig.x {
        Axis::Nodes => "nodes",
        Axis::Speed => "speed_mps",
    };
    let mut header = vec![x_name.to_string()];
    header.extend(protocols.iter().map(|p| p.name().to_string()));
    w.write_record(header)?;

    let xs: Vec<(u32, f64)> = match fig.x {
        Axis::Nodes => nodes.iter().map(|&n| (n, fixed_speed)).collect(),
        Axis::Speed => speeds.iter().map(|&s| (fixed_nodes, s)).collect(),
    };
    for (n, s) in xs {
        let mut rec = vec![match fig.x {
            Axis::Nodes => n.to_string(),
            Axis::Speed => num(s),
        }];
        for &p in &protocols {
            rec.push(opt(result.cell(p, n, s).and_then(|c| c.mean(fig.metric))));
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}
