//! Phase-tagged counters and the four comparison metrics computed from them.

use crate::config::ProtocolKind;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseCounters {
    pub sent: u64,
    pub delivered: u64,
    pub lost: u64,
}

impl PhaseCounters {
    pub fn record(&mut self, delivered: bool) {
        self.sent += 1;
        if delivered {
            self.delivered += 1;
        } else {
            self.lost += 1;
        }
    }

    /// Percentage of this phase's transmissions that were lost.
    pub fn loss_pct(&self) -> Option<f64> {
        (self.sent > 0).then(|| 100.0 * self.lost as f64 / self.sent as f64)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyDraw {
    pub tx: f64,
    pub rx: f64,
    pub fix: f64,
}

impl EnergyDraw {
    pub fn total(&self) -> f64 {
        self.tx + self.rx + self.fix
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Intra,
    Inter,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsLedger {
    pub intra: PhaseCounters,
    pub inter: PhaseCounters,
    pub election_packets: u64,
    pub hello_packets: u64,
    pub gradient_packets: u64,
    pub join_packets: u64,
    pub recovery_requests: u64,
    pub recovery_replies: u64,
    /// Inter-cluster losses at a head with no next hop (included in
    /// `inter.lost`).
    pub inter_unrouted: u64,
    pub energy: Vec<EnergyDraw>,
    pub first_death_round: Option<u64>,
    pub rounds_completed: u64,
    /// Sum over rounds of the alive-node count at each round's start.
    pub alive_at_round_start: u64,
}

impl MetricsLedger {
    pub fn new(nodes: usize) -> Self {
        Self {
            energy: vec![EnergyDraw::default(); nodes],
            ..Self::default()
        }
    }

    pub fn phase_mut(&mut self, phase: Phase) -> &mut PhaseCounters {
        match phase {
            Phase::Intra => &mut self.intra,
            Phase::Inter => &mut self.inter,
        }
    }

    pub fn data_sent(&self) -> u64 {
        self.intra.sent + self.inter.sent
    }

    pub fn data_lost(&self) -> u64 {
        self.intra.lost + self.inter.lost
    }

    pub fn data_delivered(&self) -> u64 {
        self.intra.delivered + self.inter.delivered
    }

    pub fn total_energy_drawn(&self) -> f64 {
        self.energy.iter().map(EnergyDraw::total).sum()
    }
}

/// Percentage of data transmissions lost, over both phases.
pub fn packet_loss_pct(ledger: &MetricsLedger) -> Option<f64> {
    let sent = ledger.data_sent();
    (sent > 0).then(|| 100.0 * ledger.data_lost() as f64 / sent as f64)
}

/// Fraction of data transmissions delivered, over both phases.
pub fn pdr(ledger: &MetricsLedger) -> Option<f64> {
    let sent = ledger.data_sent();
    (sent > 0).then(|| ledger.data_delivered() as f64 / sent as f64)
}

/// Cluster-head announcements per alive node per round. Hellos, joins,
/// gradient beacons and recovery traffic are not counted.
pub fn avg_election_packets_per_node(ledger: &MetricsLedger) -> Option<f64> {
    (ledger.alive_at_round_start > 0)
        .then(|| ledger.election_packets as f64 / ledger.alive_at_round_start as f64)
}

/// Summary of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub config_fingerprint: String,
    pub protocol: ProtocolKind,
    pub nodes: u32,
    pub speed_mps: f64,
    pub seed: u64,
    pub pdr: Option<f64>,
    pub loss_pct: Option<f64>,
    pub intra_loss_pct: Option<f64>,
    pub inter_loss_pct: Option<f64>,
    pub intra_lost: u64,
    pub inter_lost: u64,
    pub lifetime_rounds: u64,
    pub censored: bool,
    pub rounds_completed: u64,
    pub avg_election_pkts: Option<f64>,
    pub election_pkts: u64,
    pub hello_pkts: u64,
    pub gradient_pkts: u64,
    pub join_pkts: u64,
    pub recovery_requests: u64,
    pub recovery_replies: u64,
}

impl TrialResult {
    pub fn from_ledger(
        ledger: &MetricsLedger,
        protocol: ProtocolKind,
        nodes: u32,
        speed_mps: f64,
        seed: u64,
        max_rounds: u64,
        config_fingerprint: String,
    ) -> Self {
        let (lifetime_rounds, censored) = match ledger.first_death_round {
            Some(r) => (r, false),
            None => (max_rounds, true),
        };
        Self {
            config_fingerprint,
            protocol,
            nodes,
            speed_mps,
            seed,
            pdr: pdr(ledger),
            loss_pct: packet_loss_pct(ledger),
            intra_loss_pct: ledger.intra.loss_pct(),
            inter_loss_pct: ledger.inter.loss_pct(),
            intra_lost: ledger.intra.lost,
            inter_lost: ledger.inter.lost,
            lifetime_rounds,
            censored,
            rounds_completed: ledger.rounds_completed,
            avg_election_pkts: avg_election_packets_per_node(ledger),
            election_pkts: ledger.election_packets,
            hello_pkts: ledger.hello_packets,
            gradient_pkts: ledger.gradient_packets,
            join_pkts: ledger.join_packets,
            recovery_requests: ledger.recovery_requests,
            recovery_replies: ledger.recovery_replies,
        }
    }
}
