//! Trial configuration.
//!
//! Defaults reproduce the published simulation table (1000 m x 1000 m field,
//! 16 zones, 3 J batteries, 100/25-byte packets, 50 nJ/bit electronics,
//! 0.0013 pJ amplifier) plus the declared defaults for every knob the table
//! leaves open.

use std::fmt;
use std::str::FromStr;

use crate::error::ConfigError;
use crate::geometry::{FieldGeometry, Vec2, ZoneGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    Deca,
    Demc,
    DemcRecovery,
    Mar,
    Grc,
    GrcRecovery,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 6] = [
        ProtocolKind::Deca,
        ProtocolKind::Demc,
        ProtocolKind::DemcRecovery,
        ProtocolKind::Mar,
        ProtocolKind::Grc,
        ProtocolKind::GrcRecovery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Deca => "DECA",
            ProtocolKind::Demc => "DEMC",
            ProtocolKind::DemcRecovery => "DEMC_RECOVERY",
            ProtocolKind::Mar => "MAR",
            ProtocolKind::Grc => "GRC",
            ProtocolKind::GrcRecovery => "GRC_RECOVERY",
        }
    }

    /// Zone-scoped election, greedy geographic forwarding, localization cost.
    pub fn is_position_based(self) -> bool {
        matches!(
            self,
            ProtocolKind::Mar | ProtocolKind::Grc | ProtocolKind::GrcRecovery
        )
    }

    pub fn has_recovery(self) -> bool {
        matches!(self, ProtocolKind::DemcRecovery | ProtocolKind::GrcRecovery)
    }

    /// Protocols whose weight follows `w1 * E +/- w2 * X` with `0 < w2 < w1`.
    pub fn uses_two_term_weight(self) -> bool {
        matches!(
            self,
            ProtocolKind::Demc
                | ProtocolKind::DemcRecovery
                | ProtocolKind::Grc
                | ProtocolKind::GrcRecovery
        )
    }

    /// Default `(w1, w2, w3)`; `w3` only matters for DECA.
    pub fn default_weights(self) -> (f64, f64, f64) {
        match self {
            ProtocolKind::Deca => (0.6, 0.3, 0.1),
            ProtocolKind::Demc | ProtocolKind::DemcRecovery => (0.9, 0.1, 0.0),
            ProtocolKind::Grc | ProtocolKind::GrcRecovery => (0.7, 0.3, 0.0),
            // MAR elects on mobility factor; weights are unused.
            ProtocolKind::Mar => (0.7, 0.3, 0.0),
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace(['-', '+'], "_");
        let kind = match norm.as_str() {
            "DECA" => ProtocolKind::Deca,
            "DEMC" => ProtocolKind::Demc,
            "DEMC_RECOVERY" | "DEMC_R" => ProtocolKind::DemcRecovery,
            "MAR" => ProtocolKind::Mar,
            "GRC" => ProtocolKind::Grc,
            "GRC_RECOVERY" | "GRC_R" => ProtocolKind::GrcRecovery,
            _ => return Err(format!("unknown protocol `{s}`")),
        };
        Ok(kind)
    }
}

/// First-order radio constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub range_m: f64,
    /// Electronics energy, J/bit.
    pub e_elec: f64,
    /// Amplifier energy, J/bit/m^exponent.
    pub e_amp: f64,
    pub path_loss_exponent: u8,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            range_m: 250.0 * std::f64::consts::SQRT_2,
            e_elec: 50e-9,
            e_amp: 0.0013e-12,
            path_loss_exponent: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityParams {
    pub mean_speed: f64,
    pub speed_stddev: f64,
    pub turn_stddev: f64,
    pub update_interval: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundSchedule {
    pub ticks_per_round: u32,
    pub data_tick: u32,
    pub inter_tick: u32,
}

impl Default for RoundSchedule {
    fn default() -> Self {
        Self {
            ticks_per_round: 20,
            data_tick: 5,
            inter_tick: 10,
        }
    }
}

impl RoundSchedule {
    pub const ELECTION_TICK: u32 = 0;
    pub const ASSOCIATION_TICK: u32 = 1;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationParams {
    pub fix_cost_j: f64,
    pub fix_displacement_m: f64,
}

impl Default for LocalizationParams {
    fn default() -> Self {
        Self {
            fix_cost_j: 6.0e-4,
            fix_displacement_m: 40.0,
        }
    }
}

/// Complete parameterization of one trial. Optional fields are derived from
/// other fields when unset (see the accessor methods).
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub field: FieldGeometry,
    pub zone_rows: u32,
    pub zone_cols: u32,
    pub protocol: ProtocolKind,
    /// `None` derives the range from the zone diagonal.
    pub range_m: Option<f64>,
    /// Electronics energy in nJ/bit.
    pub e_elec_nj_per_bit: f64,
    /// Amplifier energy in pJ/bit/m^exponent.
    pub e_amp_pj_per_bit_m_exp: f64,
    pub path_loss_exponent: u8,
    pub initial_energy_j: f64,
    pub data_bytes: u32,
    pub control_bytes: u32,
    pub mean_speed_mps: f64,
    /// `None` means 0.2 x mean speed.
    pub speed_stddev_mps: Option<f64>,
    pub turn_stddev_rad: f64,
    pub update_interval_s: f64,
    pub schedule: RoundSchedule,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub w3: Option<f64>,
    pub t_max_s: f64,
    pub hello_period_ticks: u32,
    pub localization: LocalizationParams,
    /// Lets the recovery variants be run with recovery switched off.
    pub recovery_enabled: bool,
    /// `None` places the sink at the field center.
    pub sink: Option<Vec2>,
    pub nodes: u32,
    pub max_rounds: u64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        let radio = RadioParams::default();
        Self {
            field: FieldGeometry::default(),
            zone_rows: 4,
            zone_cols: 4,
            protocol: ProtocolKind::Demc,
            range_m: None,
            e_elec_nj_per_bit: 50.0,
            e_amp_pj_per_bit_m_exp: 0.0013,
            path_loss_exponent: radio.path_loss_exponent,
            initial_energy_j: 3.0,
            data_bytes: 100,
            control_bytes: 25,
            mean_speed_mps: 5.0,
            speed_stddev_mps: None,
            turn_stddev_rad: 0.5,
            update_interval_s: 5.0,
            schedule: RoundSchedule::default(),
            w1: None,
            w2: None,
            w3: None,
            t_max_s: 1.0,
            hello_period_ticks: 10,
            localization: LocalizationParams::default(),
            recovery_enabled: true,
            sink: None,
            nodes: 100,
            max_rounds: 50_000,
            seed: 1,
        }
    }
}

/// Tick length in seconds. Every phase is scheduled on a tick boundary.
pub const TICK_S: f64 = 1.0;

impl SimConfig {
    pub fn zone_grid(&self) -> ZoneGrid {
        ZoneGrid::new(self.zone_rows, self.zone_cols, &self.field).expect("validated zone grid")
    }

    /// Explicit range, or the zone diagonal (a cell of `r/sqrt2 x r/sqrt2`).
    pub fn range_m(&self) -> f64 {
        self.range_m.unwrap_or_else(|| {
            let cw = self.field.width / self.zone_cols.max(1) as f64;
            let ch = self.field.height / self.zone_rows.max(1) as f64;
            cw.hypot(ch)
        })
    }

    pub fn radio(&self) -> RadioParams {
        RadioParams {
            range_m: self.range_m(),
            e_elec: self.e_elec_nj_per_bit / 1e9,
            e_amp: self.e_amp_pj_per_bit_m_exp / 1e12,
            path_loss_exponent: self.path_loss_exponent,
        }
    }

    pub fn mobility(&self) -> MobilityParams {
        MobilityParams {
            mean_speed: self.mean_speed_mps,
            speed_stddev: self.speed_stddev_mps.unwrap_or(0.2 * self.mean_speed_mps),
            turn_stddev: self.turn_stddev_rad,
            update_interval: self.update_interval_s,
        }
    }

    pub fn weights(&self) -> WeightParams {
        let (d1, d2, d3) = self.protocol.default_weights();
        WeightParams {
            w1: self.w1.unwrap_or(d1),
            w2: self.w2.unwrap_or(d2),
            w3: self.w3.unwrap_or(d3),
            t_max: self.t_max_s,
        }
    }

    pub fn sink_position(&self) -> Vec2 {
        self.sink.unwrap_or_else(|| self.field.center())
    }

    pub fn recovery_active(&self) -> bool {
        self.recovery_enabled && self.protocol.has_recovery()
    }

    /// Checks every invariant a trial relies on.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(
                    key,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        let nonneg = |key: &'static str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(
                    key,
                    format!("must be non-negative and finite, got {v}"),
                ))
            }
        };

        positive("field.width", self.field.width)?;
        positive("field.height", self.field.height)?;
        if self.zone_rows == 0 {
            return Err(ConfigError::new("zones.rows", "must be at least 1"));
        }
        if self.zone_cols == 0 {
            return Err(ConfigError::new("zones.cols", "must be at least 1"));
        }
        if let Some(r) = self.range_m {
            positive("radio.range_m", r)?;
        }
        nonneg("radio.e_elec_nj_per_bit", self.e_elec_nj_per_bit)?;
        nonneg("radio.e_amp_pj_per_bit_m_exp", self.e_amp_pj_per_bit_m_exp)?;
        if !matches!(self.path_loss_exponent, 2 | 4) {
            return Err(ConfigError::new(
                "radio.path_loss_exponent",
                format!("must be 2 or 4, got {}", self.path_loss_exponent),
            ));
        }
        positive("energy.initial_j", self.initial_energy_j)?;
        if self.data_bytes == 0 {
            return Err(ConfigError::new("packet.data_bytes", "must be positive"));
        }
        if self.control_bytes == 0 {
            return Err(ConfigError::new("packet.control_bytes", "must be positive"));
        }
        nonneg("mobility.mean_speed_mps", self.mean_speed_mps)?;
        if let Some(sd) = self.speed_stddev_mps {
            nonneg("mobility.speed_stddev_mps", sd)?;
        }
        nonneg("mobility.turn_stddev_rad", self.turn_stddev_rad)?;
        positive("mobility.update_interval_s", self.update_interval_s)?;

        let s = self.schedule;
        if s.ticks_per_round < 3 {
            return Err(ConfigError::new(
                "round.ticks_per_round",
                "must be at least 3",
            ));
        }
        if s.data_tick == 0 || s.data_tick >= s.inter_tick {
            return Err(ConfigError::new(
                "round.data_tick",
                format!(
                    "requires 0 < data_tick < inter_tick, got data_tick={} inter_tick={}",
                    s.data_tick, s.inter_tick
                ),
            ));
        }
        if s.inter_tick >= s.ticks_per_round {
            return Err(ConfigError::new(
                "round.inter_tick",
                format!(
                    "requires inter_tick < ticks_per_round, got inter_tick={} ticks_per_round={}",
                    s.inter_tick, s.ticks_per_round
                ),
            ));
        }

        self.validate_weights()?;
        positive("protocol.t_max_s", self.t_max_s)?;
        if self.hello_period_ticks == 0 {
            return Err(ConfigError::new(
                "deca.hello_period_ticks",
                "must be at least 1",
            ));
        }
        nonneg("loc.fix_cost_j", self.localization.fix_cost_j)?;
        positive(
            "loc.fix_displacement_m",
            self.localization.fix_displacement_m,
        )?;
        if let Some(p) = self.sink {
            if !p.is_finite() {
                return Err(ConfigError::new("sink.x", "sink position must be finite"));
            }
        }
        if self.nodes == 0 {
            return Err(ConfigError::new("sim.nodes", "must be at least 1"));
        }
        if self.nodes == crate::node::NodeId::SINK.0 {
            return Err(ConfigError::new("sim.nodes", "too many nodes"));
        }
        Ok(())
    }

    fn validate_weights(&self) -> Result<(), ConfigError> {
        let w = self.weights();
        for (key, v) in [
            ("protocol.w1", w.w1),
            ("protocol.w2", w.w2),
            ("protocol.w3", w.w3),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::new(
                    key,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        if self.protocol.uses_two_term_weight() {
            if !(w.w2 > 0.0 && w.w2 < w.w1) {
                return Err(ConfigError::new(
                    "protocol.w2",
                    format!(
                        "{} weights violate the constraint 0 < w2 < w1 (w1={}, w2={})",
                        self.protocol, w.w1, w.w2
                    ),
                ));
            }
            if (w.w1 + w.w2 - 1.0).abs() > 1e-9 {
                return Err(ConfigError::new(
                    "protocol.w1",
                    format!(
                        "{} weights must satisfy w1 + w2 = 1 (w1={}, w2={})",
                        self.protocol, w.w1, w.w2
                    ),
                ));
            }
        } else if self.protocol == ProtocolKind::Deca {
            if !(w.w1 > w.w2 && w.w2 > w.w3 && w.w3 > 0.0) {
                return Err(ConfigError::new(
                    "protocol.w3",
                    format!(
                        "DECA weights must satisfy w1 > w2 > w3 > 0 (w1={}, w2={}, w3={})",
                        w.w1, w.w2, w.w3
                    ),
                ));
            }
            if (w.w1 + w.w2 + w.w3 - 1.0).abs() > 1e-9 {
                return Err(ConfigError::new(
                    "protocol.w1",
                    format!(
                        "DECA weights must sum to 1 (w1={}, w2={}, w3={})",
                        w.w1, w.w2, w.w3
                    ),
                ));
            }
        }
        Ok(())
    }
}
