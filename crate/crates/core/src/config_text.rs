//! The `key = value` config file format.
//!
//! One assignment per line, `#` starts a comment, unknown keys are errors.
//! Optional keys accept `auto`, meaning "derive from other keys". Printing
//! lists every key, so `parse(print(c)) == c`.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::config::{ProtocolKind, SimConfig};
use crate::error::ConfigFileError;
use crate::geometry::Vec2;

/// Where a default value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Listed in the published simulation parameter table.
    PublishedTable,
    /// Computed from other keys.
    Derived,
    /// A modeling choice of this simulator.
    Declared,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::PublishedTable => "published-table",
            Provenance::Derived => "derived",
            Provenance::Declared => "declared-default",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub ty: &'static str,
    pub unit: &'static str,
    pub provenance: Provenance,
    pub note: &'static str,
}

const fn spec(
    key: &'static str,
    ty: &'static str,
    unit: &'static str,
    provenance: Provenance,
    note: &'static str,
) -> KeySpec {
    KeySpec {
        key,
        ty,
        unit,
        provenance,
        note,
    }
}

use Provenance::{Declared, Derived, PublishedTable};

pub const KEYS: &[KeySpec] = &[
    spec("field.width", "float", "m", PublishedTable, "field width"),
    spec("field.height", "float", "m", PublishedTable, "field height"),
    spec(
        "zones.rows",
        "int",
        "-",
        PublishedTable,
        "zone grid rows (16 zones = 4x4)",
    ),
    spec(
        "zones.cols",
        "int",
        "-",
        PublishedTable,
        "zone grid columns",
    ),
    spec(
        "radio.range_m",
        "float|auto",
        "m",
        Derived,
        "auto = zone cell diagonal",
    ),
    spec(
        "radio.e_elec_nj_per_bit",
        "float",
        "nJ/bit",
        PublishedTable,
        "electronics energy",
    ),
    spec(
        "radio.e_amp_pj_per_bit_m_exp",
        "float",
        "pJ/bit/m^n",
        PublishedTable,
        "amplifier energy",
    ),
    spec("radio.path_loss_exponent", "int", "-", Declared, "2 or 4"),
    spec(
        "energy.initial_j",
        "float",
        "J",
        PublishedTable,
        "battery at startup",
    ),
    spec(
        "packet.data_bytes",
        "int",
        "B",
        PublishedTable,
        "data packet size",
    ),
    spec(
        "packet.control_bytes",
        "int",
        "B",
        PublishedTable,
        "broadcast/control packet size",
    ),
    spec(
        "mobility.mean_speed_mps",
        "float",
        "m/s",
        Declared,
        "node speed axis",
    ),
    spec(
        "mobility.speed_stddev_mps",
        "float|auto",
        "m/s",
        Derived,
        "auto = 0.2 x mean speed",
    ),
    spec(
        "mobility.turn_stddev_rad",
        "float",
        "rad",
        Declared,
        "heading perturbation per update",
    ),
    spec(
        "mobility.update_interval_s",
        "float",
        "s",
        Declared,
        "speed/heading redraw period",
    ),
    spec(
        "round.ticks_per_round",
        "int",
        "tick",
        Declared,
        "1 tick = 1 s",
    ),
    spec(
        "round.data_tick",
        "int",
        "tick",
        Declared,
        "intra-cluster send tick",
    ),
    spec(
        "round.inter_tick",
        "int",
        "tick",
        Declared,
        "inter-cluster forwarding tick",
    ),
    spec(
        "protocol.kind",
        "enum",
        "-",
        Declared,
        "DECA|DEMC|DEMC_RECOVERY|MAR|GRC|GRC_RECOVERY",
    ),
    spec(
        "protocol.w1",
        "float|auto",
        "-",
        Declared,
        "auto = per-protocol default",
    ),
    spec(
        "protocol.w2",
        "float|auto",
        "-",
        Declared,
        "auto = per-protocol default",
    ),
    spec(
        "protocol.w3",
        "float|auto",
        "-",
        Declared,
        "DECA only; auto = per-protocol default",
    ),
    spec(
        "protocol.t_max_s",
        "float",
        "s",
        Declared,
        "election timer window",
    ),
    spec(
        "deca.hello_period_ticks",
        "int",
        "tick",
        Declared,
        "DECA hello period",
    ),
    spec(
        "loc.fix_cost_j",
        "float",
        "J",
        Declared,
        "energy per position fix",
    ),
    spec(
        "loc.fix_displacement_m",
        "float",
        "m",
        Declared,
        "displacement that triggers a fix",
    ),
    spec(
        "recovery.enabled",
        "bool",
        "-",
        Declared,
        "recovery for *_RECOVERY protocols",
    ),
    spec("sink.x", "float|auto", "m", Derived, "auto = field center"),
    spec("sink.y", "float|auto", "m", Derived, "auto = field center"),
    spec("sim.nodes", "int", "-", Declared, "node count"),
    spec(
        "sim.max_rounds",
        "int",
        "round",
        Declared,
        "censoring bound",
    ),
    spec("sim.seed", "int", "-", Declared, "trial seed"),
];

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

/// Current value of `key` in `cfg`, formatted as the file would spell it.
pub fn value_of(cfg: &SimConfig, key: &str) -> Option<String> {
    let v = match key {
        "field.width" => cfg.field.width.to_string(),
        "field.height" => cfg.field.height.to_string(),
        "zones.rows" => cfg.zone_rows.to_string(),
        "zones.cols" => cfg.zone_cols.to_string(),
        "radio.range_m" => opt(cfg.range_m),
        "radio.e_elec_nj_per_bit" => cfg.e_elec_nj_per_bit.to_string(),
        "radio.e_amp_pj_per_bit_m_exp" => cfg.e_amp_pj_per_bit_m_exp.to_string(),
        "radio.path_loss_exponent" => cfg.path_loss_exponent.to_string(),
        "energy.initial_j" => cfg.initial_energy_j.to_string(),
        "packet.data_bytes" => cfg.data_bytes.to_string(),
        "packet.control_bytes" => cfg.control_bytes.to_string(),
        "mobility.mean_speed_mps" => cfg.mean_speed_mps.to_string(),
        "mobility.speed_stddev_mps" => opt(cfg.speed_stddev_mps),
        "mobility.turn_stddev_rad" => cfg.turn_stddev_rad.to_string(),
        "mobility.update_interval_s" => cfg.update_interval_s.to_string(),
        "round.ticks_per_round" => cfg.schedule.ticks_per_round.to_string(),
        "round.data_tick" => cfg.schedule.data_tick.to_string(),
        "round.inter_tick" => cfg.schedule.inter_tick.to_string(),
        "protocol.kind" => cfg.protocol.name().to_string(),
        "protocol.w1" => opt(cfg.w1),
        "protocol.w2" => opt(cfg.w2),
        "protocol.w3" => opt(cfg.w3),
        "protocol.t_max_s" => cfg.t_max_s.to_string(),
        "deca.hello_period_ticks" => cfg.hello_period_ticks.to_string(),
        "loc.fix_cost_j" => cfg.localization.fix_cost_j.to_string(),
        "loc.fix_displacement_m" => cfg.localization.fix_displacement_m.to_string(),
        "recovery.enabled" => cfg.recovery_enabled.to_string(),
        "sink.x" => opt(cfg.sink.map(|p| p.x)),
        "sink.y" => opt(cfg.sink.map(|p| p.y)),
        "sim.nodes" => cfg.nodes.to_string(),
        "sim.max_rounds" => cfg.max_rounds.to_string(),
        "sim.seed" => cfg.seed.to_string(),
        _ => return None,
    };
    Some(v)
}

/// Every key with its current value, one `key = value` line each.
pub fn print(cfg: &SimConfig) -> String {
    let mut out = String::new();
    for k in KEYS {
        out.push_str(k.key);
        out.push_str(" = ");
        out.push_str(&value_of(cfg, k.key).expect("every listed key has a value"));
        out.push('\n');
    }
    out
}

/// Short content hash of the canonical config text.
pub fn fingerprint(cfg: &SimConfig) -> String {
    let digest = Sha256::digest(print(cfg).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn num<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse `{value}` as a number"))
}

fn float(value: &str) -> Result<f64, String> {
    let v: f64 = num(value)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{value}` is not finite"))
    }
}

fn auto_float(value: &str) -> Result<Option<f64>, String> {
    if value.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        float(value).map(Some)
    }
}

/// Sink coordinates collected while parsing; resolved once the field size
/// is known.
#[derive(Default)]
struct SinkParts {
    x: Option<f64>,
    y: Option<f64>,
}

fn assign(cfg: &mut SimConfig, sink: &mut SinkParts, key: &str, value: &str) -> Result<(), String> {
    match key {
        "field.width" => cfg.field.width = float(value)?,
        "field.height" => cfg.field.height = float(value)?,
        "zones.rows" => cfg.zone_rows = num(value)?,
        "zones.cols" => cfg.zone_cols = num(value)?,
        "radio.range_m" => cfg.range_m = auto_float(value)?,
        "radio.e_elec_nj_per_bit" => cfg.e_elec_nj_per_bit = float(value)?,
        "radio.e_amp_pj_per_bit_m_exp" => cfg.e_amp_pj_per_bit_m_exp = float(value)?,
        "radio.path_loss_exponent" => cfg.path_loss_exponent = num(value)?,
        "energy.initial_j" => cfg.initial_energy_j = float(value)?,
        "packet.data_bytes" => cfg.data_bytes = num(value)?,
        "packet.control_bytes" => cfg.control_bytes = num(value)?,
        "mobility.mean_speed_mps" => cfg.mean_speed_mps = float(value)?,
        "mobility.speed_stddev_mps" => cfg.speed_stddev_mps = auto_float(value)?,
        "mobility.turn_stddev_rad" => cfg.turn_stddev_rad = float(value)?,
        "mobility.update_interval_s" => cfg.update_interval_s = float(value)?,
        "round.ticks_per_round" => cfg.schedule.ticks_per_round = num(value)?,
        "round.data_tick" => cfg.schedule.data_tick = num(value)?,
        "round.inter_tick" => cfg.schedule.inter_tick = num(value)?,
        "protocol.kind" => cfg.protocol = value.parse::<ProtocolKind>()?,
        "protocol.w1" => cfg.w1 = auto_float(value)?,
        "protocol.w2" => cfg.w2 = auto_float(value)?,
        "protocol.w3" => cfg.w3 = auto_float(value)?,
        "protocol.t_max_s" => cfg.t_max_s = float(value)?,
        "deca.hello_period_ticks" => cfg.hello_period_ticks = num(value)?,
        "loc.fix_cost_j" => cfg.localization.fix_cost_j = float(value)?,
        "loc.fix_displacement_m" => cfg.localization.fix_displacement_m = float(value)?,
        "recovery.enabled" => {
            cfg.recovery_enabled = match value {
                "true" => true,
                "false" => false,
                _ => return Err(format!("expected true or false, got `{value}`")),
            }
        }
        "sink.x" => sink.x = auto_float(value)?,
        "sink.y" => sink.y = auto_float(value)?,
        "sim.nodes" => cfg.nodes = num(value)?,
        "sim.max_rounds" => cfg.max_rounds = num(value)?,
        "sim.seed" => cfg.seed = num(value)?,
        _ => return Err("unknown key".to_string()),
    }
    Ok(())
}

/// Parses config text without validating it. Missing keys keep their
/// defaults. Also returns the line on which each key was set.
pub fn parse_unvalidated(
    text: &str,
) -> Result<(SimConfig, HashMap<String, usize>), ConfigFileError> {
    let mut cfg = SimConfig::default();
    let mut sink = SinkParts::default();
    let mut lines: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigFileError {
                line: Some(line_no),
                key: content.to_string(),
                message: "expected `key = value`".to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some(prev) = lines.get(key) {
            return Err(ConfigFileError {
                line: Some(line_no),
                key: key.to_string(),
                message: format!("duplicate key, first set on line {prev}"),
            });
        }
        assign(&mut cfg, &mut sink, key, value).map_err(|message| ConfigFileError {
            line: Some(line_no),
            key: key.to_string(),
            message,
        })?;
        lines.insert(key.to_string(), line_no);
    }
    cfg.sink = match (sink.x, sink.y) {
        (None, None) => None,
        (x, y) => {
            let c = cfg.field.center();
            Some(Vec2::new(x.unwrap_or(c.x), y.unwrap_or(c.y)))
        }
    };
    Ok((cfg, lines))
}

/// Parses and validates config text.
pub fn parse(text: &str) -> Result<SimConfig, ConfigFileError> {
    let (cfg, lines) = parse_unvalidated(text)?;
    cfg.validate().map_err(|e| ConfigFileError {
        line: lines.get(e.key).copied(),
        key: e.key.to_string(),
        message: e.message,
    })?;
    Ok(cfg)
}
