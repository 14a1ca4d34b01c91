use thiserror::Error;

use crate::geometry::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("field dimensions must be positive and finite, got {width} x {height}")]
    InvalidField { width: f64, height: f64 },
    #[error("zone grid must have at least one row and column, got {rows} x {cols}")]
    InvalidGrid { rows: u32, cols: u32 },
    #[error("position {pos} lies outside the field")]
    OutsideField { pos: Vec2 },
    #[error("zone {zone} is out of range for a grid of {count} zones")]
    InvalidZone { zone: u32, count: u32 },
}

/// A configuration rejected before any trial work starts. `key` names the
/// offending configuration key so callers can point at the source line.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{key}: {message}")]
pub struct ConfigError {
    pub key: &'static str,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: &'static str, message: impl Into<String>) -> Self {
        Self {
            key,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep axis `{0}` is empty")]
    EmptyAxis(&'static str),
    #[error("trial failed for {protocol} nodes={nodes} speed={speed} seed={seed}: {source}")]
    Trial {
        protocol: String,
        nodes: u32,
        speed: f64,
        seed: u64,
        #[source]
        source: ConfigError,
    },
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// A config file that failed to parse or validate. `line` is the 1-based
/// source line of the offending key, when the key appeared in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFileError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigFileError {}
