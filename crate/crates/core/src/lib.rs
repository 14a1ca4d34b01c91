//! Deterministic round-based simulation of six cluster-based routing
//! protocols for mobile wireless sensor networks: DECA, DEMC (with and
//! without recovery), MAR, and GRC (with and without recovery).
//!
//! Build a [`SimConfig`], call [`run_trial`], read the [`TrialResult`].
//! [`run_sweep`] runs a protocol x density x speed grid over many seeds.

pub mod config;
pub mod config_text;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod mobility;
pub mod node;
pub mod packet;
pub mod protocols;
pub mod radio;
pub mod rng;
pub mod sweep;
pub mod world;

pub use config::{
    LocalizationParams, MobilityParams, ProtocolKind, RadioParams, RoundSchedule, SimConfig,
    WeightParams,
};
pub use engine::{run_round, run_trial, run_trial_traced, NullTrace, TraceEvent, TraceSink};
pub use error::{ConfigError, ConfigFileError, GeometryError, SweepError};
pub use geometry::{distance, FieldGeometry, Vec2, ZoneGrid, ZoneId};
pub use metrics::{MetricsLedger, TrialResult};
pub use node::{EnergyBudget, NodeId, Role};
pub use packet::{Destination, Packet, PacketKind, Payload};
pub use radio::{in_range, rx_energy, transmit, tx_energy, DeliveryOutcome};
pub use rng::{RandomStream, StreamPurpose};
pub use sweep::{run_sweep, CellSummary, Stat, SweepResult, SweepSpec};
pub use world::World;
