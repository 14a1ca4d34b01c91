use std::fmt;

use crate::geometry::ZoneId;
use crate::mobility::{Kinematics, MobilityFactor};
use crate::radio::LocalizationState;
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    /// Reserved id of the sink. Sensor ids run from 0 to `nodes - 1`.
    pub const SINK: NodeId = NodeId(u32::MAX);

    pub fn is_sink(self) -> bool {
        self == Self::SINK
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sink() {
            f.write_str("sink")
        } else {
            write!(f, "n{}", self.0)
        }
    }
}

/// Battery state. `remaining` never increases and never drops below zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBudget {
    remaining: f64,
    initial: f64,
}

impl EnergyBudget {
    pub fn new(initial: f64) -> Self {
        Self {
            remaining: initial,
            initial,
        }
    }

    pub fn with_remaining(initial: f64, remaining: f64) -> Self {
        Self {
            remaining: remaining.clamp(0.0, initial),
            initial,
        }
    }

    pub fn remaining(&self) -> f64 {
        self.remaining
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    /// Remaining energy as a fraction of the initial budget.
    pub fn fraction(&self) -> f64 {
        if self.initial > 0.0 {
            self.remaining / self.initial
        } else {
            0.0
        }
    }

    pub fn can_afford(&self, cost: f64) -> bool {
        self.remaining >= cost
    }

    /// Draws up to `cost` joules and returns the amount actually drawn.
    pub fn draw(&mut self, cost: f64) -> f64 {
        let drawn = cost.min(self.remaining).max(0.0);
        self.remaining -= drawn;
        if self.remaining < 0.0 {
            self.remaining = 0.0;
        }
        drawn
    }

    pub fn is_depleted(&self) -> bool {
        self.remaining <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    ClusterHead,
    Member { head: NodeId },
    Unassociated,
    Dead,
}

impl Role {
    pub fn is_head(self) -> bool {
        matches!(self, Role::ClusterHead)
    }

    pub fn is_dead(self) -> bool {
        matches!(self, Role::Dead)
    }
}

/// A sensor node and all of its protocol-local state.
pub struct Node {
    pub id: NodeId,
    pub kin: Kinematics,
    pub energy: EnergyBudget,
    pub role: Role,
    pub mobility_factor: MobilityFactor,
    pub localization: Option<LocalizationState>,
    pub(crate) rng: RandomStream,
    /// Zone at election time (frozen positions).
    pub(crate) election_zone: ZoneId,
}

impl Node {
    pub fn is_alive(&self) -> bool {
        !self.role.is_dead()
    }
}
