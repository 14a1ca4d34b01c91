//! Mutable state of one trial: nodes, sink, ledger, and per-round protocol
//! scratch space. Owned by a single trial thread.

use std::f64::consts::TAU;

use crate::config::{MobilityParams, RadioParams, SimConfig, WeightParams};
use crate::geometry::{Vec2, ZoneGrid};
use crate::metrics::MetricsLedger;
use crate::mobility::{Kinematics, MobilityFactor};
use crate::node::{EnergyBudget, Node, NodeId, Role};
use crate::protocols::{Announcement, HeadRoute, NeighborTable};
use crate::radio::LocalizationState;
use crate::rng::{RandomStream, StreamPurpose};

/// Protocol state that lives for one round.
#[derive(Debug, Default)]
pub(crate) struct RoundState {
    /// Announcement each node broadcast this round, if any.
    pub announced: Vec<Option<Announcement>>,
    /// Announcements each node received this round, in arrival order.
    pub heard: Vec<Vec<Announcement>>,
    /// Election weight each node computed this round.
    pub weight: Vec<f64>,
    /// Inter-cluster route of each head (non-position protocols).
    pub routes: Vec<Option<HeadRoute>>,
}

impl RoundState {
    fn new(n: usize) -> Self {
        Self {
            announced: vec![None; n],
            heard: vec![Vec::new(); n],
            weight: vec![0.0; n],
            routes: vec![None; n],
        }
    }

    pub fn clear(&mut self) {
        self.announced.iter_mut().for_each(|a| *a = None);
        self.heard.iter_mut().for_each(Vec::clear);
        self.weight.iter_mut().for_each(|w| *w = 0.0);
        self.routes.iter_mut().for_each(|r| *r = None);
    }
}

pub struct World {
    pub config: SimConfig,
    pub radio: RadioParams,
    pub grid: ZoneGrid,
    pub mobility: MobilityParams,
    pub weights: WeightParams,
    pub nodes: Vec<Node>,
    pub sink: Vec2,
    pub ledger: MetricsLedger,
    /// 1-based index of the round in progress (0 before the first round).
    pub round: u64,
    /// Global tick counter since trial start.
    pub tick: u64,
    pub(crate) round_state: RoundState,
    pub(crate) neighbor_tables: Vec<NeighborTable>,
    pub(crate) flood_rng: RandomStream,
}

impl World {
    /// Builds a world with nodes placed uniformly at random. The config must
    /// already be validated.
    pub fn new(config: SimConfig) -> Self {
        let seed = config.seed;
        let mobility = config.mobility();
        let positions: Vec<Vec2> = (0..config.nodes)
            .map(|i| {
                let mut rng = RandomStream::new(seed, i, StreamPurpose::Placement);
                Vec2::new(
                    rng.uniform_range(0.0, config.field.width),
                    rng.uniform_range(0.0, config.field.height),
                )
            })
            .collect();
        let mut world = Self::with_positions(config, &positions);
        for node in &mut world.nodes {
            let mut rng = RandomStream::new(seed, node.id.0, StreamPurpose::Placement);
            // skip the two placement draws
            rng.uniform();
            rng.uniform();
            node.kin.heading = rng.uniform_range(0.0, TAU);
            node.kin.speed = rng
                .gaussian(mobility.mean_speed, mobility.speed_stddev)
                .max(0.0);
            node.kin.next_update_at = mobility.update_interval;
        }
        world
    }

    /// Builds a world with stationary nodes at the given positions; the node
    /// count of `config` is replaced by `positions.len()`. Mobility draws
    /// still happen at update instants, so set a zero mean speed for a truly
    /// static scenario.
    pub fn with_positions(mut config: SimConfig, positions: &[Vec2]) -> Self {
        config.nodes = positions.len() as u32;
        let radio = config.radio();
        let grid = config.zone_grid();
        let mobility = config.mobility();
        let weights = config.weights();
        let position_based = config.protocol.is_position_based();
        let n = positions.len();
        let nodes = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let zone = grid.zone_of_unchecked(p);
                Node {
                    id: NodeId(i as u32),
                    kin: Kinematics {
                        next_update_at: mobility.update_interval,
                        ..Kinematics::stationary(p)
                    },
                    energy: EnergyBudget::new(config.initial_energy_j),
                    role: Role::Unassociated,
                    mobility_factor: MobilityFactor::new(zone),
                    localization: position_based.then_some(LocalizationState {
                        last_fix_position: p,
                        fix_cost_j: config.localization.fix_cost_j,
                        fix_displacement_m: config.localization.fix_displacement_m,
                    }),
                    rng: RandomStream::new(config.seed, i as u32, StreamPurpose::Mobility),
                    election_zone: zone,
                }
            })
            .collect();
        Self {
            radio,
            grid,
            mobility,
            weights,
            sink: config.sink_position(),
            ledger: MetricsLedger::new(n),
            round: 0,
            tick: 0,
            round_state: RoundState::new(n),
            neighbor_tables: vec![NeighborTable::default(); n],
            flood_rng: RandomStream::new(config.seed, u32::MAX, StreamPurpose::Flood),
            nodes,
            config,
        }
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut Node {
        &mut self.nodes[id.index()]
    }

    pub fn position_of(&self, id: NodeId) -> Vec2 {
        if id.is_sink() {
            self.sink
        } else {
            self.nodes[id.index()].kin.position
        }
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_alive()).count()
    }

    pub fn max_id(&self) -> u32 {
        self.nodes.len().saturating_sub(1) as u32
    }

    pub fn heads(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.role.is_head()).map(|n| n.id)
    }

    pub fn is_alive(&self, id: NodeId) -> bool {
        id.is_sink() || self.nodes[id.index()].is_alive()
    }

    fn kill(&mut self, id: NodeId) {
        let node = &mut self.nodes[id.index()];
        if node.role.is_dead() {
            return;
        }
        node.role = Role::Dead;
        if self.ledger.first_death_round.is_none() {
            self.ledger.first_death_round = Some(self.round);
        }
    }

    /// Draws `cost` from `id` and books it under `slot`. Returns `false` if
    /// the node could not afford it (it is drained and killed).
    fn charge(
        &mut self,
        id: NodeId,
        cost: f64,
        slot: fn(&mut crate::metrics::EnergyDraw) -> &mut f64,
    ) -> bool {
        let energy = &mut self.nodes[id.index()].energy;
        let affordable = energy.can_afford(cost);
        let drawn = energy.draw(cost);
        let depleted = energy.is_depleted();
        *slot(&mut self.ledger.energy[id.index()]) += drawn;
        if depleted {
            self.kill(id);
        }
        affordable
    }

    pub(crate) fn charge_tx(&mut self, id: NodeId, cost: f64) -> bool {
        self.charge(id, cost, |e| &mut e.tx)
    }

    pub(crate) fn charge_rx(&mut self, id: NodeId, cost: f64) -> bool {
        self.charge(id, cost, |e| &mut e.rx)
    }

    pub(crate) fn charge_fix(&mut self, id: NodeId, cost: f64) -> bool {
        self.charge(id, cost, |e| &mut e.fix)
    }
}
