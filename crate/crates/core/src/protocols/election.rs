//! Cluster-head election at the start of each round.
//!
//! DECA: every node sends exactly one announcement and the local weight
//! maximum becomes head. DEMC, GRC and MAR: each candidate arms a timer
//! that expires earlier the better its score; hearing a better candidate's
//! announcement first cancels the timer for the round. GRC and MAR only
//! let announcements from the node's own zone cancel it.

use crate::config::ProtocolKind;
use crate::node::{NodeId, Role};
use crate::packet::{Destination, Packet, PacketKind, Payload};
use crate::protocols::weights::{
    announcement_delay, better_weight, centerness, deca_weight, demc_weight, grc_rank, grc_weight,
    mar_key, mar_rank,
};
use crate::protocols::Announcement;
use crate::radio::{deliver, pay_tx, DeliveryOutcome};
use crate::world::World;

#[derive(Debug, Clone, PartialEq)]
pub struct ElectionOutcome {
    /// Announcements attempted by nodes alive when the election started.
    pub announcements: u64,
    pub heads: Vec<NodeId>,
    pub alive_at_start: u64,
}

pub fn run_election(world: &mut World) -> ElectionOutcome {
    let alive: Vec<NodeId> = world
        .nodes
        .iter()
        .filter(|n| n.is_alive())
        .map(|n| n.id)
        .collect();
    for &id in &alive {
        let pos = world.node(id).kin.position;
        let zone = world.grid.zone_of_unchecked(pos);
        let node = world.node_mut(id);
        node.election_zone = zone;
        node.role = Role::Unassociated;
    }
    compute_weights(world, &alive);

    let announcements = match world.config.protocol {
        ProtocolKind::Deca => deca_election(world, &alive),
        _ => timer_election(world, &alive),
    };
    world.ledger.election_packets += announcements;
    let heads = world.heads().collect();
    ElectionOutcome {
        announcements,
        heads,
        alive_at_start: alive.len() as u64,
    }
}

/// Stores each alive node's weight (or MAR rank) in the round state.
fn compute_weights(world: &mut World, alive: &[NodeId]) {
    let wp = world.weights;
    let max_id = world.max_id();
    let max_degree = world.nodes.len().saturating_sub(1);
    let max_c = world.grid.max_centerness();
    let protocol = world.config.protocol;
    for &id in alive {
        let node = world.node(id);
        let w = match protocol {
            ProtocolKind::Deca => {
                let degree = world.neighbor_tables[id.index()].len();
                deca_weight(&node.energy, degree, max_degree, id, max_id, &wp)
            }
            ProtocolKind::Demc | ProtocolKind::DemcRecovery => {
                demc_weight(&node.energy, id, max_id, &wp)
            }
            ProtocolKind::Grc | ProtocolKind::GrcRecovery => {
                let center = world
                    .grid
                    .zone_center(node.election_zone)
                    .expect("zone from grid");
                let c = centerness(node.kin.position, center);
                grc_weight(&node.energy, c, max_c, &wp)
            }
            ProtocolKind::Mar => mar_rank(mar_key(&node.mobility_factor, id), max_id),
        };
        world.round_state.weight[id.index()] = w;
    }
}

fn rank_of(world: &World, id: NodeId) -> f64 {
    let w = world.round_state.weight[id.index()];
    match world.config.protocol {
        ProtocolKind::Grc | ProtocolKind::GrcRecovery => grc_rank(w, &world.weights),
        _ => w.clamp(0.0, 1.0),
    }
}

fn announcement_packet(world: &World, id: NodeId) -> (Packet, Announcement) {
    let node = world.node(id);
    let ann = Announcement {
        from: id,
        weight: world.round_state.weight[id.index()],
        zone: node.election_zone,
        position: node.kin.position,
    };
    let position_based = world.config.protocol.is_position_based();
    let packet = Packet {
        kind: PacketKind::ChAnnouncement,
        size_bytes: world.config.control_bytes,
        src: id,
        dst: Destination::Broadcast,
        origin_round: world.round,
        payload: Payload::Announcement {
            score: ann.weight,
            zone: position_based.then_some(ann.zone),
            position: position_based.then_some(ann.position),
        },
    };
    (packet, ann)
}

fn record_heard(world: &mut World, receivers: &[NodeId], ann: Announcement) {
    for r in receivers.iter().filter(|r| !r.is_sink()) {
        world.round_state.heard[r.index()].push(ann);
    }
}

/// One message per node. All announcements go out in the same instant:
/// every sender pays first, then every packet is delivered.
fn deca_election(world: &mut World, alive: &[NodeId]) -> u64 {
    let mut sent = Vec::with_capacity(alive.len());
    for &id in alive {
        let (packet, ann) = announcement_packet(world, id);
        if pay_tx(world, id, &packet) {
            sent.push((packet, ann));
        }
    }
    for (packet, ann) in &sent {
        if let DeliveryOutcome::Delivered(receivers) = deliver(world, ann.from, packet) {
            record_heard(world, &receivers, *ann);
        }
    }
    for (_, ann) in &sent {
        let id = ann.from;
        if !world.node(id).is_alive() {
            continue;
        }
        let own = (ann.weight, id);
        let is_max = world.round_state.heard[id.index()]
            .iter()
            .all(|h| better_weight(own, (h.weight, h.from)));
        if is_max {
            world.round_state.announced[id.index()] = Some(*ann);
            world.node_mut(id).role = Role::ClusterHead;
        }
    }
    alive.len() as u64
}

fn timer_election(world: &mut World, alive: &[NodeId]) -> u64 {
    let t_max = world.weights.t_max;
    let zone_scoped = world.config.protocol.is_position_based();
    let mut order: Vec<(f64, NodeId)> = alive
        .iter()
        .map(|&id| (announcement_delay(rank_of(world, id), t_max), id))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let n = world.nodes.len();
    let mut fired = vec![false; n];
    let mut suppressed = vec![false; n];
    let mut attempts = 0;
    for &(_, id) in &order {
        fired[id.index()] = true;
        if suppressed[id.index()] || !world.node(id).is_alive() {
            continue;
        }
        let (packet, ann) = announcement_packet(world, id);
        attempts += 1;
        if !pay_tx(world, id, &packet) {
            continue;
        }
        world.round_state.announced[id.index()] = Some(ann);
        world.node_mut(id).role = Role::ClusterHead;
        if let DeliveryOutcome::Delivered(receivers) = deliver(world, id, &packet) {
            record_heard(world, &receivers, ann);
            for r in receivers.into_iter().filter(|r| !r.is_sink()) {
                let in_scope = !zone_scoped || world.node(r).election_zone == ann.zone;
                if !fired[r.index()] && in_scope {
                    suppressed[r.index()] = true;
                }
            }
        }
    }
    attempts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SimConfig;
    use crate::geometry::Vec2;
    use crate::node::EnergyBudget;

    fn world(protocol: ProtocolKind, positions: &[Vec2]) -> World {
        let cfg = SimConfig {
            protocol,
            mean_speed_mps: 0.0,
            ..SimConfig::default()
        };
        World::with_positions(cfg, positions)
    }

    #[test]
    fn demc_two_nodes_one_suppressed() {
        let mut w = world(
            ProtocolKind::Demc,
            &[Vec2::new(400.0, 400.0), Vec2::new(500.0, 400.0)],
        );
        // weights ~0.9 (n0) and ~0.4 (n1)
        w.nodes[0].energy = EnergyBudget::with_remaining(3.0, 3.0);
        w.nodes[1].energy = EnergyBudget::with_remaining(3.0, 0.3 * 3.0 / 0.9);
        let out = run_election(&mut w);
        assert_eq!(out.announcements, 1);
        assert_eq!(out.heads, vec![NodeId(0)]);
        assert!(w.round_state.heard[1].iter().any(|a| a.from == NodeId(0)));
    }

    #[test]
    fn grc_zone_scoped_suppression() {
        // different zones but mutually in range: both become heads
        let mut w = world(
            ProtocolKind::Grc,
            &[Vec2::new(125.0, 125.0), Vec2::new(375.0, 125.0)],
        );
        let out = run_election(&mut w);
        assert_eq!(out.announcements, 2);
        assert_eq!(out.heads, vec![NodeId(0), NodeId(1)]);
    }

    #[test]
    fn grc_same_zone_prefers_center() {
        let mut w = world(
            ProtocolKind::Grc,
            &[Vec2::new(10.0, 10.0), Vec2::new(120.0, 130.0)],
        );
        let out = run_election(&mut w);
        assert_eq!(out.heads, vec![NodeId(1)]);
        assert_eq!(out.announcements, 1);
    }

    #[test]
    fn mar_smallest_factor_then_lowest_id() {
        let mut w = world(
            ProtocolKind::Mar,
            &[
                Vec2::new(10.0, 10.0),
                Vec2::new(20.0, 20.0),
                Vec2::new(30.0, 30.0),
            ],
        );
        w.nodes[0].mobility_factor.count = 3;
        let out = run_election(&mut w);
        assert_eq!(out.heads, vec![NodeId(1)]);

        let mut w = world(ProtocolKind::Mar, &[Vec2::new(10.0, 10.0)]);
        assert_eq!(run_election(&mut w).heads, vec![NodeId(0)]);
    }

    #[test]
    fn deca_every_node_announces_once() {
        let positions: Vec<Vec2> = (0..10)
            .map(|i| Vec2::new(50.0 + 90.0 * i as f64, 500.0))
            .collect();
        let mut w = world(ProtocolKind::Deca, &positions);
        let out = run_election(&mut w);
        assert_eq!(out.announcements, 10);
        assert!(!out.heads.is_empty());
        // heads are local weight maxima: no two heads hear each other
        for &h in &out.heads {
            for a in &w.round_state.heard[h.index()] {
                assert!(!out.heads.contains(&a.from));
            }
        }
    }

    #[test]
    fn single_node_announces() {
        let mut w = world(ProtocolKind::Demc, &[Vec2::new(500.0, 500.0)]);
        let out = run_election(&mut w);
        assert_eq!((out.announcements, out.heads.len()), (1, 1));
    }
}
