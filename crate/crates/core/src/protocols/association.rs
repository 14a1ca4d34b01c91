use crate::geometry::{distance, Vec2, ZoneId};
use crate::node::{NodeId, Role};
use crate::packet::{Destination, Packet, PacketKind, Payload};
use crate::protocols::weights::better_weight;
use crate::radio::{in_range, transmit};
use crate::world::World;

/// A head a node heard during the election and can still reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationCandidate {
    pub head: NodeId,
    pub weight: f64,
    pub zone: ZoneId,
    /// Current distance between the node and the head.
    pub distance: f64,
}

/// Picks the head to join among reachable candidates.
///
/// Position-based: the head of `own_zone` if any, else the nearest one.
/// Otherwise: the greatest weight, lowest id on exact ties.
pub fn choose_head(
    candidates: &[AssociationCandidate],
    own_zone: ZoneId,
    position_based: bool,
) -> Option<NodeId> {
    if position_based {
        if let Some(c) = candidates
            .iter()
            .filter(|c| c.zone == own_zone)
            .min_by(|a, b| a.distance.total_cmp(&b.distance).then(a.head.cmp(&b.head)))
        {
            return Some(c.head);
        }
        candidates
            .iter()
            .min_by(|a, b| a.distance.total_cmp(&b.distance).then(a.head.cmp(&b.head)))
            .map(|c| c.head)
    } else {
        candidates
            .iter()
            .copied()
            .reduce(|best, c| {
                if better_weight((c.weight, c.head), (best.weight, best.head)) {
                    c
                } else {
                    best
                }
            })
            .map(|c| c.head)
    }
}

fn candidates_for(world: &World, id: NodeId, pos: Vec2) -> Vec<AssociationCandidate> {
    world.round_state.heard[id.index()]
        .iter()
        .filter(|a| world.round_state.announced[a.from.index()].is_some())
        .filter(|a| world.node(a.from).role.is_head())
        .filter_map(|a| {
            let head_pos = world.node(a.from).kin.position;
            in_range(pos, head_pos, &world.radio).then(|| AssociationCandidate {
                head: a.from,
                weight: a.weight,
                zone: a.zone,
                distance: distance(pos, head_pos),
            })
        })
        .collect()
}

/// Every alive non-head node joins a head with a 25-byte Join; a node with
/// no reachable head, or whose Join is lost, becomes a head of itself.
pub fn associate_all(world: &mut World) {
    let position_based = world.config.protocol.is_position_based();
    for i in 0..world.nodes.len() {
        let node = &world.nodes[i];
        if !node.is_alive() || node.role.is_head() {
            continue;
        }
        let id = node.id;
        let pos = node.kin.position;
        let own_zone = world.grid.zone_of_unchecked(pos);
        let candidates = candidates_for(world, id, pos);
        let Some(head) = choose_head(&candidates, own_zone, position_based) else {
            world.node_mut(id).role = Role::ClusterHead;
            continue;
        };
        let packet = Packet {
            kind: PacketKind::Join,
            size_bytes: world.config.control_bytes,
            src: id,
            dst: Destination::Unicast(head),
            origin_round: world.round,
            payload: Payload::None,
        };
        world.ledger.join_packets += 1;
        let delivered = transmit(world, id, &packet).is_delivered();
        if !world.node(id).is_alive() {
            continue;
        }
        world.node_mut(id).role = if delivered {
            Role::Member { head }
        } else {
            Role::ClusterHead
        };
    }
}
