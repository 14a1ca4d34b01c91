//! One-relay hop-by-hop recovery: when a head loses its next hop, it asks
//! its neighborhood for a node that can still reach the target and sends
//! the data through that node.

use crate::geometry::distance;
use crate::metrics::Phase;
use crate::node::NodeId;
use crate::packet::{Destination, Packet, PacketKind, Payload};
use crate::radio::{in_range, transmit, DeliveryOutcome};
use crate::world::World;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryOutcome {
    Delivered { relay: NodeId },
    NoReplies,
    RelayLegLost { relay: NodeId },
}

impl RecoveryOutcome {
    pub fn is_delivered(self) -> bool {
        matches!(self, RecoveryOutcome::Delivered { .. })
    }
}

fn control(
    world: &World,
    kind: PacketKind,
    src: NodeId,
    dst: Destination,
    target: NodeId,
) -> Packet {
    Packet {
        kind,
        size_bytes: world.config.control_bytes,
        src,
        dst,
        origin_round: world.round,
        payload: Payload::Recovery { target },
    }
}

/// Relays `data` from `sender` to `target` through one intermediate node.
///
/// Each data leg is booked as an inter-cluster transmission. When nobody
/// replies, the original failed attempt is booked as one inter loss.
pub fn recover(
    world: &mut World,
    sender: NodeId,
    target: NodeId,
    data: &Packet,
) -> RecoveryOutcome {
    let request = control(
        world,
        PacketKind::RecoveryRequest,
        sender,
        Destination::Broadcast,
        target,
    );
    world.ledger.recovery_requests += 1;
    let heard_by = match transmit(world, sender, &request) {
        DeliveryOutcome::Delivered(r) => r,
        _ => Vec::new(),
    };

    let target_pos = world.position_of(target);
    let mut repliers = Vec::new();
    for r in heard_by {
        if r.is_sink() || r == target || !world.is_alive(r) {
            continue;
        }
        if !in_range(world.node(r).kin.position, target_pos, &world.radio) {
            continue;
        }
        let reply = control(
            world,
            PacketKind::RecoveryReply,
            r,
            Destination::Unicast(sender),
            target,
        );
        world.ledger.recovery_replies += 1;
        if transmit(world, r, &reply).is_delivered() {
            repliers.push(r);
        }
    }

    let position_aware = world.config.protocol.is_position_based();
    let relay = if position_aware {
        repliers.iter().copied().min_by(|&a, &b| {
            let da = distance(world.node(a).kin.position, target_pos);
            let db = distance(world.node(b).kin.position, target_pos);
            da.total_cmp(&db).then(a.cmp(&b))
        })
    } else {
        repliers.iter().copied().min()
    };
    let Some(relay) = relay else {
        world.ledger.phase_mut(Phase::Inter).record(false);
        return RecoveryOutcome::NoReplies;
    };

    for (from, to) in [(sender, relay), (relay, target)] {
        let leg = Packet {
            src: from,
            dst: Destination::Unicast(to),
            ..*data
        };
        let ok = transmit(world, from, &leg).is_delivered();
        world.ledger.phase_mut(Phase::Inter).record(ok);
        if !ok {
            return RecoveryOutcome::RelayLegLost { relay };
        }
    }
    RecoveryOutcome::Delivered { relay }
}
