use crate::node::NodeId;
use crate::packet::{Destination, Packet, PacketKind, Payload};
use crate::radio::{transmit, DeliveryOutcome};
use crate::world::World;

/// DECA neighbor list, refreshed only by hello receptions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NeighborTable {
    /// Indexed by node id: (last-heard tick, advertised weight).
    entries: Vec<Option<(u64, f64)>>,
    len: usize,
}

impl NeighborTable {
    pub fn refresh(&mut self, neighbor: NodeId, tick: u64, weight: f64) {
        let i = neighbor.index();
        if i >= self.entries.len() {
            self.entries.resize(i + 1, None);
        }
        if self.entries[i].is_none() {
            self.len += 1;
        }
        self.entries[i] = Some((tick, weight));
    }

    /// Drops entries not refreshed within `max_age` ticks.
    pub fn evict_older_than(&mut self, now: u64, max_age: u64) {
        for e in &mut self.entries {
            if matches!(e, Some((heard, _)) if now.saturating_sub(*heard) > max_age) {
                *e = None;
                self.len -= 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: NodeId) -> bool {
        matches!(self.entries.get(id.index()), Some(Some(_)))
    }
}

/// Every alive node broadcasts one hello; receivers refresh their table.
pub fn hello_tick(world: &mut World) {
    let size = world.config.control_bytes;
    let now = world.tick;
    for i in 0..world.nodes.len() {
        if !world.nodes[i].is_alive() {
            continue;
        }
        let id = NodeId(i as u32);
        let weight = world.round_state.weight[i];
        let packet = Packet {
            kind: PacketKind::Hello,
            size_bytes: size,
            src: id,
            dst: Destination::Broadcast,
            origin_round: world.round,
            payload: Payload::None,
        };
        world.ledger.hello_packets += 1;
        if let DeliveryOutcome::Delivered(receivers) = transmit(world, id, &packet) {
            for r in receivers.into_iter().filter(|r| !r.is_sink()) {
                world.neighbor_tables[r.index()].refresh(id, now, weight);
            }
        }
    }
    let max_age = 2 * world.config.hello_period_ticks as u64;
    for table in &mut world.neighbor_tables {
        table.evict_older_than(now, max_age);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eviction_after_two_periods() {
        let mut t = NeighborTable::default();
        t.refresh(NodeId(1), 0, 0.5);
        t.refresh(NodeId(2), 15, 0.5);
        t.evict_older_than(20, 20);
        assert_eq!(t.len(), 2);
        t.evict_older_than(21, 20);
        assert!(!t.contains(NodeId(1)));
        assert!(t.contains(NodeId(2)));
    }
}
