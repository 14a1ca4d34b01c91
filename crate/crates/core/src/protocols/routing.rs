//! Intra-cluster data, the sink-rooted gradient for non-position protocols,
//! and hop-by-hop inter-cluster forwarding.

use crate::geometry::{distance, ZoneGrid};
use crate::metrics::Phase;
use crate::node::{NodeId, Role};
use crate::packet::{Destination, Packet, PacketKind, Payload};
use crate::protocols::recovery::recover;
use crate::protocols::HeadRoute;
use crate::radio::{transmit, DeliveryOutcome};
use crate::world::World;

/// Loop guard on the number of forwarding hops.
pub fn hop_cap(grid: &ZoneGrid) -> u32 {
    2 * (grid.rows() + grid.cols())
}

/// Member sends one data packet to its head. `None` when the node is dead
/// or not a member.
pub fn intra_cluster_send(world: &mut World, member: NodeId) -> Option<DeliveryOutcome> {
    let node = world.node(member);
    let Role::Member { head } = node.role else {
        return None;
    };
    if !node.is_alive() {
        return None;
    }
    let packet = Packet {
        kind: PacketKind::Data,
        size_bytes: world.config.data_bytes,
        src: member,
        dst: Destination::Unicast(head),
        origin_round: world.round,
        payload: Payload::None,
    };
    let outcome = transmit(world, member, &packet);
    world
        .ledger
        .phase_mut(Phase::Intra)
        .record(outcome.is_delivered());
    Some(outcome)
}

pub fn intra_cluster_send_all(world: &mut World) {
    for i in 0..world.nodes.len() {
        intra_cluster_send(world, NodeId(i as u32));
    }
}

fn beacon(world: &World, src: NodeId, dst: Destination, level: u32, source: NodeId) -> Packet {
    Packet {
        kind: PacketKind::GradientBeacon,
        size_bytes: world.config.control_bytes,
        src,
        dst,
        origin_round: world.round,
        payload: Payload::Beacon { level, source },
    }
}

/// Breadth-first beacon flood from the sink over the head overlay.
///
/// A head that hears a beacon directly adopts the sender as parent. A
/// non-head node that hears a beacon relays it once to each head it heard
/// announce this round (or joined) whose own beacon it has not heard; such a
/// head may then route through that node as a gateway.
pub fn build_gradient(world: &mut World) {
    let n = world.nodes.len();
    world.round_state.routes.iter_mut().for_each(|r| *r = None);
    // heads each node has heard a beacon from or relayed to
    let mut done: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut frontier = vec![NodeId::SINK];
    let mut level = 0;
    while !frontier.is_empty() {
        shuffle(&mut frontier, world);
        let mut next = Vec::new();
        for &sender in &frontier {
            if !world.is_alive(sender) {
                continue;
            }
            let packet = beacon(world, sender, Destination::Broadcast, level, sender);
            world.ledger.gradient_packets += 1;
            let DeliveryOutcome::Delivered(receivers) = transmit(world, sender, &packet) else {
                continue;
            };
            let receivers: Vec<NodeId> = receivers.into_iter().filter(|r| !r.is_sink()).collect();
            for &r in &receivers {
                if !sender.is_sink() {
                    done[r.index()].push(sender);
                }
                if world.node(r).role.is_head() && world.round_state.routes[r.index()].is_none() {
                    world.round_state.routes[r.index()] = Some(HeadRoute {
                        level: level + 1,
                        parent: sender,
                        gateway: None,
                    });
                    next.push(r);
                }
            }
            for &r in &receivers {
                if !world.is_alive(r) || world.node(r).role.is_head() {
                    continue;
                }
                for h in relay_targets(world, r) {
                    if h == sender || done[r.index()].contains(&h) || !world.is_alive(h) {
                        continue;
                    }
                    done[r.index()].push(h);
                    let relay = beacon(world, r, Destination::Unicast(h), level, sender);
                    world.ledger.gradient_packets += 1;
                    let ok = transmit(world, r, &relay).is_delivered();
                    if ok && world.round_state.routes[h.index()].is_none() {
                        world.round_state.routes[h.index()] = Some(HeadRoute {
                            level: level + 1,
                            parent: sender,
                            gateway: Some(r),
                        });
                        next.push(h);
                    }
                    if !world.is_alive(r) {
                        break;
                    }
                }
            }
        }
        frontier = next;
        level += 1;
    }
}

/// Heads a non-head node knows of: its own head first, then every head it
/// heard announce, in arrival order.
fn relay_targets(world: &World, id: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    if let Role::Member { head } = world.node(id).role {
        out.push(head);
    }
    for a in &world.round_state.heard[id.index()] {
        if world.node(a.from).role.is_head() && !out.contains(&a.from) {
            out.push(a.from);
        }
    }
    out
}

fn shuffle(ids: &mut [NodeId], world: &mut World) {
    for i in (1..ids.len()).rev() {
        let j = (world.flood_rng.next_u64() % (i as u64 + 1)) as usize;
        ids.swap(i, j);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForwardReport {
    pub origin: NodeId,
    pub hops: u32,
    pub recoveries: u32,
    pub delivered: bool,
}

enum Leg {
    Ok,
    Stop,
}

/// One data transmission toward the next hop, with recovery on an
/// out-of-range failure when enabled.
fn send_leg(world: &mut World, from: NodeId, to: NodeId, report: &mut ForwardReport) -> Leg {
    let packet = Packet {
        kind: PacketKind::AggregatedData,
        size_bytes: world.config.data_bytes,
        src: from,
        dst: Destination::Unicast(to),
        origin_round: world.round,
        payload: Payload::Aggregate {
            origin: report.origin,
            readings: 1,
        },
    };
    report.hops += 1;
    let outcome = transmit(world, from, &packet);
    if outcome.is_delivered() {
        world.ledger.phase_mut(Phase::Inter).record(true);
        return Leg::Ok;
    }
    if outcome == DeliveryOutcome::LostOutOfRange && world.config.recovery_active() {
        report.recoveries += 1;
        if recover(world, from, to, &packet).is_delivered() {
            return Leg::Ok;
        }
        return Leg::Stop;
    }
    world.ledger.phase_mut(Phase::Inter).record(false);
    Leg::Stop
}

fn drop_packet(world: &mut World) {
    world.ledger.phase_mut(Phase::Inter).record(false);
    world.ledger.inter_unrouted += 1;
}

/// Forwards `head`'s aggregate toward the sink until it arrives or a hop
/// fails.
pub fn inter_cluster_forward(world: &mut World, head: NodeId) -> ForwardReport {
    let mut report = ForwardReport {
        origin: head,
        hops: 0,
        recoveries: 0,
        delivered: false,
    };
    let cap = hop_cap(&world.grid);
    let position_based = world.config.protocol.is_position_based();
    let mut holder = head;
    while !holder.is_sink() {
        if report.hops >= cap {
            drop_packet(world);
            return report;
        }
        let legs: Vec<(NodeId, NodeId)> = if position_based {
            match greedy_next_hop(world, holder) {
                Some(next) => vec![(holder, next)],
                None => {
                    drop_packet(world);
                    return report;
                }
            }
        } else {
            match world.round_state.routes[holder.index()] {
                Some(HeadRoute {
                    parent,
                    gateway: Some(g),
                    ..
                }) => vec![(holder, g), (g, parent)],
                Some(route) => vec![(holder, route.parent)],
                None => {
                    drop_packet(world);
                    return report;
                }
            }
        };
        for (from, to) in legs {
            if let Leg::Stop = send_leg(world, from, to, &mut report) {
                return report;
            }
            holder = to;
        }
    }
    report.delivered = true;
    report
}

/// Greedy geographic next hop on announced positions: the sink if it is
/// believed in range, else the heard head closest to the sink among those
/// strictly closer than the holder.
fn greedy_next_hop(world: &World, holder: NodeId) -> Option<NodeId> {
    let believed = world.round_state.announced[holder.index()]
        .map(|a| a.position)
        .unwrap_or(world.node(holder).kin.position);
    let range = world.radio.range_m;
    let own = distance(believed, world.sink);
    if own <= range {
        return Some(NodeId::SINK);
    }
    world.round_state.heard[holder.index()]
        .iter()
        .filter(|a| a.from != holder && distance(believed, a.position) <= range)
        .map(|a| (distance(a.position, world.sink), a.from))
        .filter(|&(d, _)| d < own)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

/// Every alive head forwards one aggregate, in id order.
pub fn forward_all(world: &mut World) -> Vec<ForwardReport> {
    let heads: Vec<NodeId> = world
        .nodes
        .iter()
        .filter(|n| n.is_alive() && n.role.is_head())
        .map(|n| n.id)
        .collect();
    let mut reports = Vec::with_capacity(heads.len());
    for h in heads {
        if world.is_alive(h) {
            reports.push(inter_cluster_forward(world, h));
        }
    }
    reports
}
