//! Disk-graph links, the first-order radio energy model, and the
//! localization surcharge paid by position-based nodes.
//!
//! Transmitting `k` bits over `d` meters costs `E_elec*k + E_amp*k*d^n`;
//! receiving costs `E_elec*k`. The MAC is idealized: no collisions, no
//! backoff, no retransmissions.

use crate::config::RadioParams;
use crate::geometry::{distance, Vec2};
use crate::node::NodeId;
use crate::packet::{Destination, Packet};
use crate::world::World;

pub fn in_range(a: Vec2, b: Vec2, radio: &RadioParams) -> bool {
    distance(a, b) <= radio.range_m
}

pub fn tx_energy(bits: u64, d: f64, radio: &RadioParams) -> f64 {
    let k = bits as f64;
    radio.e_elec * k + radio.e_amp * k * d.powi(radio.path_loss_exponent as i32)
}

pub fn rx_energy(bits: u64, radio: &RadioParams) -> f64 {
    radio.e_elec * bits as f64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeliveryOutcome {
    /// Nodes that received the packet (may include the sink, may be empty
    /// for a broadcast).
    Delivered(Vec<NodeId>),
    LostOutOfRange,
    LostDeadSender,
    LostDeadReceiver,
}

impl DeliveryOutcome {
    pub fn is_delivered(&self) -> bool {
        matches!(self, DeliveryOutcome::Delivered(_))
    }
}

/// Where a position-based node last paid for a position fix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationState {
    pub last_fix_position: Vec2,
    pub fix_cost_j: f64,
    pub fix_displacement_m: f64,
}

/// Charges a fix when the node has drifted at least `fix_displacement_m`
/// from where it last localized. Returns the updated state and the charge.
pub fn maybe_position_fix(position: Vec2, loc: LocalizationState) -> (LocalizationState, f64) {
    if distance(position, loc.last_fix_position) >= loc.fix_displacement_m {
        (
            LocalizationState {
                last_fix_position: position,
                ..loc
            },
            loc.fix_cost_j,
        )
    } else {
        (loc, 0.0)
    }
}

/// Sends `packet` from `sender`, charging every party per the energy model.
///
/// Unicast amplifier energy uses the true sender-receiver distance; a
/// broadcast is powered for the full range. The sender pays even when the
/// receiver turns out to be unreachable. A node that cannot afford a charge
/// is drained to zero and dies on the spot.
pub fn transmit(world: &mut World, sender: NodeId, packet: &Packet) -> DeliveryOutcome {
    if !pay_tx(world, sender, packet) {
        return DeliveryOutcome::LostDeadSender;
    }
    deliver(world, sender, packet)
}

/// Charges the sender's transmit energy. `false` when the sender is dead or
/// died paying. The sink transmits for free.
pub(crate) fn pay_tx(world: &mut World, sender: NodeId, packet: &Packet) -> bool {
    if sender.is_sink() {
        return true;
    }
    if !world.node(sender).is_alive() {
        return false;
    }
    let radio = world.radio;
    let sender_pos = world.position_of(sender);
    let d_eff = match packet.dst {
        Destination::Unicast(r) => distance(sender_pos, world.position_of(r)),
        Destination::Broadcast => radio.range_m,
    };
    world.charge_tx(sender, tx_energy(packet.bits(), d_eff, &radio))
}

/// Delivers an already-paid packet, charging receivers.
pub(crate) fn deliver(world: &mut World, sender: NodeId, packet: &Packet) -> DeliveryOutcome {
    let radio = world.radio;
    let bits = packet.bits();
    let sender_pos = world.position_of(sender);
    match packet.dst {
        Destination::Unicast(r) => {
            if r.is_sink() {
                return if in_range(sender_pos, world.sink, &radio) {
                    DeliveryOutcome::Delivered(vec![NodeId::SINK])
                } else {
                    DeliveryOutcome::LostOutOfRange
                };
            }
            if !world.node(r).is_alive() {
                return DeliveryOutcome::LostDeadReceiver;
            }
            if !in_range(sender_pos, world.node(r).kin.position, &radio) {
                return DeliveryOutcome::LostOutOfRange;
            }
            if world.charge_rx(r, rx_energy(bits, &radio)) {
                DeliveryOutcome::Delivered(vec![r])
            } else {
                DeliveryOutcome::LostDeadReceiver
            }
        }
        Destination::Broadcast => {
            let rx_cost = rx_energy(bits, &radio);
            let mut receivers = Vec::with_capacity(64);
            for i in 0..world.nodes.len() {
                let id = NodeId(i as u32);
                if id == sender {
                    continue;
                }
                let n = &world.nodes[i];
                if n.is_alive()
                    && in_range(sender_pos, n.kin.position, &radio)
                    && world.charge_rx(id, rx_cost)
                {
                    receivers.push(id);
                }
            }
            if !sender.is_sink() && in_range(sender_pos, world.sink, &radio) {
                receivers.push(NodeId::SINK);
            }
            DeliveryOutcome::Delivered(receivers)
        }
    }
}
