use std::fmt;

use crate::geometry::{Vec2, ZoneId};
use crate::node::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PacketKind {
    ChAnnouncement,
    Join,
    Hello,
    Data,
    AggregatedData,
    GradientBeacon,
    RecoveryRequest,
    RecoveryReply,
}

impl PacketKind {
    pub fn is_data(self) -> bool {
        matches!(self, PacketKind::Data | PacketKind::AggregatedData)
    }
}

impl fmt::Display for PacketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PacketKind::ChAnnouncement => "ch-announcement",
            PacketKind::Join => "join",
            PacketKind::Hello => "hello",
            PacketKind::Data => "data",
            PacketKind::AggregatedData => "aggregate",
            PacketKind::GradientBeacon => "gradient-beacon",
            PacketKind::RecoveryRequest => "recovery-request",
            PacketKind::RecoveryReply => "recovery-reply",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Destination {
    Unicast(NodeId),
    Broadcast,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Payload {
    None,
    Announcement {
        score: f64,
        zone: Option<ZoneId>,
        position: Option<Vec2>,
    },
    Beacon {
        level: u32,
        source: NodeId,
    },
    Aggregate {
        origin: NodeId,
        readings: u32,
    },
    Recovery {
        target: NodeId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub kind: PacketKind,
    pub size_bytes: u32,
    pub src: NodeId,
    pub dst: Destination,
    pub origin_round: u64,
    pub payload: Payload,
}

impl Packet {
    pub fn bits(&self) -> u64 {
        self.size_bytes as u64 * 8
    }
}
