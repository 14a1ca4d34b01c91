//! The six protocol behaviors: election, association, intra-cluster data,
//! inter-cluster forwarding, and hop-by-hop recovery.

mod association;
mod election;
mod hello;
mod recovery;
mod routing;
pub mod weights;

use crate::geometry::{Vec2, ZoneId};
use crate::node::NodeId;

pub use association::{associate_all, choose_head, AssociationCandidate};
pub use election::{run_election, ElectionOutcome};
pub use hello::{hello_tick, NeighborTable};
pub use recovery::{recover, RecoveryOutcome};
pub use routing::{
    build_gradient, forward_all, hop_cap, inter_cluster_forward, intra_cluster_send,
    intra_cluster_send_all, ForwardReport,
};
pub use weights::{
    announcement_delay, centerness, deca_weight, demc_weight, grc_weight, mar_key, MarKey,
};

/// A cluster-head announcement as received by a neighbor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Announcement {
    pub from: NodeId,
    /// The protocol weight (DECA/DEMC/GRC) or the MAR rank.
    pub weight: f64,
    /// Zone of the announcer at election time.
    pub zone: ZoneId,
    /// Position of the announcer at election time. Position-based nodes
    /// route on this; non-position nodes ignore it.
    pub position: Vec2,
}

/// Sink-rooted route of a cluster head for non-position protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadRoute {
    /// Hops from the sink in the head overlay.
    pub level: u32,
    /// Next head toward the sink, or the sink itself.
    pub parent: NodeId,
    /// Member of this head that heard the parent's beacon, when the parent
    /// was not heard directly.
    pub gateway: Option<NodeId>,
}
