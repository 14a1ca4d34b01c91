//! Election scores and the timer that turns a score into an announcement
//! delay. Every term is normalized into `[0, 1]` so the `w` constraints are
//! meaningful across units.

use std::cmp::Ordering;

use crate::config::WeightParams;
use crate::geometry::Vec2;
use crate::mobility::MobilityFactor;
use crate::node::{EnergyBudget, NodeId};

/// Manhattan distance from a node to the center of its zone.
pub fn centerness(pos: Vec2, zone_center: Vec2) -> f64 {
    (zone_center.x - pos.x).abs() + (zone_center.y - pos.y).abs()
}

/// GRC weight: `w1 * E/E0 - w2 * C/C_max`, in `[-w2, w1]`.
pub fn grc_weight(
    energy: &EnergyBudget,
    centerness: f64,
    max_centerness: f64,
    wp: &WeightParams,
) -> f64 {
    let c = if max_centerness > 0.0 {
        centerness / max_centerness
    } else {
        0.0
    };
    wp.w1 * energy.fraction() - wp.w2 * c
}

fn id_ratio(id: NodeId, max_id: u32) -> f64 {
    if max_id == 0 {
        0.0
    } else {
        id.0 as f64 / max_id as f64
    }
}

/// DEMC weight: `w1 * E/E0 + w2 * id/max_id`. The id term breaks ties in
/// favor of the higher identifier.
pub fn demc_weight(energy: &EnergyBudget, id: NodeId, max_id: u32, wp: &WeightParams) -> f64 {
    wp.w1 * energy.fraction() + wp.w2 * id_ratio(id, max_id)
}

/// DECA weight over residual energy, connectivity and identifier.
pub fn deca_weight(
    energy: &EnergyBudget,
    degree: usize,
    max_degree: usize,
    id: NodeId,
    max_id: u32,
    wp: &WeightParams,
) -> f64 {
    wp.w1 * energy.fraction()
        + wp.w2 * (degree as f64 / max_degree.max(1) as f64)
        + wp.w3 * id_ratio(id, max_id)
}

/// MAR election key; the smallest key wins, lower id breaks factor ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MarKey {
    pub mobility_count: u64,
    pub id: NodeId,
}

pub fn mar_key(mf: &MobilityFactor, id: NodeId) -> MarKey {
    MarKey {
        mobility_count: mf.count,
        id,
    }
}

/// Maps a MAR key to a rank in `(0, 1]`, strictly decreasing in the key.
pub fn mar_rank(key: MarKey, max_id: u32) -> f64 {
    let fractional = key.id.0 as f64 / (max_id as f64 + 1.0);
    1.0 / (1.0 + key.mobility_count as f64 + fractional)
}

/// Maps a GRC weight from `[-w2, w1]` onto `[0, 1]`.
pub fn grc_rank(weight: f64, wp: &WeightParams) -> f64 {
    let span = wp.w1 + wp.w2;
    if span > 0.0 {
        ((weight + wp.w2) / span).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Timer delay before a candidate announces: the best rank fires first.
pub fn announcement_delay(rank: f64, t_max: f64) -> f64 {
    t_max * (1.0 - rank.clamp(0.0, 1.0))
}

/// Total order on weights with the lowest id winning exact ties.
pub fn better_weight(a: (f64, NodeId), b: (f64, NodeId)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.1 < b.1,
    }
}
