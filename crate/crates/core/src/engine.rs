//! Round and trial orchestration.
//!
//! A round is `ticks_per_round` one-second ticks. Tick 0 runs the election,
//! tick 1 association and, for non-position protocols, the gradient flood.
//! Members send on `data_tick` and heads forward on `inter_tick`. Every tick
//! ends with any DECA hello due, then movement, mobility-factor accounting,
//! and position fixes. The trial's first hello exchange runs before the
//! first election so neighbor tables are populated.

use std::fmt;

use crate::config::{ProtocolKind, RoundSchedule, SimConfig, TICK_S};
use crate::config_text::fingerprint;
use crate::error::ConfigError;
use crate::metrics::TrialResult;
use crate::mobility::{step, update_mobility_factor};
use crate::node::{NodeId, Role};
use crate::protocols::{
    associate_all, build_gradient, forward_all, hello_tick, intra_cluster_send_all, run_election,
};
use crate::radio::maybe_position_fix;
use crate::world::World;

/// Phase-level happenings reported to a [`TraceSink`].
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    RoundStart {
        alive: usize,
    },
    Hellos {
        sent: u64,
    },
    Election {
        announcements: u64,
        heads: usize,
    },
    Association {
        members: usize,
        heads: usize,
        joins: u64,
    },
    Gradient {
        beacons: u64,
        routed_heads: usize,
    },
    Intra {
        sent: u64,
        delivered: u64,
    },
    Inter {
        heads: usize,
        delivered: usize,
        hops: u32,
        recoveries: u32,
    },
    Death {
        node: NodeId,
    },
    RoundEnd,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::RoundStart { alive } => write!(f, "round-start alive={alive}"),
            TraceEvent::Hellos { sent } => write!(f, "hello sent={sent}"),
            TraceEvent::Election {
                announcements,
                heads,
            } => {
                write!(f, "election announcements={announcements} heads={heads}")
            }
            TraceEvent::Association {
                members,
                heads,
                joins,
            } => {
                write!(
                    f,
                    "association members={members} heads={heads} joins={joins}"
                )
            }
            TraceEvent::Gradient {
                beacons,
                routed_heads,
            } => {
                write!(f, "gradient beacons={beacons} routed_heads={routed_heads}")
            }
            TraceEvent::Intra { sent, delivered } => {
                write!(
                    f,
                    "intra sent={sent} delivered={delivered} lost={}",
                    sent - delivered
                )
            }
            TraceEvent::Inter {
                heads,
                delivered,
                hops,
                recoveries,
            } => write!(
                f,
                "inter heads={heads} reached_sink={delivered} hops={hops} recoveries={recoveries}"
            ),
            TraceEvent::Death { node } => write!(f, "death node={node}"),
            TraceEvent::RoundEnd => f.write_str("round-end"),
        }
    }
}

pub trait TraceSink {
    fn record(&mut self, round: u64, tick: u64, event: TraceEvent);
}

/// Discards every event.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullTrace;

impl TraceSink for NullTrace {
    fn record(&mut self, _round: u64, _tick: u64, _event: TraceEvent) {}
}

impl TraceSink for Vec<(u64, u64, TraceEvent)> {
    fn record(&mut self, round: u64, tick: u64, event: TraceEvent) {
        self.push((round, tick, event));
    }
}

/// Runs one full round. Returns `false` without doing anything when no node
/// is alive.
pub fn run_round(world: &mut World, trace: &mut dyn TraceSink) -> bool {
    let alive = world.alive_count();
    if alive == 0 {
        return false;
    }
    world.round += 1;
    world.round_state.clear();
    world.ledger.alive_at_round_start += alive as u64;
    let round = world.round;
    trace.record(round, world.tick, TraceEvent::RoundStart { alive });

    let dead_before: Vec<bool> = world.nodes.iter().map(|n| !n.is_alive()).collect();
    let schedule = world.config.schedule;
    let protocol = world.config.protocol;
    let hello_period = world.config.hello_period_ticks as u64;

    for t in 0..schedule.ticks_per_round {
        let now = world.tick;
        let hello_due = protocol == ProtocolKind::Deca && now.is_multiple_of(hello_period);
        // the very first exchange precedes the first election
        if hello_due && now == 0 {
            hellos(world, trace, round);
        }
        match t {
            RoundSchedule::ELECTION_TICK => {
                let out = run_election(world);
                trace.record(
                    round,
                    now,
                    TraceEvent::Election {
                        announcements: out.announcements,
                        heads: out.heads.len(),
                    },
                );
            }
            RoundSchedule::ASSOCIATION_TICK => {
                let joins = world.ledger.join_packets;
                associate_all(world);
                debug_assert!(world
                    .nodes
                    .iter()
                    .all(|n| !n.is_alive() || !matches!(n.role, Role::Unassociated)));
                let heads = world.heads().count();
                let members = world
                    .nodes
                    .iter()
                    .filter(|n| matches!(n.role, Role::Member { .. }))
                    .count();
                trace.record(
                    round,
                    now,
                    TraceEvent::Association {
                        members,
                        heads,
                        joins: world.ledger.join_packets - joins,
                    },
                );
                if !protocol.is_position_based() {
                    let beacons = world.ledger.gradient_packets;
                    build_gradient(world);
                    let routed_heads = world.round_state.routes.iter().flatten().count();
                    trace.record(
                        round,
                        now,
                        TraceEvent::Gradient {
                            beacons: world.ledger.gradient_packets - beacons,
                            routed_heads,
                        },
                    );
                }
            }
            _ => {}
        }
        if t == schedule.data_tick {
            let (sent, delivered) = (world.ledger.intra.sent, world.ledger.intra.delivered);
            intra_cluster_send_all(world);
            trace.record(
                round,
                now,
                TraceEvent::Intra {
                    sent: world.ledger.intra.sent - sent,
                    delivered: world.ledger.intra.delivered - delivered,
                },
            );
        }
        if t == schedule.inter_tick {
            let reports = forward_all(world);
            trace.record(
                round,
                now,
                TraceEvent::Inter {
                    heads: reports.len(),
                    delivered: reports.iter().filter(|r| r.delivered).count(),
                    hops: reports.iter().map(|r| r.hops).sum(),
                    recoveries: reports.iter().map(|r| r.recoveries).sum(),
                },
            );
        }
        if hello_due && now > 0 {
            hellos(world, trace, round);
        }
        move_nodes(world);
        world.tick += 1;
    }

    world.ledger.rounds_completed += 1;
    for (i, was_dead) in dead_before.into_iter().enumerate() {
        if !was_dead && !world.nodes[i].is_alive() {
            trace.record(
                round,
                world.tick,
                TraceEvent::Death {
                    node: NodeId(i as u32),
                },
            );
        }
    }
    trace.record(round, world.tick, TraceEvent::RoundEnd);
    true
}

fn hellos(world: &mut World, trace: &mut dyn TraceSink, round: u64) {
    let before = world.ledger.hello_packets;
    hello_tick(world);
    trace.record(
        round,
        world.tick,
        TraceEvent::Hellos {
            sent: world.ledger.hello_packets - before,
        },
    );
}

/// One tick of movement for every alive node, with mobility-factor and
/// position-fix accounting.
fn move_nodes(world: &mut World) {
    let now = world.tick as f64 * TICK_S;
    let params = world.mobility;
    let field = world.config.field;
    for i in 0..world.nodes.len() {
        if !world.nodes[i].is_alive() {
            continue;
        }
        let node = &mut world.nodes[i];
        node.kin = step(node.kin, now, TICK_S, &params, &field, &mut node.rng);
        node.mobility_factor =
            update_mobility_factor(node.mobility_factor, node.kin.position, &world.grid);
        if let Some(loc) = node.localization {
            let (loc, charge) = maybe_position_fix(node.kin.position, loc);
            node.localization = Some(loc);
            if charge > 0.0 {
                world.charge_fix(NodeId(i as u32), charge);
            }
        }
    }
}

/// Runs rounds until the round in which the first node dies completes, or
/// `max_rounds` is reached.
pub fn run_world(world: &mut World, trace: &mut dyn TraceSink) {
    while world.ledger.rounds_completed < world.config.max_rounds {
        if !run_round(world, trace) || world.ledger.first_death_round.is_some() {
            break;
        }
    }
}

pub fn run_trial(config: &SimConfig) -> Result<TrialResult, ConfigError> {
    run_trial_traced(config, &mut NullTrace)
}

pub fn run_trial_traced(
    config: &SimConfig,
    trace: &mut dyn TraceSink,
) -> Result<TrialResult, ConfigError> {
    config.validate()?;
    let mut world = World::new(config.clone());
    run_world(&mut world, trace);
    Ok(result_of(&world))
}

pub fn result_of(world: &World) -> TrialResult {
    let c = &world.config;
    TrialResult::from_ledger(
        &world.ledger,
        c.protocol,
        c.nodes,
        c.mean_speed_mps,
        c.seed,
        c.max_rounds,
        fingerprint(c),
    )
}
