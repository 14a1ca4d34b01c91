use mwsn_core::protocols::{recover, run_election, RecoveryOutcome};
use mwsn_core::*;
use proptest::prelude::*;

fn static_cfg(protocol: ProtocolKind) -> SimConfig {
    SimConfig {
        protocol,
        mean_speed_mps: 0.0,
        ..SimConfig::default()
    }
}

// independent restatement of the energy model
fn tx(bits: f64, d: f64) -> f64 {
    50e-9 * bits + 0.0013e-12 * bits * d * d
}

fn rx(bits: f64) -> f64 {
    50e-9 * bits
}

proptest! {
    #[test]
    fn demc_election_matches_argmax(
        n in 1usize..=6,
        spots in prop::collection::vec((0.0f64..150.0, 0.0f64..150.0), 6),
        fractions in prop::collection::vec(0.05f64..=1.0, 6),
    ) {
        let positions: Vec<Vec2> = spots[..n].iter().map(|&(x, y)| Vec2::new(400.0 + x, 400.0 + y)).collect();
        let mut w = World::with_positions(static_cfg(ProtocolKind::Demc), &positions);
        for i in 0..n {
            w.nodes[i].energy = EnergyBudget::with_remaining(3.0, 3.0 * fractions[i]);
        }

        let max_id = (n - 1) as f64;
        let weight = |i: usize| {
            let id = if max_id > 0.0 { i as f64 / max_id } else { 0.0 };
            0.9 * fractions[i] + 0.1 * id
        };
        let mut best = 0;
        for i in 1..n {
            if weight(i) >= weight(best) {
                best = i;
            }
        }

        let out = run_election(&mut w);
        prop_assert_eq!(out.heads, vec![NodeId(best as u32)]);
        prop_assert_eq!(out.announcements, 1);
    }

    #[test]
    fn recovery_succeeds_iff_common_neighbor(
        spots in prop::collection::vec((0.0f64..1000.0, 0.0f64..1000.0), 3..12),
        protocol in prop::sample::select(vec![ProtocolKind::DemcRecovery, ProtocolKind::GrcRecovery]),
    ) {
        let positions: Vec<Vec2> = spots.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        let mut w = World::with_positions(static_cfg(protocol), &positions);
        let range = w.radio.range_m;
        let (s, t) = (positions[0], positions[1]);
        let oracle = positions[2..]
            .iter()
            .any(|&p| distance(p, s) <= range && distance(p, t) <= range);

        let data = Packet {
            kind: PacketKind::AggregatedData,
            size_bytes: 100,
            src: NodeId(0),
            dst: Destination::Unicast(NodeId(1)),
            origin_round: 1,
            payload: Payload::None,
        };
        let out = recover(&mut w, NodeId(0), NodeId(1), &data);
        prop_assert_eq!(out.is_delivered(), oracle);
        if !oracle {
            prop_assert_eq!(out, RecoveryOutcome::NoReplies);
        }
    }
}

#[test]
fn hand_simulated_three_node_round() {
    // member n0 is out of the sink's range; head n1 wins on id
    let member = Vec2::new(500.0, 950.0);
    let head = Vec2::new(500.0, 700.0);
    let mut w = World::with_positions(static_cfg(ProtocolKind::Demc), &[member, head]);
    assert!(run_round(&mut w, &mut NullTrace));

    let range = 250.0 * 2f64.sqrt();
    let head_energy = tx(200.0, range) // announcement
        + rx(200.0) // join
        + rx(200.0) // sink's beacon
        + tx(200.0, range) // own beacon
        + rx(800.0) // data
        + tx(800.0, 200.0); // aggregate to sink
    let member_energy = rx(200.0) // announcement
        + tx(200.0, 250.0) // join
        + rx(200.0) // head's beacon
        + tx(800.0, 250.0); // data

    let l = &w.ledger;
    assert_eq!(l.election_packets, 1);
    assert_eq!(l.join_packets, 1);
    assert_eq!(l.gradient_packets, 2);
    assert_eq!(l.hello_packets, 0);
    assert_eq!((l.recovery_requests, l.recovery_replies), (0, 0));
    assert_eq!((l.intra.sent, l.intra.delivered, l.intra.lost), (1, 1, 0));
    assert_eq!((l.inter.sent, l.inter.delivered, l.inter.lost), (1, 1, 0));
    assert_eq!(l.inter_unrouted, 0);
    assert_eq!(l.alive_at_round_start, 2);
    assert_eq!(l.rounds_completed, 1);
    assert_eq!(l.first_death_round, None);

    assert!((l.energy[1].total() - head_energy).abs() <= 1e-15);
    assert!((l.energy[0].total() - member_energy).abs() <= 1e-15);
    assert!((w.nodes[1].energy.remaining() - (3.0 - head_energy)).abs() <= 1e-15);
    assert!((w.nodes[0].energy.remaining() - (3.0 - member_energy)).abs() <= 1e-15);
    assert_eq!(w.nodes[0].role, Role::Member { head: NodeId(1) });
    assert_eq!(w.nodes[0].kin.position, member);
}
