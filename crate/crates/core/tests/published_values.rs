use mwsn_core::config_text;
use mwsn_core::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn first_order_radio_constants() {
    let radio = SimConfig::default().radio();
    assert!(rel(tx_energy(800, 100.0, &radio), 4.00104e-5) <= 1e-12);
    assert!(rel(rx_energy(800, &radio), 4.0e-5) <= 1e-12);
    assert!(rel(rx_energy(200, &radio), 1.0e-5) <= 1e-12);
}

#[test]
fn table_defaults() {
    let c = SimConfig::default();
    assert_eq!(
        config_text::value_of(&c, "energy.initial_j").as_deref(),
        Some("3")
    );
    assert_eq!(
        config_text::value_of(&c, "radio.e_elec_nj_per_bit").as_deref(),
        Some("50")
    );
    assert_eq!(
        config_text::value_of(&c, "radio.e_amp_pj_per_bit_m_exp").as_deref(),
        Some("0.0013")
    );
    assert_eq!(
        config_text::value_of(&c, "packet.data_bytes").as_deref(),
        Some("100")
    );
    assert_eq!(
        config_text::value_of(&c, "packet.control_bytes").as_deref(),
        Some("25")
    );
}

#[test]
fn deca_sends_one_election_packet_per_node() {
    for nodes in [50, 100, 150, 200] {
        let c = SimConfig {
            protocol: ProtocolKind::Deca,
            nodes,
            ..SimConfig::default()
        };
        let r = run_trial(&c).unwrap();
        assert_eq!(r.avg_election_pkts, Some(1.0), "{nodes} nodes");
    }
}
