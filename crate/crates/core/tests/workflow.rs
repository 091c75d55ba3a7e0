use qgeodiv::channels::{ChannelFile, QuantumChannel};
use qgeodiv::divergences::{
    e_divergence_closed, e_divergence_quadrature, m_divergence, quantum_relative_entropy,
};
use qgeodiv::harness::{run_all, verify_witness, HarnessConfig};
use qgeodiv::linalg::{pauli_x, real_matrix};
use qgeodiv::states::{random_density, validate_density, RandomSpec};
use qgeodiv::{DensityMatrix, Error, GeodesicKind, MatrixFile, MetricKind, QuadratureConfig};

#[test]
fn state_file_round_trip_preserves_divergences() {
    let rho = random_density(&RandomSpec::new(3, 1, 1e-3).unwrap());
    let sigma = random_density(&RandomSpec::new(3, 2, 1e-3).unwrap());
    let rho2 = MatrixFile::from_json(&rho.to_file().to_json()).unwrap().to_state().unwrap();
    let sigma2 = MatrixFile::from_json(&sigma.to_file().to_json()).unwrap().to_state().unwrap();
    for kind in GeodesicKind::ALL {
        assert_eq!(
            e_divergence_closed(kind, &rho, &sigma).unwrap(),
            e_divergence_closed(kind, &rho2, &sigma2).unwrap()
        );
    }
}

#[test]
fn state_validation_names_the_violation() {
    let err = validate_density(&real_matrix(2, &[0.6, 0.1, 0.0, 0.4]), 1e-10).unwrap_err();
    assert!(matches!(err, Error::NotHermitian { .. }));
    assert!(err.to_string().starts_with("NotHermitian"));
    let err = validate_density(&real_matrix(2, &[0.7, 0.0, 0.0, 0.4]), 1e-10).unwrap_err();
    assert!(matches!(err, Error::TraceNotOne { .. }));
    let err = validate_density(&real_matrix(2, &[1.2, 0.0, 0.0, -0.2]), 1e-10).unwrap_err();
    assert!(matches!(err, Error::NotPsd { .. }));
    let err = MatrixFile::from_json(r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0]]}"#)
        .and_then(|f| f.to_state())
        .unwrap_err();
    assert!(matches!(err, Error::InvalidShape(_) | Error::NotSquare { .. }));
}

#[test]
fn rank_deficient_states_are_limited_to_relative_entropy() {
    let rho = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
    let sigma = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
    assert!((quantum_relative_entropy(&rho, &sigma).unwrap() - 2f64.ln()).abs() < 1e-14);
    assert!(matches!(
        e_divergence_closed(GeodesicKind::Sld, &rho, &sigma),
        Err(Error::NotFullRank { .. })
    ));
    let cfg = QuadratureConfig::default();
    assert!(m_divergence(&MetricKind::Bogoljubov, &rho, &sigma, &cfg).is_err());
    assert!(e_divergence_quadrature(GeodesicKind::Bogoljubov, &rho, &sigma, &cfg).is_err());
}

#[test]
fn channel_file_round_trip() {
    let ch = qgeodiv::channels::random_channel(3, 2, 2, 9).unwrap();
    let back = ChannelFile::from_json(&ch.to_file().to_json()).unwrap().to_channel().unwrap();
    assert_eq!(ch.kraus(), back.kraus());
    let bad = ChannelFile {
        dim_in: 2,
        dim_out: 2,
        kraus: vec![MatrixFile::from_matrix(&pauli_x().scale(0.5))],
    };
    assert!(matches!(bad.to_channel(), Err(Error::NotTracePreserving { .. })));
    assert!(QuantumChannel::identity(2).trace_preservation_defect() == 0.0);
}

#[test]
fn report_replays_from_seed_and_witnesses() {
    let cfg = HarnessConfig::from_json(
        r#"{"seed": 99, "trials": 4, "claims": ["flatness-r-transport-noncommuting", "rld-e-m-bs-agree"]}"#,
    )
    .unwrap();
    let a = run_all(&cfg).unwrap();
    let b = run_all(&cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.all_pass);
    assert_eq!(a.config_hash, cfg.hash().unwrap());
    for claim in &a.claims {
        let w = claim.witness.as_ref().unwrap();
        let replay = verify_witness(&claim.id, w, &cfg.quadrature).unwrap();
        assert!((replay - w.value.unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn forced_failure_keeps_a_witness() {
    let cfg = HarnessConfig::from_json(
        r#"{"claims": ["e-divergence-closed-vs-quadrature"],
            "overrides": {"e-divergence-closed-vs-quadrature": {"trials": 3, "tolerance": 1e-18}}}"#,
    )
    .unwrap();
    let report = run_all(&cfg).unwrap();
    assert!(!report.all_pass);
    let record = &report.claims[0];
    assert_eq!(record.witness.as_ref().unwrap().value, Some(record.worst_slack));
}
