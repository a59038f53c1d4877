use std::f64::consts::PI;

use pkns_core::config::{FlowKind, GridSpec, IcKind, Mode};
use pkns_core::radial::{radial_initial_state, RadialGrid};
use pkns_core::selfsim::to_selfsim;
use pkns_core::spectral::TorusGrid;
use pkns_core::torus::torus_initial_state;
use pkns_core::RunConfig64;
use pkns_harness::{execute, Checkpoint, FormatError, HarnessError};

fn torus_config(n_points: usize) -> RunConfig64 {
    let mut cfg = RunConfig64::new(Mode::Torus, GridSpec::Torus { n_points }, 0.1, 4e-3);
    cfg.ic.kind = IcKind::Random;
    cfg.ic.mass = 4.0 * PI;
    cfg.ic.seed = 11;
    cfg.ic.flow = FlowKind::Random;
    cfg.ic.flow_amplitude = 0.3;
    cfg
}

fn samples() -> Vec<Checkpoint> {
    let cfg = torus_config(32);
    let torus = torus_initial_state(&TorusGrid::new(32).unwrap(), &cfg.ic).unwrap();
    let mut ic = cfg.ic.clone();
    ic.kind = IcKind::Gaussian;
    ic.width = 1.0;
    ic.flow = FlowKind::Vortex;
    let radial = radial_initial_state(RadialGrid::new(8.0, 100).unwrap(), &ic).unwrap();
    let selfsim = to_selfsim(&radial).unwrap();
    vec![
        Checkpoint::of_torus(&torus),
        Checkpoint::of_radial(&radial),
        Checkpoint::of_selfsim(&selfsim),
    ]
}

#[test]
fn save_load_save_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, ckpt) in samples().into_iter().enumerate() {
        let a = dir.path().join(format!("{i}a.ckpt"));
        let b = dir.path().join(format!("{i}b.ckpt"));
        ckpt.save(&a).unwrap();
        let loaded = Checkpoint::load(&a).unwrap();
        assert_eq!(loaded, ckpt);
        loaded.save(&b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn header_layout() {
    let bytes = samples()[1].to_bytes();
    assert_eq!(&bytes[..4], b"PKNS");
    assert_eq!(bytes[4], 1);
    assert_eq!(bytes[5], 1);
    assert_eq!(f64::from_le_bytes(bytes[6..14].try_into().unwrap()), 0.0);
    assert_eq!(u64::from_le_bytes(bytes[14..22].try_into().unwrap()), 100);
    assert_eq!(f64::from_le_bytes(bytes[22..30].try_into().unwrap()), 8.0);
    assert_eq!(bytes.len(), 30 + 2 * 100 * 8);
    let torus = samples()[0].to_bytes();
    assert_eq!(torus[5], 0);
    assert_eq!(torus.len(), 14 + 16 + 3 * 32 * 32 * 8);
}

#[test]
fn radial_states_survive_exactly() {
    let ckpt = &samples()[1];
    let state = ckpt.to_radial().unwrap();
    assert_eq!(&Checkpoint::of_radial(&state), ckpt);
    assert!(ckpt.to_torus().is_err());
}

#[test]
fn every_truncation_is_detected() {
    for ckpt in samples() {
        let bytes = ckpt.to_bytes();
        for len in 0..bytes.len() {
            match Checkpoint::from_bytes(&bytes[..len]) {
                Err(FormatError::Truncated { available, .. }) => assert_eq!(available, len),
                other => panic!("prefix of {len} bytes gave {other:?}"),
            }
        }
    }
}

#[test]
fn corrupt_headers_are_rejected() {
    let bytes = samples()[0].to_bytes();
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(
        Checkpoint::from_bytes(&bad),
        Err(FormatError::BadMagic(_))
    ));
    let mut bad = bytes.clone();
    bad[4] = 2;
    assert_eq!(
        Checkpoint::from_bytes(&bad),
        Err(FormatError::BadVersion(2))
    );
    let mut bad = bytes.clone();
    bad[5] = 9;
    assert_eq!(Checkpoint::from_bytes(&bad), Err(FormatError::BadMode(9)));
    let mut bad = bytes.clone();
    bad[22..30].copy_from_slice(&64u64.to_le_bytes());
    assert!(matches!(
        Checkpoint::from_bytes(&bad),
        Err(FormatError::DimensionMismatch(_))
    ));
    let mut bad = bytes.clone();
    bad.push(0);
    assert_eq!(
        Checkpoint::from_bytes(&bad),
        Err(FormatError::TrailingBytes(1))
    );
    // absurd dims fail before any allocation
    let mut bad = bytes;
    bad[14..22].copy_from_slice(&u64::MAX.to_le_bytes());
    bad[22..30].copy_from_slice(&u64::MAX.to_le_bytes());
    assert!(Checkpoint::from_bytes(&bad).is_err());
}

#[test]
fn checkpoint_from_another_grid_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = execute(&torus_config(32), 1).unwrap();
    let path = dir.path().join("coarse.ckpt");
    coarse.checkpoint.save(&path).unwrap();

    let mut fine = torus_config(64);
    fine.ic.kind = IcKind::File(path.clone());
    match execute(&fine, 1) {
        Err(e @ HarnessError::Format(FormatError::DimensionMismatch(_))) => {
            assert_eq!(e.exit_code(), 2)
        }
        other => panic!("expected a dimension mismatch, got {other:?}"),
    }

    // the matching grid resumes from the stored state
    let mut same = torus_config(32);
    same.ic.kind = IcKind::File(path);
    same.t_end = 0.2;
    let resumed = execute(&same, 1).unwrap();
    assert!((resumed.records[0].t - 0.1).abs() < 1e-12);
    assert!((resumed.records[0].mass - coarse.records.last().unwrap().mass).abs() < 1e-12);
}
