use std::f64::consts::PI;

use pkns_core::config::{FlowKind, GridSpec, IcKind, Mode};
use pkns_core::RunConfig64;
use pkns_harness::{parse_config, render_config, ConfigDocument, ConfigError};

const MINIMAL_TORUS: &str = "
[run]
mode = torus
t_end = 1

[grid]
n_points = 64

[ic]
mass = 2
";

#[test]
fn minimal_torus_config_gets_defaults() {
    let cfg = parse_config(MINIMAL_TORUS).unwrap();
    assert_eq!(cfg.mode, Mode::Torus);
    assert_eq!(cfg.grid, GridSpec::Torus { n_points: 64 });
    assert_eq!(cfg.control.cfl, 0.5);
    assert_eq!(cfg.control.dt_min, 1e-10);
    assert_eq!(cfg.diag_every, 10);
    assert_eq!(cfg.ic.mass, 2.0);
    assert_eq!(cfg.ic.kind, IcKind::Gaussian);
}

#[test]
fn pi_suffix_is_exact() {
    let text = MINIMAL_TORUS.replace("mass = 2", "mass = \"4pi\"");
    assert_eq!(parse_config(&text).unwrap().ic.mass, 4.0 * PI);
    let text = MINIMAL_TORUS.replace("mass = 2", "mass = 7.5pi  # just below 8π");
    assert_eq!(parse_config(&text).unwrap().ic.mass, 7.5 * PI);
}

fn error_of(text: &str) -> ConfigError {
    parse_config(text).unwrap_err()
}

#[test]
fn duplicate_key_is_named_with_its_line() {
    let text = format!("{MINIMAL_TORUS}width = 0.2\nmass = 3\n");
    let err = error_of(&text);
    assert_eq!(err.key.as_deref(), Some("mass"));
    assert_eq!(err.line, Some(12));
    assert!(err.to_string().contains("duplicate"), "{err}");
    assert!(err.to_string().contains("line 10"), "{err}");
}

#[test]
fn unknown_and_misplaced_keys_are_rejected() {
    let err = error_of(&MINIMAL_TORUS.replace("mass = 2", "mass = 2\ncolour = red"));
    assert_eq!((err.line, err.key.as_deref()), (Some(11), Some("colour")));
    let err = error_of(&MINIMAL_TORUS.replace("t_end = 1", "t_end = 1\nmass = 2"));
    assert_eq!(err.key.as_deref(), Some("mass"));
    assert!(err.message.contains("[ic]"), "{err}");
    let err = error_of(&MINIMAL_TORUS.replace("[grid]", "[mesh]"));
    assert_eq!(err.line, Some(6));
    assert!(error_of("mode = torus").message.contains("section"));
    assert!(error_of(&MINIMAL_TORUS.replace("t_end = 1", "t_end"))
        .message
        .contains("key = value"));
}

#[test]
fn grid_keys_must_match_the_mode() {
    let err = error_of(&MINIMAL_TORUS.replace("n_points = 64", "r_max = 10\nn_r = 128"));
    assert_eq!(err.key.as_deref(), Some("r_max"));
    let err = error_of(&MINIMAL_TORUS.replace("mode = torus", "mode = radial"));
    assert_eq!(err.key.as_deref(), Some("n_points"));
    let err = error_of(&MINIMAL_TORUS.replace("n_points = 64", "n_points = 64\nmax_cells = 128"));
    assert_eq!(err.key.as_deref(), Some("max_cells"));
}

#[test]
fn missing_and_invalid_values() {
    assert_eq!(
        error_of(&MINIMAL_TORUS.replace("mass = 2", ""))
            .key
            .as_deref(),
        Some("mass")
    );
    assert_eq!(
        error_of(&MINIMAL_TORUS.replace("mode = torus", ""))
            .key
            .as_deref(),
        Some("mode")
    );
    let err = error_of(&MINIMAL_TORUS.replace("mass = 2", "mass = heavy"));
    assert_eq!((err.line, err.key.as_deref()), (Some(10), Some("mass")));
    let err = error_of(&MINIMAL_TORUS.replace("n_points = 64", "n_points = -64"));
    assert_eq!(err.key.as_deref(), Some("n_points"));
    // semantic validation of the assembled config
    assert!(error_of(&MINIMAL_TORUS.replace("mass = 2", "mass = -1"))
        .message
        .contains("mass"));
    assert!(
        error_of(&MINIMAL_TORUS.replace("n_points = 64", "n_points = 63"))
            .message
            .contains("n_points")
    );
    assert!(
        error_of(&MINIMAL_TORUS.replace("mass = 2", "mass = 2\nfile = x.ckpt"))
            .key
            .as_deref()
            == Some("file")
    );
}

#[test]
fn render_round_trips_every_field() {
    let mut cfg = RunConfig64::new(
        Mode::Radial,
        GridSpec::Radial {
            r_max: 10.0,
            n_r: 1024,
        },
        6.25,
        1e-2,
    );
    cfg.ic.mass = 8.5 * PI;
    cfg.ic.width = 0.1 + 0.2;
    cfg.ic.flow = FlowKind::Vortex;
    cfg.ic.flow_amplitude = -1.0 / 3.0;
    cfg.ic.seed = u64::MAX;
    cfg.max_cells = Some(131072);
    cfg.delta = 1e-300;
    cfg.coupling.chemotaxis = 0.7;
    cfg.out_dir = "runs/a b".into();
    assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);

    let mut torus = RunConfig64::new(Mode::Torus, GridSpec::Torus { n_points: 128 }, 10.0, 4e-3);
    torus.ic.kind = IcKind::File("state.ckpt".into());
    torus.ic.mass = 1.0;
    torus.ic.flow = FlowKind::Shear;
    assert_eq!(parse_config(&render_config(&torus)).unwrap(), torus);
}

#[test]
fn document_overrides_replace_values() {
    let mut doc = ConfigDocument::parse(MINIMAL_TORUS).unwrap();
    doc.set("ic.mass", "6pi").unwrap();
    doc.set("seed", "3").unwrap();
    let cfg = doc.to_config().unwrap();
    assert_eq!(cfg.ic.mass, 6.0 * PI);
    assert_eq!(cfg.ic.seed, 3);
}
