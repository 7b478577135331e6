use std::path::Path;
use std::process::{Command, Output};

fn contactsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contactsim")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_csv_and_events() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = contactsim(&["simulate", "--scenario", "rect-circle", "--backend", "sat", "--dt", "0.001", "--duration", "2", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,body_id,x,y,z,q0,q1,q2,q3,vx,vy,vz,wx,wy,wz\n"));
    // 2001 samples of two bodies plus the header.
    assert_eq!(text.lines().count(), 1 + 2 * 2001);
    let events = std::fs::read_to_string(contactsim::export::events_path(&out)).unwrap();
    assert!(events.starts_with("t,pair,phi,rho,Fn,Ft,saturated\n"));
    assert!(events.lines().count() > 1);
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let o = contactsim(&["simulate", "--scenario", "bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown scenario"));
}

#[test]
fn bad_flags_print_the_synopsis() {
    for args in [&["simulate"][..], &["simulate", "--scenario", "rect-rect", "--backend", "gjk"], &["frobnicate"], &["bench", "--repeat", "0"]] {
        let o = contactsim(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{args:?}");
    }
    assert_eq!(contactsim(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = contactsim(&["simulate", "--scenario", "circle-circle", "--backend", "co", "--duration", "0.1", "--format", "json", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let table = contactsim::export::read_json(&out).unwrap();
    assert_eq!(table.samples.len(), 2 * 101);

    let s = contactsim::Scenario::named("circle-circle").unwrap();
    let mut s = s;
    s.config.backend = contactsim::Backend::Co;
    s.config.duration = 0.1;
    let expected = contactsim::export::TrajectoryTable::from(&s.run().unwrap());
    assert_eq!(table, expected);
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{ "config": { "duration": 0.05 }, "bodies": [ {}, { "velocity": [-3.0, 0.0, 0.0] } ] }"#).unwrap();
    let out = dir.path().join("t.json");
    let o = contactsim(&["simulate", "--scenario", "rect-rect", "--config", path(&cfg), "--format", "json", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = contactsim::export::read_json(&out).unwrap();
    assert_eq!(table.samples.len(), 2 * 51);
    assert_eq!(table.samples[1].vx, -3.0);

    // Flags win over the file.
    let o = contactsim(&["simulate", "--scenario", "rect-rect", "--config", path(&cfg), "--duration", "0.01", "--format", "json", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(contactsim::export::read_json(&out).unwrap().samples.len(), 2 * 11);
}

#[test]
fn invalid_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    for text in [r#"{ "config": { "dt": -1.0 } }"#, r#"{ "bodies": [ { "colour": "red" } ] }"#, "not json"] {
        std::fs::write(&cfg, text).unwrap();
        let o = contactsim(&["simulate", "--scenario", "rect-rect", "--config", path(&cfg)]);
        assert_eq!(o.status.code(), Some(1), "{text}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn runtime_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    // Two iterations cannot converge once the bodies are near contact.
    std::fs::write(&cfg, r#"{ "config": { "solver": { "max_iters": 2 } } }"#).unwrap();
    let o = contactsim(&["simulate", "--scenario", "rect-circle", "--backend", "co", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not converge"));

    let o = contactsim(&["simulate", "--scenario", "rect-rect", "--duration", "0.01", "--out", "/nonexistent-dir/t.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/t.csv"));
}

#[test]
fn plots_planar_runs_and_skips_spatial() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let o = contactsim(&["simulate", "--scenario", "bouncing-circle", "--duration", "0.5", "--plot", path(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<polyline").count(), 2);

    let svg3 = dir.path().join("q.svg");
    let o = contactsim(&["simulate", "--scenario", "sphere-cuboid", "--duration", "0.05", "--plot", path(&svg3)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping plot"));
    assert!(!svg3.exists());
}

#[test]
fn bench_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = contactsim(&["bench", "--repeat", "2", "--scenarios", "circle-circle,rect-rect", "--backends", "co", "--calls", "1000", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: contactsim::bench::BenchReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 2);
    assert!(report.rows.iter().all(|r| r.repeat == 2 && r.mean_s > 0.0 && r.error.is_none()));
    assert_eq!(report.narrow_phase.len(), 4);
    // Only one backend was timed, so there is no ratio to report.
    assert_eq!(report.sphere_cuboid_co_over_sat, None);

    let o = contactsim(&["bench", "--scenarios", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}
