mod common;

use common::{interface_config, pulse_config, VACUUM};
use mla_core::config::SimulationConfig;
use mla_core::driver::{run_to_dir, Simulation};
use mla_core::grid::GridSpec;
use mla_core::output::{read_snapshot, snapshot_header, RunManifest};
use mla_core::timestep::compute_time_step;
use mla_core::MlaError;

fn zero_config(steps: usize) -> SimulationConfig {
    let text = format!(
        r#"{{"order": 2, "steps": {steps}, "solution": {{"kind": "zero"}},
        "domains": [{{"material": "mlaMat2", "grid": {{"lo": [0,0], "hi": [1,1], "n": [12,12]}},
                      "boundary": {{"x": ["periodic","periodic"], "y": ["periodic","periodic"]}}}}],
        "output": {{"snapshot_every": 5}}}}"#
    );
    SimulationConfig::from_json(&text).unwrap()
}

#[test]
fn zero_fields_stay_zero() {
    let mut sim = Simulation::from_config(&zero_config(10)).unwrap();
    sim.run().unwrap();
    assert_eq!(sim.step_index(), 10);
    assert_eq!(sim.max_abs_e(), 0.0);
}

#[test]
fn fixed_step_runs_use_the_cfl_step() {
    let cfg = zero_config(10);
    let sim = Simulation::from_config(&cfg).unwrap();
    let grid = GridSpec::new(2, &[0.0, 0.0], &[1.0, 1.0], &[12, 12], 2).unwrap();
    let want = compute_time_step(&sim.domains[0].material, &grid, cfg.cfl);
    assert_eq!(sim.dt, want);
    assert_eq!(sim.dt_max, want);
}

#[test]
fn final_time_is_hit_exactly() {
    let sim = Simulation::from_config(&interface_config(2)).unwrap();
    assert!(sim.dt <= sim.dt_max);
    assert!((sim.dt * sim.steps as f64 - 1.0).abs() < 1e-12);
}

#[test]
fn run_writes_snapshots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = zero_config(10);
    let m = run_to_dir(&cfg, dir.path()).unwrap();
    assert_eq!(m.steps, 10);
    assert_eq!(m.order, 2);
    assert_eq!(m.scheme, "order2");
    let steps: Vec<usize> = m.snapshots.iter().map(|s| s.step).collect();
    assert_eq!(steps, [0, 5, 10]);
    for s in &m.snapshots {
        let snap = read_snapshot(&dir.path().join(&s.file)).unwrap();
        assert_eq!(snap.header, snapshot_header(2, 2, 4));
        assert_eq!(snap.rows.len(), 13 * 13);
        assert!(snap.column("Ey").unwrap().iter().all(|v| *v == 0.0));
    }
    let back = RunManifest::read(dir.path()).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.config, cfg);
}

#[test]
fn interface_run_reports_errors_per_domain() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_to_dir(&interface_config(2), dir.path()).unwrap();
    let errs = m.diagnostics.errors.unwrap();
    assert_eq!(errs.len(), 2);
    assert!(errs.iter().all(|e| e.max() < 0.2 && e.max() > 0.0), "{errs:?}");
    assert_eq!(m.snapshots.len(), 2);
}

#[test]
fn blowup_is_reported_as_instability() {
    let mut sim = Simulation::from_config(&pulse_config(2, VACUUM, 100, 400, 2.5, &[1.0])).unwrap();
    let err = sim.run().unwrap_err();
    assert!(matches!(err, MlaError::NonFiniteField { .. }), "{err}");
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn runs_are_deterministic() {
    let cfg = pulse_config(4, "\"mlaMat2\"", 80, 40, 0.9, &[1.0, 0.0, 0.0, 0.0]);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ma = run_to_dir(&cfg, a.path()).unwrap();
    run_to_dir(&cfg, b.path()).unwrap();
    for s in &ma.snapshots {
        let x = std::fs::read(a.path().join(&s.file)).unwrap();
        let y = std::fs::read(b.path().join(&s.file)).unwrap();
        assert_eq!(x, y);
    }
}
