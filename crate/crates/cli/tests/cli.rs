use std::path::Path;
use std::process::{Command, Output};

use entdesign_core::designer::{synthesize, AnsatzParams, RenormalizationParams, DEFAULT_STEPS};
use entdesign_core::dynamics::{evolve_lindblad, ChannelSpec};
use entdesign_core::trajectory::TargetTrajectory;

fn entdesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entdesign")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| if x.is_empty() { f64::NAN } else { x.parse().unwrap() }).collect())
        .collect();
    (header, rows)
}

fn error_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("stderr is JSON: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn optimize_q_prints_optimum() {
    let out = entdesign(&["optimize-q"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[0] - 1.345).abs() <= 5e-3);
    assert!(row[1] < 5e-3);
}

#[test]
fn waveform_round_trip_matches_in_process_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let wave = dir.path().join("wave.csv");
    let series = dir.path().join("series.csv");
    let design = entdesign(&["design", "--family", "exp", "--kappa", "1", "--t-final", "10", "--output", path_str(&wave)]);
    assert!(design.status.success(), "{}", String::from_utf8_lossy(&design.stderr));
    let (_, wave_rows) = read_table(&wave);
    assert!(wave_rows.iter().all(|r| r[1].is_finite()));

    let evolve = entdesign(&[
        "evolve", "--waveform", path_str(&wave), "--channel", "pd", "--gamma", "0.05", "--output", path_str(&series),
    ]);
    assert!(evolve.status.success(), "{}", String::from_utf8_lossy(&evolve.stderr));
    let (header, rows) = read_table(&series);
    assert_eq!(header, ["t", "S", "S_L", "C", "EoF"]);

    let traj = TargetTrajectory::exp_saturation(1.0, 10.0).unwrap();
    let waveform = synthesize(&traj, AnsatzParams::default(), RenormalizationParams::default(), DEFAULT_STEPS).unwrap();
    let direct = evolve_lindblad(&waveform, ChannelSpec::phase_damping(0.05).unwrap()).unwrap();
    assert_eq!(rows.len(), direct.len());
    let mut worst: f64 = 0.0;
    for (row, m) in rows.iter().zip(direct.measures()) {
        assert!((0.0..=1.0).contains(&row[4]));
        for (a, b) in row[1..].iter().zip([m.entropy, m.linear_entropy, m.concurrence, m.eof]) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-9, "round-trip gap {worst:e}");
}

#[test]
fn json_waveform_is_accepted_by_evolve() {
    let dir = tempfile::tempdir().unwrap();
    let wave = dir.path().join("wave.json");
    assert!(entdesign(&["design", "--family", "triangle", "--format", "json", "--output", path_str(&wave)]).status.success());
    let out = entdesign(&["evolve", "--waveform", path_str(&wave), "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["samples"].as_array().unwrap().len(), DEFAULT_STEPS + 1);
}

#[test]
fn sampled_target_is_designed() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let body: String = (0..=100)
        .map(|k| {
            let t = k as f64 * 0.1;
            format!("{t},{}\n", 1.0 - (-t).exp())
        })
        .collect();
    std::fs::write(&samples, format!("t,f\n{body}")).unwrap();
    let out = entdesign(&["design", "--samples", path_str(&samples), "--steps", "2000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2002);
}

#[test]
fn exit_codes_are_distinct_and_documented() {
    let help = String::from_utf8(entdesign(&["--help"]).stdout).unwrap();
    for code in ["2", "3", "4", "5", "6", "7"] {
        assert!(help.contains(&format!("  {code}  ")), "--help lists exit code {code}");
    }

    assert_eq!(entdesign(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(entdesign(&["design", "--family", "sine"]).status.code(), Some(2));

    for args in [
        &["design", "--q", "2.5"][..],
        &["design", "--kappa", "-1"],
        &["design", "--steps", "10"],
        &["evolve", "--channel", "ad", "--gamma", "-0.1"],
        &["evolve", "--channel", "none", "--gamma", "0.1"],
        &["sweep", "--channel", "none"],
        &["sweep", "--grid-p", "1:2"],
        &["sweep", "--jobs", "0", "--grid-p", "0:0:1", "--grid-gamma", "0:0:1"],
    ] {
        let out = entdesign(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        let err = error_json(&out);
        assert_eq!(err["error"]["kind"], "invalid_parameter");
        assert_eq!(err["error"]["exit_code"], 3);
    }

    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.csv");
    std::fs::write(&garbage, "not,a,waveform\n1,2,3\n").unwrap();
    for args in [
        vec!["design", "--samples", "/nonexistent/samples.csv"],
        vec!["evolve", "--waveform", "/nonexistent/wave.csv"],
        vec!["evolve", "--waveform", path_str(&garbage)],
    ] {
        let out = entdesign(&args);
        assert_eq!(out.status.code(), Some(4), "{args:?}");
        assert_eq!(error_json(&out)["error"]["kind"], "unreadable_input");
    }

    let out = entdesign(&["optimize-q", "--output", "/nonexistent/dir/q.csv"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(error_json(&out)["error"]["kind"], "unwritable_output");

    let singular = entdesign(&["optimize-q", "--q-lo", "0.01", "--q-hi", "0.02"]);
    assert_eq!(singular.status.code(), Some(6));
    assert_eq!(error_json(&singular)["error"]["kind"], "computation_failure");
}

#[test]
fn failed_write_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("wave.csv");
    let out = entdesign(&["design", "--q", "5", "--output", path_str(&target)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn sweep_writes_manifest_beside_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ad.csv");
    let out = entdesign(&[
        "sweep", "--grid-p", "-1:1:3", "--grid-gamma", "0:0.2:2", "--steps", "1000", "--jobs", "2", "--output", path_str(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_table(&csv);
    assert_eq!(header, ["log10_p", "p", "gamma_over_kappa", "final_eof", "diagnostic"]);
    assert_eq!(rows.len(), 6);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ad.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["seeds"], serde_json::Value::Null);
    assert_eq!(manifest["outputs"][0], "ad.csv");
    assert_eq!(manifest["parameters"]["n_steps"], 1000);
}

#[test]
fn verify_reports_every_check() {
    let out = entdesign(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
