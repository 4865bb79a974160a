use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_lifi-orient");

fn cli() -> Command {
    let mut c = Command::new(BIN);
    c.env_remove("LIFI_ORIENT_OUT");
    c
}

#[test]
fn tabulate_writes_table_and_sidecar_to_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli()
        .args(["tabulate", "cospsi"])
        .env("LIFI_ORIENT_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("cospsi.csv")).unwrap();
    assert!(csv.starts_with("ue_x,ue_y,ue_z,omega_deg,a,b,tau,"));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cospsi.meta.json")).unwrap())
            .unwrap();
    assert_eq!(
        meta["provenance"]["config_hash"].as_str().unwrap().len(),
        64
    );
    assert_eq!(meta["rows"], 800);
}

#[test]
fn invalid_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"channel": {"fov_deg": -1}}"#).unwrap();
    let out = cli()
        .args(["tabulate", "gain", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fov"));
}

#[test]
fn usage_error_exits_with_one() {
    let out = cli().args(["tabulate", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = cli().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8_lossy(&out.stdout);
    assert!(help.contains("LIFI_ORIENT_OUT"));
}

#[test]
fn fit_failure_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("one.csv");
    fs::write(&data, "t_seconds,alpha_deg,beta_deg,gamma_deg\n0,10,40,0\n").unwrap();
    let out = cli()
        .arg("fit")
        .arg(&data)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));
}

#[test]
fn fit_reports_both_families() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let mut body = String::from("t_seconds,alpha_deg,beta_deg,gamma_deg\n");
    for k in 0..200 {
        body += &format!("{},{},{},{}\n", k, k % 360, 30 + k % 20, k % 7 - 3);
    }
    fs::write(&data, body).unwrap();
    let out = cli()
        .arg("fit")
        .arg(&data)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("fit.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("laplace,200,"));
    assert!(lines[2].starts_with("gaussian,200,"));
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"orwp": {"room_lengths": [4, 8], "speeds": [1.4], "runs": 200}}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let o = dir.path().join(sub);
        let out = cli()
            .args(["orwp", "sweep", "--seed", "3", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&o)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push((
            fs::read(o.join("orwp_sweep.csv")).unwrap(),
            fs::read(o.join("orwp_sweep.meta.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.starts_with("L,v,mode,rate_hz,n_handovers,sim_seconds,seed\r\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn sweep_without_seed_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli()
        .args(["orwp", "sweep", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failing_validation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    fs::write(
        &cfg,
        r#"{"geometry": {"ues": [[1, 1, 0]]}, "validate": {"ksd": 1e-9, "mc_samples": 1000, "ar_steps": 10000, "rwp_pairs": 10000}}"#,
    )
    .unwrap();
    let out = cli()
        .args(["validate", "--seed", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[FAIL] ue0_cospsi_ksd"));
    assert!(stdout.contains("[PASS] ue0_cospsi_mass"));
}

#[test]
fn defaults_round_trip_through_the_cli() {
    let out = cli().arg("defaults").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cfg = lifi_orient_harness::parse_config(
        std::str::from_utf8(&out.stdout).unwrap(),
        "stdout".as_ref(),
    )
    .unwrap();
    assert_eq!(cfg, lifi_orient_harness::RunConfig::default());
}
