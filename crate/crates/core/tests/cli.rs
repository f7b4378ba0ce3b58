use std::path::Path;
use std::process::{Command, Output};

fn hypersym(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypersym"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path, command: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(out.join(format!("{command}_report.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn isotopy_on_fhy_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypersym(&["isotopy", "--preset", "fhy", "--grid-n", "16"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "isotopy");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    let b = &r["isotopy"]["b"]["b"];
    for i in 0..3 {
        for j in 0..3 {
            let v = b[i][j].as_f64().unwrap();
            assert!((v - f64::from(u8::from(i == j))).abs() < 1e-12, "B[{i}][{j}] = {v}");
        }
    }
    assert!(r["isotopy"]["period_drift"].as_f64().unwrap() <= 1e-12);
    assert!(r["isotopy"]["endpoint"]["delta_q"].as_f64().unwrap() <= 1e-9);
    assert!(r["generated_at_unix"].is_u64());
    let csv = std::fs::read_to_string(dir.path().join("isotopy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn indefinite_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypersym(&["verify", "--preset", "indefinite", "--grid-n", "8"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path(), "verify");
    assert_eq!(r["verification"]["status"], "fail");
    assert!(r["verification"]["witness"]["index"].is_array());
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypersym(&["verify", "--grid-n", "7"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid_n"));

    let o = hypersym(&["verify", "--preset", "flat", "--seed", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed"));

    let o = hypersym(&["verify", "--preset", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "grid_n = 8\n[tolerances]\nhk = -1.0\n").unwrap();
    let o = hypersym(&["verify", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerances.hk"));

    let o = hypersym(&["verify", "--input", "/nonexistent/triple.bin"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = hypersym(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_then_verify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypersym(&["generate", "--preset", "random", "--seed", "4", "--grid-n", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let bundle = dir.path().join("triple.bin");
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("triple.json")).unwrap()).unwrap();
    assert_eq!(side["components"].as_array().unwrap().len(), 18);
    let o = hypersym(&["extract", "--input", bundle.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "extract");
    assert_eq!(r["source"]["grid_n"], 8);
    assert_eq!(r["lattice"]["rank_ok"], true);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "grid_n = 16\ns_samples = 3\n[generator]\nname = \"random\"\nseed = 2\nroughness = 0.5\n",
    )
    .unwrap();
    let o = hypersym(
        &["isotopy", "--config", cfg.to_str().unwrap(), "--grid-n", "8", "--no-timestamp"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "isotopy");
    assert_eq!(r["config"]["grid_n"], 8);
    assert_eq!(r["config"]["generator"]["seed"], 2);
    assert_eq!(r["isotopy"]["samples"].as_array().unwrap().len(), 3);
    assert!(r.get("generated_at_unix").is_none());
}

#[test]
fn fhy_needs_auto_orient_only_when_swapped() {
    let dir = tempfile::tempdir().unwrap();
    let o = hypersym(&["extract", "--preset", "fhy", "--grid-n", "8", "--auto-orient", "--normalize"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "extract");
    assert_eq!(r["orientation_swapped"], false);
    let g = &r["normalization"]["normalized_intersection_matrix"];
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 2.0 } else { 0.0 };
            assert!((g[i][j].as_f64().unwrap() - want).abs() < 1e-10);
        }
    }
}
