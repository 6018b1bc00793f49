use std::path::Path;
use std::process::{Command, Output};

use irslink::output::read_json;

fn irslink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irslink"))
        .args(args)
        .output()
        .expect("failed to spawn irslink")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fig1_csv_decreasing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig1.csv");
    let o = irslink(&["sweep", "--preset", "fig1", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,x,rx_power_dbm,sinr_db,sinr_db_stddev"
    );
    let sinr: Vec<f64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sinr.len(), 20);
    assert!(sinr.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn presets_lists_exactly_five() {
    let o = irslink(&["presets"]);
    assert!(o.status.success());
    let names: Vec<String> = String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(names, ["fig1", "fig2a", "fig2b", "fig2c", "fig2d"]);
}

#[test]
fn validate_reports_offending_key() {
    let dir = tempfile::tempdir().unwrap();
    let shown = irslink(&["presets", "--show", "fig2a"]);
    let good = dir.path().join("good.toml");
    std::fs::write(&good, &shown.stdout).unwrap();
    let o = irslink(&["validate", path_str(&good)]);
    assert!(o.status.success());
    assert!(
        String::from_utf8_lossy(&o.stdout).starts_with("ok: fig2a (irs, rx_distance, 20 points")
    );

    let bad = dir.path().join("bad.toml");
    let text = String::from_utf8(shown.stdout)
        .unwrap()
        .replace("theta_t = 45.0", "theta_t = 90");
    std::fs::write(&bad, text).unwrap();
    let o = irslink(&["validate", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.contains("config: panel.theta_t: theta_t must lie in [0, 90)"),
        "{err}"
    );
}

#[test]
fn validate_missing_file_is_io_error() {
    let o = irslink(&["validate", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("irslink: error: io:"));
}

#[test]
fn unknown_flag_prints_usage() {
    let o = irslink(&["sweep", "--preset", "fig1", "--colour"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = irslink(&["explode"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2b.json");
    let o = irslink(&[
        "sweep",
        "--preset",
        "fig2b",
        "--format",
        "json",
        "--fading",
        "rayleigh",
        "--trials",
        "50",
        "--seed",
        "9",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let results = read_json(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(results.len(), 1);
    let md = &results[0].metadata;
    assert_eq!(
        (md.seed, md.trials, md.fading.as_str()),
        (9, 50, "rayleigh")
    );
    assert_eq!((md.theta_t, md.theta_r), (Some(60.0), Some(60.0)));
    assert!(md
        .assumptions
        .iter()
        .any(|a| a.contains("cell radius 100 m")));
    assert!(md.timestamp.is_none());
    assert!(results[0].rows.iter().all(|r| r.sinr_db_stddev > 0.0));
}

#[test]
fn friis_flag_changes_conventional_curve() {
    let paper = irslink(&["sweep", "--preset", "fig1"]);
    let friis = irslink(&["sweep", "--preset", "fig1", "--conventional-model", "friis"]);
    assert!(friis.status.success());
    assert_ne!(paper.stdout, friis.stdout);
}

#[test]
fn config_file_sweep_with_angle_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let shown = irslink(&["presets", "--show", "fig2b"]).stdout;
    let cfg = String::from_utf8(shown).unwrap().replace(
        "variable = \"rx_distance\"",
        "variable = \"angle_pair\"\nangle_pairs = [[45, 45], [60, 60], [45, 60]]",
    );
    let path = dir.path().join("family.toml");
    std::fs::write(&path, cfg).unwrap();
    let o = irslink(&["sweep", "--config", path_str(&path)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 20);
    assert!(text.contains("fig2b-t45-r60,"));
}

#[test]
fn unwritable_destination_fails() {
    let o = irslink(&[
        "sweep",
        "--preset",
        "fig1",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("irslink: error: io:"));
}
