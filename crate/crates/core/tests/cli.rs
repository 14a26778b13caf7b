use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn xray(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xray-cover"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn digest(path: &Path) -> String {
    hex::encode(Sha256::digest(fs::read(path).unwrap()))
}

#[test]
fn hexagon_pair_certificate_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let o = xray(
        dir.path(),
        &["construct", "hexagon-pair", "--out", "hex.json"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = xray(
        dir.path(),
        &[
            "certify",
            "constant_width",
            "4",
            "--config",
            "hex.json",
            "--out",
            "cert.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("X <= 6, I <= 12"));
    let cert = json(&dir.path().join("cert.json"));
    assert_eq!(cert["tight"], true);
    assert_eq!(cert["xray_bound"], 6);
    assert_eq!(cert["illumination_bound"], 12);
    assert_eq!(cert["manifest"]["command"], "certify");
    assert_eq!(cert["manifest"]["output_paths"][0], "cert.json");
    let hex_hash = digest(&dir.path().join("hex.json"));
    assert_eq!(
        cert["manifest"]["input_hashes"]["hex.json"],
        hex_hash.as_str()
    );
}

#[test]
fn joins_certify_five_and_six_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = xray(
        dir.path(),
        &[
            "construct",
            "join",
            "--left",
            "polygon-16",
            "--right",
            "s2-8",
            "--out",
            "d5.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = xray(
        dir.path(),
        &["certify", "constant_width", "5", "--config", "d5.json"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("X <= 16, I <= 32"));
    let o = xray(
        dir.path(),
        &["certify", "constant_width", "6", "--config", "d6"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("X <= 32, I <= 64"));
}

#[test]
fn invalid_certificate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = xray(
        dir.path(),
        &[
            "certify",
            "constant_width",
            "6",
            "--config",
            "cross-polytope-6",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[invalid-certificate]: "));
}

#[test]
fn thresholds_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = xray(dir.path(), &["thresholds", "4", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for v in ["52.2388°", "50.768", "49.797"] {
        assert!(out.contains(v), "{v}\n{out}");
    }
}

#[test]
fn cube_search_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cube3.json"),
        r#"{"dim": 3, "vertices": [[1,1,1],[1,1,-1],[1,-1,1],[1,-1,-1],[-1,1,1],[-1,1,-1],[-1,-1,1],[-1,-1,-1]]}"#,
    )
    .unwrap();
    let o = xray(
        dir.path(),
        &[
            "polytope",
            "xray-search",
            "cube3.json",
            "--out",
            "lines.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("X <= 4 "));
    assert_eq!(json(&dir.path().join("lines.json"))["count"], 4);
    let o = xray(
        dir.path(),
        &[
            "polytope",
            "xray-verify",
            "cube3.json",
            "--lines",
            "lines.json",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // three diagonals (unnormalized) leave one antipodal vertex pair uncovered
    fs::write(
        dir.path().join("three.json"),
        r#"{"dim": 3, "lines": [[1,1,1],[1,1,-1],[1,-1,1]]}"#,
    )
    .unwrap();
    let o = xray(
        dir.path(),
        &[
            "polytope",
            "xray-verify",
            "cube3.json",
            "--lines",
            "three.json",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[verification-failed]: "));
}

#[test]
fn polytope_check_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = xray(
        dir.path(),
        &["polytope", "check", "triangle", "--out", "t.json"],
    );
    assert!(o.status.success());
    let t = json(&dir.path().join("t.json"));
    assert_eq!(t["is_antipodal"], true);
    assert_eq!(t["is_weakly_neighbourly"], true);
    assert_eq!(t["xray_lower_bound"], 3);
    let o = xray(dir.path(), &["polytope", "check", "cube-3"]);
    assert!(stdout(&o).contains("weakly neighbourly   no"));
}

#[test]
fn optimizer_artifacts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "optimize",
        "3",
        "6",
        "--seed",
        "9",
        "--budget",
        "800",
        "--restarts",
        "2",
        "--out",
        "run.json",
        "--plot-data",
        "hist.csv",
    ];
    let o = xray(dir.path(), &args);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = (
        digest(&dir.path().join("run.json")),
        digest(&dir.path().join("hist.csv")),
    );
    let csv = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    assert!(csv.starts_with("iteration,radius_rad\n"));
    assert!(csv.lines().count() > 2);
    let o = xray(dir.path(), &args);
    assert!(o.status.success());
    let second = (
        digest(&dir.path().join("run.json")),
        digest(&dir.path().join("hist.csv")),
    );
    assert_eq!(first, second);

    // the run artifact feeds straight into radius and certify
    let o = xray(dir.path(), &["radius", "run.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let run = json(&dir.path().join("run.json"));
    let r = run["best_radius"].as_f64().unwrap();
    assert!(stdout(&o).contains(&format!("{:.6}°", r.to_degrees())));
}

#[test]
fn deterministic_commands_repeat_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["construct", "d5", "--out", "a.json"],
        vec![
            "radius",
            "hexagon-pair",
            "--samples",
            "5000",
            "--seed",
            "3",
            "--out",
            "a.json",
        ],
        vec![
            "certify",
            "almost_smooth",
            "4",
            "--config",
            "cross-polytope-4",
            "--out",
            "a.json",
        ],
        vec![
            "polytope",
            "xray-search",
            "cube-minus-face-3",
            "--seed",
            "2",
            "--out",
            "a.json",
        ],
        vec!["thresholds", "3", "8", "--out", "a.json"],
    ] {
        assert!(xray(dir.path(), &cmd).status.success(), "{cmd:?}");
        let a = digest(&dir.path().join("a.json"));
        assert!(xray(dir.path(), &cmd).status.success());
        assert_eq!(a, digest(&dir.path().join("a.json")), "{cmd:?}");
    }
}

#[test]
fn writes_only_requested_paths() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["construct", "hexagon-pair"],
        vec!["certify", "constant_width", "4", "--config", "hexagon-pair"],
        vec!["polytope", "xray-search", "cube-3"],
        vec!["thresholds", "5"],
    ] {
        assert!(xray(dir.path(), &cmd).status.success());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["optimize", "3"],
        vec!["construct", "join", "--left", "s2-8"],
        vec!["certify", "round", "4", "--config", "hexagon-pair"],
        vec!["radius", "missing.json"],
        vec!["polytope", "check", "no-such-shape"],
    ] {
        let o = xray(dir.path(), &cmd);
        assert_eq!(o.status.code(), Some(1), "{cmd:?}");
        assert!(
            stderr(&o).starts_with("error[usage]: "),
            "{cmd:?}: {}",
            stderr(&o)
        );
    }
}
