use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finsler"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, value: serde_json::Value) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path
}

fn dilation_config(c: f64) -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "metric": {"kind": "euclidean", "dim": 3},
        "wind": {"kind": "dilation", "c": c},
        "embedding": {"kind": "sphere", "dim": 3, "radius": 1.0},
        "checks": ["navigation_shift"]
    })
}

#[test]
fn bundled_configs_pass() {
    for name in ["euclidean_sphere.json", "randers_dilation.json"] {
        let out = run(&["check", example(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
    }
}

#[test]
fn strong_wind_exits_two_and_names_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = dilation_config(0.0);
    cfg["wind"] = serde_json::json!({"kind": "constant", "b": [1.2, 0.0, 0.0]});
    cfg["checks"] = serde_json::json!(["transformed_normal"]);
    let path = write_config(dir.path(), cfg);
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("F(x, -W) < 1"), "{msg}");
    assert!(msg.contains("wind"), "{msg}");
}

#[test]
fn malformed_config_names_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        "{\n  \"schema\": 1,\n  \"metric\": {\"kind\": \"euclidean\", \"dim\": 3},\n  \"embedding\": {\"kind\": \"sphere\", \"dim\": 3, \"radius\": 1.0},\n  \"grid_order\": \"eight\",\n  \"checks\": [\"navigation_shift\"]\n}\n",
    )
    .unwrap();
    for cmd in ["check", "validate"] {
        let out = run(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
        let msg = stderr(&out);
        assert!(msg.contains("grid_order") && msg.contains("line 5"), "{msg}");
    }
}

#[test]
fn unknown_check_is_rejected_by_validate() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = dilation_config(0.1);
    cfg["checks"] = serde_json::json!(["navigation_shift", "nope"]);
    let path = write_config(dir.path(), cfg);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("checks[1]"));
    let ok = write_config(dir.path(), dilation_config(0.1));
    assert_eq!(run(&["validate", ok.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn failing_check_propagates_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = dilation_config(0.05);
    cfg["checks"] = serde_json::json!(["flowed_shift"]);
    let path = write_config(dir.path(), cfg);
    let out_dir = dir.path().join("out");
    let out = run(&["check", path.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",fail")), "{csv}");
}

#[test]
fn single_passing_check_gives_one_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = dilation_config(0.1);
    cfg["wind"] = serde_json::json!({"kind": "zero"});
    let path = write_config(dir.path(), cfg);
    let out_dir = dir.path().join("out");
    let out = run(&["check", path.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "check,config_digest,residual_name,residual,tolerance,verdict");
    assert_eq!(lines.len(), 2, "{csv}");
    assert!(lines[1].starts_with("navigation_shift,") && lines[1].ends_with(",pass"));
}

#[test]
fn sweep_emits_one_curve_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = dilation_config(0.05);
    cfg["checks"] = serde_json::json!(["flowed_shift"]);
    cfg["grid_order"] = serde_json::json!(4);
    let path = write_config(dir.path(), cfg);
    let out_dir = dir.path().join("sweep");
    let out = run(&[
        "sweep",
        path.to_str().unwrap(),
        "--key",
        "options.flow_times",
        "--values",
        "0,0.1,0.2,0.3,0.4,0.5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    // the stated flowed relation is off by c(e^{2ct} - 1) for t > 0
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let curves = fs::read_to_string(out_dir.join("curves.csv")).unwrap();
    let lines: Vec<&str> = curves.lines().collect();
    assert_eq!(lines[0], "check,residual_name,parameter,value");
    assert_eq!(lines.len(), 7);
    let params: Vec<f64> =
        lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(params.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn csv_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (threads, out) in [("1", &a), ("4", &b)] {
        let run_out = bin()
            .env("FINSLER_NUM_THREADS", threads)
            .args([
                "check",
                example("randers_dilation.json").to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(run_out.status.code(), Some(0));
    }
    assert_eq!(fs::read(a.join("report.csv")).unwrap(), fs::read(b.join("report.csv")).unwrap());
}

#[test]
fn bad_thread_count_and_unwritable_output_exit_two() {
    let out = bin().env("FINSLER_NUM_THREADS", "zero").args(["list-checks"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("FINSLER_NUM_THREADS"));

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = write_config(dir.path(), dilation_config(0.1));
    let out = run(&["check", cfg.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("output.dir"));
}

#[test]
fn list_checks_names_every_check() {
    let out = run(&["list-checks"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["navigation_shift", "heintze_karcher", "anisotropic_cross_check"] {
        assert!(text.contains(name));
    }
}
