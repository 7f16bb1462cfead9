use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn durer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_durer")).args(args).env_remove("DURER_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn synth(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut args = vec!["synth", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = durer(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

#[test]
fn golden_constants() {
    let o = durer(&["golden"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("77.9469"), "{text}");
    assert!(text.contains("1.6180"));
    assert!(text.contains("0.4472"));
    let v = json(&durer(&["golden", "--format", "json"]));
    assert_eq!(v["report"], "golden");
    assert_eq!(v["version"], 1);
}

#[test]
fn measure_bundled_golden_annotation() {
    let ann = data("golden_synthetic.json");
    let v = json(&durer(&["measure", "--annotation", ann.to_str().unwrap(), "--format", "json"]));
    let mean = v["summary"]["mean"].as_f64().unwrap();
    assert!((mean - 1.618_033_988_749_895).abs() < 1e-9, "{mean}");
    assert!(v["faces"].as_array().unwrap().len() >= 2);
    let table = stdout(&durer(&["measure", "--annotation", ann.to_str().unwrap()]));
    assert!(table.contains("mean"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = durer(&["measure", "--annotation", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json"));

    std::fs::write(
        &bad,
        r#"{"schema":1,"image":{"width":10,"height":10},"points":{"a":[0,0]},"faces":[{"id":"F","labels":["a","b","c","d","e"]}]}"#,
    )
    .unwrap();
    let o = durer(&["measure", "--annotation", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown point label"));

    let o = durer(&["measure", "--annotation", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(durer(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(durer(&["measure"]).status.code(), Some(1));
    assert_eq!(durer(&["synth", "--alpha", "120"]).status.code(), Some(1));
    assert_eq!(durer(&["theories"]).status.code(), Some(1));
    assert_eq!(durer(&["--help"]).status.code(), Some(0));
}

#[test]
fn synth_then_measure_recovers_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("solid.svg");
    let ann = synth(dir.path(), "a.json", &["--alpha", "78", "--lambda", "1.6111", "--svg", svg.to_str().unwrap()]);
    let v = json(&durer(&["measure", "--annotation", ann.to_str().unwrap(), "--format", "json"]));
    assert!((v["summary"]["mean"].as_f64().unwrap() - 1.6111).abs() < 1e-9);
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.contains("<svg") && svg.contains(">P1<"));
}

#[test]
fn seeded_noise_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--noise", "0.5", "--seed", "42"];
    let a = std::fs::read(synth(dir.path(), "a.json", &args)).unwrap();
    let b = std::fs::read(synth(dir.path(), "b.json", &args)).unwrap();
    assert_eq!(a, b);
    let c = std::fs::read(synth(dir.path(), "c.json", &["--noise", "0.5", "--seed", "43"])).unwrap();
    assert_ne!(a, c);
}

#[test]
fn fit_recovers_synthetic_shape() {
    let dir = tempfile::tempdir().unwrap();
    let ann = synth(dir.path(), "a.json", &["--alpha", "80", "--lambda", "1.5"]);
    let v = json(&durer(&[
        "fit",
        "--annotation",
        ann.to_str().unwrap(),
        "--alpha",
        "76",
        "--lambda",
        "1.62",
        "--format",
        "json",
    ]));
    assert!((v["alpha_deg"].as_f64().unwrap() - 80.0).abs() < 0.1);
    assert!((v["lambda"].as_f64().unwrap() - 1.5).abs() < 0.005);
    assert_eq!(v["converged"], true);
}

#[test]
fn fit_noisy_is_flagged_converged() {
    let dir = tempfile::tempdir().unwrap();
    let ann = synth(dir.path(), "a.json", &["--noise", "0.5", "--seed", "9"]);
    let v = json(&durer(&["fit", "--annotation", ann.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["converged"], true);
    let rms = v["rms_px"].as_f64().unwrap();
    assert!(rms > 0.1 && rms < 1.0, "{rms}");
}

#[test]
fn fit_with_too_few_points_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("few.json");
    std::fs::write(
        &path,
        r#"{"schema":1,"image":{"width":10,"height":10},"points":{"P1":[1,1],"P2":[2,5],"Q1":[3,3]}}"#,
    )
    .unwrap();
    let o = durer(&["fit", "--annotation", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("too few correspondences"), "{}", stderr(&o));
}

#[test]
fn theories_rankings() {
    let text = stdout(&durer(&["theories", "--lambda", "1.62"]));
    let lynch = text.lines().find(|l| l.contains("Lynch")).unwrap();
    assert!(lynch.contains("7.41%"), "{lynch}");
    let schreiber = text.lines().find(|l| l.contains("Schreiber")).unwrap();
    assert!(schreiber.contains("11.67%"), "{schreiber}");

    let v = json(&durer(&["theories", "--lambda", "1.5", "--format", "json"]));
    assert_eq!(v["ranked"][0]["theory"], "Lynch");
    assert_eq!(v["ranked"][0]["lambda_deviation_pct"], 0.0);

    let ann = data("golden_synthetic.json");
    let v = json(&durer(&["theories", "--annotation", ann.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["ranked"][0]["theory"], "Golden");
    assert!((v["measured_lambda"].as_f64().unwrap() - 1.618_033_988_749_895).abs() < 1e-9);
}

#[test]
fn theories_extra_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("extra.json");
    std::fs::write(
        &cat,
        r#"[{"name":"Mine","alpha":{"value":77.0},"derivation":{"kind":"from-truncation-ratio","r":0.46}}]"#,
    )
    .unwrap();
    let v = json(&durer(&["theories", "--lambda", "1.587", "--catalog", cat.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["ranked"][0]["theory"], "Mine");

    std::fs::write(&cat, r#"[{"name":"Lynch","derivation":{"kind":"explicit-lambda","lambda":2.0}}]"#).unwrap();
    assert_eq!(durer(&["theories", "--lambda", "1.6", "--catalog", cat.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn anomaly_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ann = synth(dir.path(), "a.json", &[]);
    let v = json(&durer(&["anomaly", "--annotation", ann.to_str().unwrap(), "--format", "json"]));
    let groups = v["concurrency"].as_array().unwrap();
    assert!(!groups.is_empty());
    for g in groups {
        assert_ne!(g["classification"], "non-concurrent");
    }
    for p in v["convergence"].as_array().unwrap() {
        assert_eq!(p["verdict"], "converges-expected");
    }

    let fixture = data("anomaly_schematic.json");
    let v = json(&durer(&["anomaly", "--annotation", fixture.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["concurrency"][0]["classification"], "non-concurrent");
    assert_eq!(v["convergence"][0]["verdict"], "converges-opposite");
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[output]\nformat = \"json\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_durer")).arg("golden").env("DURER_CONFIG", &cfg).output().unwrap();
    assert!(stdout(&o).trim_start().starts_with('{'));

    std::fs::write(&cfg, "[tolerances]\ncollinearity_px = -1.0\n").unwrap();
    assert_eq!(durer(&["golden", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn mesh_and_render() {
    let o = durer(&["mesh", "--alpha", "78", "--lambda", "1.6111"]);
    let text = stdout(&o);
    assert!(text.starts_with("durer-mesh 1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex ")).count(), 12);
    assert_eq!(text.lines().filter(|l| l.starts_with("face ")).count(), 8);

    let a = durer(&["render"]);
    let b = durer(&["render"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains(r#"version="1.1""#));
}
