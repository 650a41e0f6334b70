use std::path::{Path, PathBuf};

use clap::Parser;

use rankin::cli::{execute, parse_range, Cli, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK};
use rankin::forms::save_eigenform;
use rankin::maass::lift_eigenform;

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["rankin"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).expect("arguments parse");
    let mut out = Vec::new();
    let code = execute(&cli, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

#[test]
fn ranges() {
    assert_eq!(parse_range("1..4"), Ok((1, 4)));
    assert_eq!(parse_range("1..=4"), Ok((1, 4)));
    assert_eq!(parse_range("3"), Ok((3, 3)));
    assert!(parse_range("4..1").is_err());
    assert!(parse_range("0..2").is_err());
    assert!(parse_range("a").is_err());
}

#[test]
fn gram_caches_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["gram", "--k", "10", "--n", "1..4", "--eps", "1e-15", "--cache-dir", d, "--format", "json", "--deterministic"];
    let (code, first) = run(&args);
    assert_eq!(code, EXIT_OK, "{}", first);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 4);
    let t = std::time::Instant::now();
    let (code, second) = run(&args);
    assert_eq!(code, EXIT_OK);
    assert!(t.elapsed().as_secs_f64() < 2.0);
    assert_eq!(first, second);
    let (_, text) = run(&["gram", "--k", "10", "--n", "1..4", "--cache-dir", d]);
    assert_eq!(text.lines().filter(|l| l.contains(" yes ")).count(), 4, "{}", text);
}

#[test]
fn rejects_bad_configuration() {
    let (code, out) = run(&["gram", "--k", "10", "--n", "1", "--precision-bits", "32"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("precision-bits"));
    let (code, _) = run(&["gram", "--k", "10", "--n", "1", "--eps=-1"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, out) = run(&["gram", "--k", "40", "--n", "1"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("not tabulated"), "{}", out);
    assert!(Cli::try_parse_from(["rankin", "gram", "--k", "10", "--n", "x..2"]).is_err());
}

#[test]
fn selfcheck_reports_injected_fault() {
    let (code, out) = run(&["selfcheck", "--skip-gram", "--matrices", "10", "--inject-fault"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("failing (a,b) = (5,"), "{}", out);
    let (code, out) = run(&["selfcheck", "--skip-gram", "--matrices", "10"]);
    assert_eq!(code, EXIT_OK, "{}", out);
}

#[test]
fn multcheck_finds_violation() {
    let (code, out) = run(&["multcheck", &data("dtilde_24aa.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l.split_whitespace().take(2).collect::<Vec<_>>() == ["2", "3"]), "{}", out);
    let (code, out) = run(&["multcheck", &data("upsilon24a_spinor.json"), "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact_violations"], serde_json::json!([]));
    let (code, _) = run(&["multcheck", "/nonexistent/series.json"]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn dseries_maass_weight_twelve() {
    let (code, out) = run(&["dseries", "--maass-k", "12", "--nmax", "3"]);
    assert_eq!(code, EXIT_OK, "{}", out);
    assert_eq!(out.matches("contained=true").count(), 2, "{}", out);
}

fn write_manifest(dir: &Path, eigen_rows: bool) {
    let f = lift_eigenform(10, 2, 60, 2).unwrap();
    save_eigenform(&f, &dir.join("lift.json")).unwrap();
    let rows = if eigen_rows { vec!["lift.json"] } else { vec![] };
    let m = serde_json::json!({"interesting": ["lift.json"], "eigen_rows": rows});
    std::fs::write(dir.join("manifest.json"), m.to_string()).unwrap();
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), false);
    let d = dir.path().to_str().unwrap();
    let out_file = dir.path().join("cert.json");
    let (code, out) = run(&["certify", "--k", "10", "--data", d, "--eps1", "1e-20", "--out", out_file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{}", out);
    assert!(out.contains("independent"));
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "independent");
    assert!(cert["config_hash"].is_string());

    write_manifest(dir.path(), true);
    let (code, out) = run(&["certify", "--k", "10", "--data", d, "--eps1", "1e-20"]);
    assert_eq!(code, EXIT_INCONCLUSIVE, "{}", out);

    let (code, _) = run(&["certify", "--k", "12", "--data", d, "--eps1", "1e-20"]);
    assert_eq!(code, EXIT_ERROR);
}
