use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("trisigma-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigonal-sigma"))
        .arg("--cache")
        .arg(cache)
        .args(["--grade", "2", "--strata-order", "16"])
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_then_verify_from_cache() {
    let dir = scratch("build");
    let o = run(&dir, &["build"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|d| d["nullity"] == 0));
    assert!(lines.iter().all(|d| d.get("elapsed_ms").is_none()));
    let cached: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(cached.len(), 1);
    let before = fs::read(&cached[0]).unwrap();

    let o = run(&dir, &["build"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&cached[0]).unwrap(), before);

    let o = run(&dir, &["verify", "--suite", "curve"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = stdout(&o);
    assert!(first.lines().count() >= 8);
    for l in first.lines() {
        let r: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(r["suite"], "curve");
        assert_eq!(r["verdict"], r["expected"], "{l}");
    }
    assert_eq!(stdout(&run(&dir, &["verify", "--suite", "curve"])), first);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_cache_and_bad_flags_are_config_errors() {
    let dir = scratch("errors");
    let o = run(&dir, &["verify", "--suite", "curve"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--build"));

    let o = run(&dir, &["--lambda3", "x/y", "build"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&dir, &["verify", "--suite", "nope", "--build"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&dir, &["frobnicate"]);
    assert_eq!(o.status.code(), Some(3));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn export_import_round_trip() {
    let dir = scratch("export");
    assert_eq!(run(&dir, &["build"]).status.code(), Some(0));
    let file = dir.join("sigma.json");
    let o = run(&dir, &["export", "--out", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();

    let other = scratch("import");
    let o = run(&other, &["import", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&other, &["export"]);
    assert_eq!(stdout(&o).trim_end(), text.trim_end());

    // the same file under a different configuration
    let o = Command::new(env!("CARGO_BIN_EXE_trigonal-sigma"))
        .arg("--cache")
        .arg(&other)
        .args(["--grade", "3", "import", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("provenance"));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["provenance"]["strata_order"] = serde_json::json!(17);
    let bad = dir.join("tampered.json");
    fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(run(&other, &["import", bad.to_str().unwrap()]).status.code(), Some(3));

    let o = run(&dir, &["export", "--schur"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("u4"));
    fs::remove_dir_all(&dir).unwrap();
    fs::remove_dir_all(&other).unwrap();
}
