use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gspin6"));
    c.env_remove("GSPIN6_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gspin6-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn spin_factor_at_the_identity_is_one_minus_z_to_the_fourth() {
    let o = run(&["euler", "--rep", "gsp4-spin", "--params", "1,1,1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = v.to_string();
    for c in ["\"1\"", "\"-4\"", "\"6\""] {
        assert!(text.contains(c), "{text}");
    }
}

#[test]
fn padic_suite_passes_with_a_window() {
    let o = run(&["verify-padic", "--p", "3", "--splitting", "inert", "--window", "1,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ls = lines(&o);
    let summary = &ls.last().unwrap()["summary"];
    assert_eq!(summary["failed"], 0);
    assert!(summary["total"].as_u64().unwrap() > 0);
    assert!(ls[..ls.len() - 1].iter().all(|r| r["pass"] == true && r["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    assert!(stderr(&o).contains("failed"));
}

#[test]
fn gamma_ratio_is_constant() {
    let o = run(&["verify-arch", "--which", "gamma", "--r", "8", "--grid", "1,1.5,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ls = lines(&o);
    let spread = ls.iter().find(|r| r["name"] == "arch.gamma.ratio-spread").expect("spread record");
    assert_eq!(spread["pass"], true);
    let s1 = ls.iter().find(|r| r["name"] == "arch.gamma.s=1").unwrap();
    for key in ["value", "reference", "rel_err"] {
        assert!(s1["detail"].get(key).is_some());
    }
}

#[test]
fn output_is_byte_deterministic_and_seeded() {
    let a = run(&["--seed", "7", "verify-euler"]);
    let b = run(&["--seed", "7", "verify-euler"]);
    let c = run(&["--seed", "8", "verify-euler"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_runs_and_flags_override_it() {
    let dir = scratch("config");
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# euler run\nsubcommand = euler\nrep = gsp4-spin\nparams = 1,1,1\n").unwrap();
    let from_file = run(&["--config", cfg.to_str().unwrap(), "run"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let direct = run(&["euler", "--rep", "gsp4-spin", "--params", "1,1,1"]);
    assert_eq!(from_file.stdout, direct.stdout);
    let overridden = run(&["--config", cfg.to_str().unwrap(), "euler", "--rep", "gsp4-std", "--params", "1,1,1"]);
    assert_ne!(overridden.stdout, direct.stdout);
}

#[test]
fn config_errors_exit_2_with_position() {
    let dir = scratch("bad-config");
    let cfg = dir.join("bad.conf");
    std::fs::write(&cfg, "subcommand = reps\nbound 3\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "run"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 1"), "{}", stderr(&o));
    let o = run(&["run"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify-padic", "--grid", "fancy"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fixtures_go_to_the_output_directory() {
    let dir = scratch("fixtures");
    for name in ["reps-Qi-T=I-bound3", "euler-wedge2-sample", "A-matrix"] {
        let o = bin().env("GSPIN6_OUT_DIR", &dir).args(["emit-fixture", name]).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["fixture"], name);
        let again = run(&["emit-fixture", name, "--output", dir.join("copy.json").to_str().unwrap()]);
        assert!(again.status.success());
        assert_eq!(std::fs::read_to_string(dir.join("copy.json")).unwrap(), text);
    }
    let a: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("A-matrix.json")).unwrap()).unwrap();
    assert!(!a["trace"].as_str().unwrap().starts_with('-'));
}

#[test]
fn relative_output_resolves_against_the_output_directory() {
    let dir = scratch("relative");
    let o = bin().env("GSPIN6_OUT_DIR", &dir).args(["--output", "sub/euler.jsonl", "verify-euler"]).output().unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(dir.join("sub/euler.jsonl").exists());
}

#[test]
fn unknown_fixture_exits_2() {
    let o = run(&["emit-fixture", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown fixture"));
}
