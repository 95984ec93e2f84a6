use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn emms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emms"))
        .args(args)
        .env_remove("EMMS_CAP")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, agents: &str, count: &str) -> Vec<PathBuf> {
    let out = emms(&["gen", "--seed", "5", "--count", count, "--agents", agents, "--items", "3..6", "--out", s(dir)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut files: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

const PAIR: &str = r#"{"n": 2, "m": 4, "model": "network",
  "values": [[4, 3, 2, 1], [4, 3, 2, 1]],
  "weights": [["4/5", "1/5"], ["1/5", "4/5"]]}"#;

#[test]
fn allocate_then_verify_passes_for_every_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let three = generate(&dir.path().join("three"), "2..3", "4");
    let two = generate(&dir.path().join("two"), "2", "3");
    for (strategy, files) in [("bc-exact", &three), ("bc-lpt", &three), ("cut-and-choose", &two)] {
        for inst in files.iter() {
            let alloc = dir.path().join("alloc.json");
            let out = emms(&["allocate", s(inst), "--strategy", strategy, "--out", s(&alloc)]);
            assert_eq!(code(&out), 0, "{strategy}: {}", String::from_utf8_lossy(&out.stderr));
            let out = emms(&["verify", s(inst), s(&alloc)]);
            assert_eq!(code(&out), 0, "{strategy}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn verify_rejects_an_unfair_allocation() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pair.json");
    fs::write(&inst, PAIR).unwrap();
    let alloc = dir.path().join("alloc.json");
    fs::write(
        &alloc,
        r#"{"strategy": "bc-exact", "bundles": [[0, 1, 2, 3], []], "assignment": [0, 1], "utilities": ["8", "2"]}"#,
    )
    .unwrap();
    let report = dir.path().join("report.csv");
    let out = emms(&["verify", s(&inst), s(&alloc), "--strategy", "cut-and-choose", "--out", s(&report)]);
    assert_eq!(code(&out), 1);
    let csv = fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("agent,emms,"));
    assert!(csv.lines().nth(2).unwrap().ends_with(",false"));
}

#[test]
fn gen_is_deterministic() {
    let a = emms(&["gen", "--seed", "7", "--count", "3"]);
    let b = emms(&["gen", "--seed", "7", "--count", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = emms(&["gen", "--seed", "8", "--count", "3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn emms_reports_shares() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pair.json");
    fs::write(&inst, PAIR).unwrap();
    let out = emms(&["emms", s(&inst)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("0,5,true,5,4,5,4"));
}

#[test]
fn trace_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pair.json");
    fs::write(&inst, PAIR).unwrap();
    let out = emms(&["trace", s(&inst)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"steps\""));
    assert!(text.contains("\"external_bound\""));
}

#[test]
fn bench_csv_is_deterministic_and_empty_sweep_has_header() {
    let args = ["bench", "--seed", "3", "--count", "4", "--agents", "2..3", "--items", "3..5"];
    let a = emms(&args);
    let b = emms(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let out = emms(&["bench", "--count", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&emms(&["bench", "--no-such-flag"])), 2);
    assert_eq!(code(&emms(&["emms", "/definitely/missing.json"])), 2);
    assert_eq!(code(&emms(&["bench", "--beta", "3/2"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    fs::write(&inst, PAIR.replace(r#"["1/5", "4/5"]"#, r#"["1/5"]"#)).unwrap();
    let out = emms(&["emms", s(&inst)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights[1]"));
}

#[test]
fn cap_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("pair.json");
    fs::write(&inst, PAIR).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_emms"))
        .args(["emms", s(&inst)])
        .env("EMMS_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("search cap"));
    assert_eq!(code(&emms(&["emms", s(&inst), "--mode", "lpt", "--cap", "4"])), 2);
}
