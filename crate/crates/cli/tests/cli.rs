use std::path::Path;
use std::process::{Command, Output};

fn rieszprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rieszprob")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_default_battery_passes() {
    let out = rieszprob(&["verify", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["trials"], 10);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["instances"].as_u64().unwrap() > 0));
}

#[test]
fn verify_is_deterministic() {
    let a = rieszprob(&["verify", "--seed", "11", "--trials", "8"]);
    let b = rieszprob(&["verify", "--seed", "11", "--trials", "8"]);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 11);
}

#[test]
fn config_seed_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.ini", "seed = 7\ntrials = 100\n");
    let from_config = rieszprob(&["verify", "--config", &cfg]);
    let from_flags = rieszprob(&["verify", "--seed", "7"]);
    assert_eq!(from_config.stdout, from_flags.stdout);
    let overridden = rieszprob(&["verify", "--config", &cfg, "--trials", "3"]);
    let report: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!((report["seed"].as_u64(), report["trials"].as_u64()), (Some(7), Some(3)));
}

#[test]
fn configured_processes_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "proc.ini",
        "trials = 2\n[process]\nweights = 1, 1\nblocks = 0, 1\nf = 1/3, 2/3\nn = 6\n\n\
         [process]\nf = 1/2\nn = 150\nrepresentation = aggregated\n",
    );
    let out = rieszprob(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("process[0].q_j") && text.contains("process[1].payoff_distribution"));
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"trials": 2, "processes": [{"space": {"atoms": 2, "weights": ["1", "3"]},
            "partition": {"block_of": [0, 0]}, "f": ["1/4", "1/4"], "n": 5, "representation": "full"}]}"#,
    );
    let out = rieszprob(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in
        [("bad.ini", "trials = lots\n"), ("bad.json", "{\"seed\": }"), ("bad2.ini", "[process]\nf = 2\nn = 3\n")]
    {
        let cfg = write(dir.path(), name, text);
        let out = rieszprob(&["verify", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty());
        assert!(stderr(&out).contains("config error"), "{}", stderr(&out));
    }
    let out = rieszprob(&["verify", "--config", "/nonexistent/run.ini"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_full_process_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "big.ini", "[process]\nf = 1/2\nn = 25\nrepresentation = full\n");
    let out = rieszprob(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n = 25 exceeds the limit of 20"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rieszprob(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rieszprob(&["converge"]).status.code(), Some(2));
    assert_eq!(rieszprob(&["converge", "--experiment", "clt"]).status.code(), Some(2));
    assert_eq!(rieszprob(&["verify", "--seed", "-1"]).status.code(), Some(2));
}

#[test]
fn converge_writes_one_csv_per_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("tables");
    let headers = [
        ("lln", "n,eps,lhs,bound,gap"),
        ("weak-lln", "n,lhs,bound,gap"),
        ("poisson", "n,j,lhs,limit,gap"),
        ("exp-limit", "n,lhs,limit,gap"),
    ];
    for (name, header) in headers {
        let out = rieszprob(&["converge", "--experiment", name, "--out", out_dir.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let csv = std::fs::read_to_string(out_dir.join(format!("{name}.csv"))).unwrap();
        assert_eq!(csv.lines().next(), Some(header));
    }
}

#[test]
fn converge_lln_rows_respect_bound() {
    let out = rieszprob(&["converge", "--experiment", "lln"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![10.0, 100.0, 1000.0, 10000.0]);
    assert!(rows.iter().all(|r| r[2] <= r[3]));
}

#[test]
fn converge_poisson_gap_below_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.ini", "[poisson]\ng = 1\nj = 0..=5\nn = 10^4\n");
    let out = rieszprob(&["converge", "--experiment", "poisson", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    for line in csv.lines().skip(1) {
        let gap: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(gap < 1e-4, "{line}");
    }
}

#[test]
fn converge_tolerance_violation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.ini", "[poisson]\nn = 100\ntolerance = 1e-9\n");
    let out = rieszprob(&["converge", "--experiment", "poisson", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr(&out).matches("FAIL").count(), 6);
}

#[test]
fn converge_invalid_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.ini", "[exp-limit]\nn = 8, 4\n");
    let out = rieszprob(&["converge", "--experiment", "exp-limit", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exp_limit_notes_large_g() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.ini", "[exp-limit]\ng = 0.5, 3\n");
    let out = rieszprob(&["converge", "--experiment", "exp-limit", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("note: e_norm(g) = 3 exceeds 1"), "{}", stderr(&out));
}
