use std::path::Path;
use std::process::{Command, Output};

use backmc::harness::{read_records, CSV_HEADER};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backmc")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_er(dir: &Path, name: &str, n: &str, prob: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = cli(&["gen-er", "--n", n, "--edge-prob", prob, "--seed", "4", "--out", p(&path)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn gen_er_writes_loadable_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_er(dir.path(), "g.txt", "200", "0.05");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# n=200 m="));
    let again = gen_er(dir.path(), "h.txt", "200", "0.05");
    assert_eq!(text, std::fs::read_to_string(again).unwrap());
}

#[test]
fn estimate_reports_value_and_counters() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_er(dir.path(), "g.txt", "300", "0.03");
    for algo in ["backmc", "mc", "backwardpush", "setpush"] {
        let o = cli(&[
            "estimate", "--graph", p(&g), "--target", "1", "--algo", algo, "--c", "0.5", "--seed", "3",
        ]);
        assert!(o.status.success(), "{algo}: {}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(out.starts_with("estimate="), "{out}");
        assert!(out.contains("total_queries="));
    }
    let adaptive = cli(&["estimate", "--graph", p(&g), "--target", "1", "--algo", "backmc", "--mode", "adaptive"]);
    assert!(adaptive.status.success());
}

#[test]
fn ground_truth_csv_sums_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_er(dir.path(), "g.txt", "100", "0.1");
    let out = dir.path().join("pr.csv");
    assert!(cli(&["ground-truth", "--graph", p(&g), "--alpha", "0.2", "--out", p(&out)]).status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,score"));
    let scores: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(scores.len(), 100);
    assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-3);
}

#[test]
fn gen_hard_prints_target_and_validate_hard_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.txt");
    let o = cli(&[
        "gen-hard", "--level", "2", "--max-level", "3", "--group-size", "4", "--hub-count", "10",
        "--pad-to-n", "200", "--seed", "1", "--out", p(&out),
    ]);
    assert!(o.status.success());
    let t: u32 = stdout(&o).trim().parse().unwrap();
    assert!(t < 200);

    let o = cli(&[
        "validate-hard", "--max-level", "3", "--group-size", "4", "--hub-count", "10", "--pad-to-n",
        "200", "--alpha", "0.2", "--seed", "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.contains("separation=ok"));
}

#[test]
fn experiment_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_er(dir.path(), "g.txt", "300", "0.03");
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let o = cli(&[
            "experiment", "--graph", p(&g), "--algos", "backmc,mc,backwardpush,setpush", "--c-grid",
            "0.3,0.5", "--targets", "3", "--trials", "2", "--seed", "8", "--threads", threads,
            "--out", p(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("algo,c,trials"));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "3");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let records = read_records(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 4 * 3 * 2 * 2);
    for r in &records {
        r.check_consistency().unwrap();
        assert_eq!(r.dataset, "g");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_er(dir.path(), "g.txt", "50", "0.1");
    let code = |args: &[&str]| cli(args).status.code().unwrap();

    assert_eq!(code(&["estimate", "--graph", p(&g), "--target", "0", "--algo", "backmc", "--c", "2"]), 2);
    assert_eq!(code(&["estimate", "--graph", p(&g), "--target", "50", "--algo", "backmc"]), 2);
    assert_eq!(code(&["estimate", "--graph", p(&g), "--target", "0", "--algo", "pagerank"]), 2);
    assert_eq!(code(&["gen-er", "--n", "10", "--edge-prob", "0", "--out", p(&dir.path().join("x"))]), 2);
    assert_eq!(
        code(&["experiment", "--graph", p(&g), "--c-grid", "0.9", "--out", p(&dir.path().join("e.csv"))]),
        2
    );

    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&["estimate", "--graph", p(&missing), "--target", "0", "--algo", "backmc"]), 3);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n2 2\n").unwrap();
    assert_eq!(code(&["ground-truth", "--graph", p(&bad), "--out", p(&dir.path().join("o"))]), 3);
    std::fs::write(&bad, "0 x\n").unwrap();
    assert_eq!(code(&["estimate", "--graph", p(&bad), "--target", "0", "--algo", "mc"]), 3);

    let isolated = dir.path().join("iso.txt");
    std::fs::write(&isolated, "# n=3\n0 1\n").unwrap();
    assert_eq!(code(&["estimate", "--graph", p(&isolated), "--target", "2", "--algo", "backmc"]), 4);
    assert_eq!(code(&["estimate", "--graph", p(&isolated), "--target", "2", "--algo", "setpush"]), 4);
}
