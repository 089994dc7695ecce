use std::path::Path;
use std::process::{Command, Output};

fn osp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osp")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn front_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.starts_with(' ')).collect()
}

#[test]
fn generate_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(
        &["generate", "--family", "grid", "--width", "50", "--height", "50", "--k", "10", "--seed", "1"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("2500 4900 10 1 2500\n"));

    let out = osp(&["generate", "--family", "exponential", "--n", "13", "--out", "e.txt"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("e.txt")).unwrap();
    assert_eq!(text.lines().next().unwrap().split(' ').nth(1), Some("16"));

    let out =
        osp(&["generate", "--family", "random-dag", "--n", "25", "--p", "0.2", "--k", "2", "--seed", "5"], dir.path());
    assert!(out.status.success());
    let g = osp_core::io::read_instance(&stdout(&out)).unwrap();
    assert!(g.validate().is_valid());

    let out = osp(&["generate", "--family", "exponential", "--n", "5"], dir.path());
    assert!(!out.status.success());
}

#[test]
fn generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--family", "random-dag", "--n", "30", "--p", "0.3", "--k", "4", "--seed", "77"];
    assert_eq!(osp(&args, dir.path()).stdout, osp(&args, dir.path()).stdout);
}

#[test]
fn solve_bellman_fixture() {
    let dir = tempfile::tempdir().unwrap();
    osp(&["generate", "--family", "fixture", "--fixture", "bellman", "--out", "b.txt"], dir.path());
    let out = osp(&["solve", "b.txt", "--variant", "mod2", "--out", "run.csv"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(front_lines(&text), vec!["1,2,3", "1,3"]);
    assert!(text.contains("  path 1 3 4\n"));
    // a second run appends one row under the same header
    osp(&["solve", "b.txt", "--variant", "base", "--out", "run.csv"], dir.path());
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("file,4,4,3,,0,mod2,ok,"));
    assert!(lines[3].contains(",base,ok,"));
}

#[test]
fn solve_exponential_instance() {
    let dir = tempfile::tempdir().unwrap();
    osp(&["generate", "--family", "exponential", "--n", "7", "--level", "2", "--out", "e.txt"], dir.path());
    let out = osp(&["solve", "e.txt"], dir.path());
    assert_eq!(front_lines(&stdout(&out)), vec!["2,2,2,2"]);
}

#[test]
fn solve_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(&["solve", "missing.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));

    std::fs::write(dir.path().join("bad.txt"), "3 1 2 1 3\n1 2 7\n").unwrap();
    assert_eq!(osp(&["solve", "bad.txt"], dir.path()).status.code(), Some(1));

    std::fs::write(dir.path().join("cut.txt"), "3 1 2 1 3\n1 2 1\n").unwrap();
    let out = osp(&["solve", "cut.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not reachable"));
}

#[test]
fn oracle_counts_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    osp(&["generate", "--family", "exponential", "--n", "10", "--out", "e.txt"], dir.path());
    let out = osp(&["oracle", "e.txt"], dir.path());
    assert!(stdout(&out).contains("# efficient paths 8\n"));

    osp(&["generate", "--family", "fixture", "--out", "b.txt"], dir.path());
    let text = stdout(&osp(&["oracle", "b.txt"], dir.path()));
    assert_eq!(front_lines(&text).len(), 2);
    assert!(text.contains("# efficient paths 2\n"));

    osp(&["generate", "--family", "grid", "--width", "10", "--height", "10", "--out", "g.txt"], dir.path());
    assert_eq!(osp(&["oracle", "g.txt", "--cap", "50"], dir.path()).status.code(), Some(3));
}

#[test]
fn oracle_matches_solver_on_grid() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["0", "1", "2"] {
        osp(
            &[
                "generate", "--family", "grid", "--width", "6", "--height", "6", "--k", "3", "--seed", seed, "--out",
                "g.txt",
            ],
            dir.path(),
        );
        let oracle = stdout(&osp(&["oracle", "g.txt"], dir.path()));
        let solver = stdout(&osp(&["solve", "g.txt"], dir.path()));
        assert_eq!(front_lines(&oracle), front_lines(&solver));
    }
}

#[test]
fn lexmax_report() {
    let dir = tempfile::tempdir().unwrap();
    osp(&["generate", "--family", "fixture", "--out", "b.txt"], dir.path());
    let text = stdout(&osp(&["lexmax", "b.txt", "--certify"], dir.path()));
    assert!(text.starts_with("1,2,3\n  path 1 2 3 4\n"));
    assert!(text.contains("# nondominated true"));
}

#[test]
fn bench_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(
        &[
            "bench",
            "--n",
            "25",
            "--k",
            "2,10",
            "--p",
            "0.6",
            "--seeds",
            "0..10",
            "--variant",
            "mod1,mod2",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# osp-bench-csv"));
    assert_eq!(lines[1], "family,n,m,k,p,seed,variant,status,wall_secs,front_size,peak_labels,iterations");
    assert_eq!(lines.iter().filter(|l| l.contains(",ok,")).count(), 40);
    assert_eq!(lines.len(), 2 + 40 + 4 * 3);
}

#[test]
fn bench_empty_seed_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(&["bench", "--seeds", "3..3"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn bench_paper_style() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(&["bench", "--n", "10", "--seeds", "0..2", "--variant", "mod2", "--paper-style"], dir.path());
    assert!(stdout(&out).lines().skip(2).all(|l| l.contains(",0.1*,")));
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = osp(&["verify", "--n", "10", "--k", "2,3", "--p", "0.2,0.6", "--seeds", "0..20"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("checked 80 instances"));

    let out = osp(&["verify", "--family", "exponential", "--n", "4,7,10,13,16", "--seed", "0"], dir.path());
    assert!(out.status.success());

    let out = osp(
        &["verify", "--family", "grid", "--width", "10", "--height", "10", "--seed", "0", "--cap", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}
