use std::process::{Command, Output};

fn rrk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrk-dde"))
        .args(args)
        .env_remove("RRK_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_constant_writes_every_column() {
    let out = rrk(&["solve", "constant", "--steps", "8", "--constant", "2.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,j,k,y_0"));
    let rows: Vec<&str> = lines.collect();
    // columns j = -1, 0, 1, 2 with 9 nodes each
    assert_eq!(rows.len(), 36);
    for row in rows {
        assert!(row.ends_with(",2.5000000000000000e0"), "{row}");
    }
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("# config:"));
}

#[test]
fn solve_is_reproducible_and_seed_sensitive() {
    let args = ["solve", "example2", "--steps", "16", "--seed", "17"];
    let a = stdout(&rrk(&args));
    let b = stdout(&rrk(&args));
    assert_eq!(a, b);
    let c = stdout(&rrk(&[
        "solve", "example2", "--steps", "16", "--seed", "18",
    ]));
    assert_ne!(a, c);
}

#[test]
fn seed_falls_back_to_environment() {
    let flag = stdout(&rrk(&["solve", "example2", "--steps", "8", "--seed", "99"]));
    let env = Command::new(env!("CARGO_BIN_EXE_rrk-dde"))
        .args(["solve", "example2", "--steps", "8"])
        .env("RRK_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flag, stdout(&env));
}

#[test]
fn solve_json_lists_nodes() {
    let out = rrk(&["solve", "pure-delay", "--steps", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n_steps"], 4);
    assert_eq!(v["f_evals"], 2 * 4 + 3 * 4 * 2);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4 * 5);
}

#[test]
fn solve_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = rrk(&[
        "solve",
        "scalar-linear",
        "--steps",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,j,k,y_0\n"));
}

#[test]
fn study_writes_rows_and_slopes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("study.csv");
    let out = rrk(&[
        "study",
        "pure-delay",
        "--h-exps",
        "3..5",
        "--href-exp",
        "8",
        "--trials",
        "20",
        "--method",
        "both",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = std::fs::read_to_string(&path).unwrap();
    // 2 methods x 3 step sizes x 3 intervals, plus the header
    assert_eq!(rows.lines().count(), 1 + 18);
    let slopes = std::fs::read_to_string(dir.path().join("study.slopes.csv")).unwrap();
    assert_eq!(slopes.lines().count(), 1 + 6);
}

#[test]
fn study_json_has_rows_and_slopes() {
    let out = rrk(&[
        "study",
        "scalar-linear",
        "--h-exps",
        "3,4",
        "--href-exp",
        "8",
        "--trials",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["rows"].as_array().unwrap().len() >= 6);
    assert!(!v["slopes"].as_array().unwrap().is_empty());
}

#[test]
fn compare_reports_both_methods() {
    let out = rrk(&[
        "compare",
        "--h-exps",
        "2..3",
        "--href-exp",
        "7",
        "--trials",
        "10",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.starts_with("method,h,interval,error,wall_time_s"));
    assert!(text.lines().any(|l| l.starts_with("rrk,")));
    assert!(text.lines().any(|l| l.starts_with("euler,")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rrk(&["solve", "nosuch"]).status.code(), Some(2));
    assert_eq!(
        rrk(&["solve", "example2", "--alpha", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rrk(&["study", "example2", "--h-exps", "5..9", "--href-exp", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(rrk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn problems_list_names_every_builtin() {
    let text = stdout(&rrk(&["problems", "list"]));
    for name in [
        "example1",
        "example2",
        "constant",
        "pure-delay",
        "scalar-linear",
    ] {
        assert!(text.contains(name), "{name} missing");
    }
}
