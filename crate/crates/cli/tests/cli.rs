use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permutocalc")).args(args).env("PERMUTOCALC_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hexagon_edges() {
    let o = run(&["faces", "--polytope", "P", "--n", "3", "--dim", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), vec!["1|23", "12|3", "13|2", "2|13", "23|1", "3|12"]);
}

#[test]
fn face_listings() {
    assert_eq!(stdout(&run(&["faces", "--polytope", "B", "--n", "2"])).lines().count(), 11);
    assert_eq!(stdout(&run(&["faces", "--polytope", "P", "--n", "1"])), "1\n");
    let o = run(&["faces", "--polytope", "P", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["faces"].as_array().unwrap().len(), 75);
}

#[test]
fn small_diagonal_tables() {
    let o = run(&["diagonal", "--polytope", "B", "--n", "2", "--group-by-vertex"]);
    let want = "\
+ 12] ⊗ 0]    x=0]
+ (− 0]12 − 2]1) ⊗ 1]    x=0]1
+ 1]2 ⊗ 2]    x=0]2
+ 0]1|2 ⊗ 12]    x=0]1|2
− 0]12 ⊗ 2]1    x=0]2|1
";
    assert_eq!(stdout(&o), want);
    let o = run(&["diagonal", "--polytope", "B", "--n", "1"]);
    assert_eq!(stdout(&o), "+1 0]1 ⊗ 1]\n+1 1] ⊗ 0]\n");
    let o = run(&["diagonal", "--polytope", "P", "--n", "3", "--ring", "Z2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 8);
    assert!(terms.iter().all(|t| t["coeff"] == 1));
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--suite", "d2", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("checks passed\n"));
    let o = run(&["verify", "--suite", "hirsch", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "--suite", "all", "--format", "json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_permutocalc"))
        .args(["verify", "--suite", "all", "--format", "json"])
        .env("PERMUTOCALC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn mutated_signs_fail() {
    for m in ["boundary-koszul", "pair-sign-deletion", "cobar-quadratic-sign"] {
        let o = run(&["verify", "--suite", "all", "--mutate", m]);
        assert_eq!(o.status.code(), Some(1), "{m}");
        assert!(stdout(&o).contains("FAIL"));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["faces", "--polytope", "P", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["faces", "--polytope", "Q", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "cobar", "--fixture", "nope"]).status.code(), Some(2));
}
