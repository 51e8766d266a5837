use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gewirth() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/theories/gewirth.dl")
}

fn deon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deon-mf"))
        .args(args)
        .env_remove("DEON_MF_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_theory(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".dl").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const SMALL: &str = "consts A : m\ngoal weaker [scope = c=1,e=1,w=2]: validD A ==> valid A\ngoal stronger: valid A ==> validD A\n";

#[test]
fn bundled_corpus_passes() {
    let g = gewirth();
    let o = deon(&["corpus", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).ends_with("19 entries: 19 pass, 0 mismatch, 0 timeout, 0 inconclusive, 0 error\n"));
}

#[test]
fn consistency_prints_a_model() {
    let g = gewirth();
    let o = deon(&["consistency", g.to_str().unwrap(), "--scope", "c=1,e=1,w=2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("model found at c=1,e=1,w=2\n"), "{out}");
    assert!(out.contains("worldOf"));
    assert!(out.contains("conflicts="));
}

#[test]
fn zero_scope_is_a_usage_error() {
    let g = gewirth();
    let o = deon(&["valid", g.to_str().unwrap(), "--goal", "PGC", "--scope", "c=0"]);
    assert_eq!(code(&o), 2);
    assert!(!stderr(&o).is_empty());
}

#[test]
fn unknown_condition_is_rejected() {
    let g = gewirth();
    let o = deon(&["valid", g.to_str().unwrap(), "--goal", "kant", "--disable", "sem-nonsense"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("sem-nonsense"));
}

#[test]
fn corpus_refuses_to_drop_mandatory_conditions() {
    let g = gewirth();
    let o = deon(&["corpus", g.to_str().unwrap(), "--disable", "sem_5ab", "--entry", "kants-law"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn parse_errors_carry_locations() {
    let f = temp_theory("consts A : m\naxiom a: valid (A &)\n");
    let o = deon(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains(&format!("{}:2:", f.path().display())), "{err}");
}

#[test]
fn sort_errors_are_usage_errors() {
    let f = temp_theory("consts Good : e => m => m, FWB : p\naxiom a: valid (Good FWB a)\n");
    assert_eq!(code(&deon(&["check", f.path().to_str().unwrap()])), 2);
}

#[test]
fn missing_goal_is_a_usage_error() {
    let g = gewirth();
    assert_eq!(code(&deon(&["valid", g.to_str().unwrap(), "--goal", "nope"])), 2);
}

#[test]
fn valid_and_countermodel_exit_codes() {
    let f = temp_theory(SMALL);
    let p = f.path().to_str().unwrap();
    let o = deon(&["valid", p, "--goal", "weaker"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("not valid: countermodel at c=1,e=1,w=2"));
    let o = deon(&["countermodel", p, "--goal", "weaker"]);
    assert_eq!(code(&o), 0);
    let o = deon(&["valid", p, "--goal", "stronger", "--scope", "c=2,e=1,w=2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("bounded-valid up to c=2,e=1,w=2\n"));
    let o = deon(&["countermodel", p, "--goal", "stronger", "--scope", "c=1,e=1,w=2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn zero_budget_is_incomplete() {
    let g = gewirth();
    let o = deon(&["valid", g.to_str().unwrap(), "--goal", "PGC", "--budget", "0"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn budget_comes_from_the_environment() {
    let g = gewirth();
    let o = Command::new(env!("CARGO_BIN_EXE_deon-mf"))
        .args(["valid", g.to_str().unwrap(), "--goal", "PGC"])
        .env("DEON_MF_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn oversized_scope_is_incomplete() {
    let g = gewirth();
    let o = deon(&["valid", g.to_str().unwrap(), "--goal", "PGC", "--cell-budget", "10"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn deterministic_json_is_byte_identical() {
    let f = temp_theory(SMALL);
    let p = f.path().to_str().unwrap();
    let args = ["countermodel", p, "--goal", "weaker", "--deterministic", "--format", "json"];
    let a = deon(&args);
    let b = deon(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"], "model");
    assert_eq!(v["scope"], "c=1,e=1,w=2");
}

#[test]
fn emitted_dimacs_parses_back_and_solves() {
    let g = gewirth();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pgc.cnf");
    let o = deon(&[
        "emit-dimacs",
        g.to_str().unwrap(),
        "--goal",
        "PGC",
        "--scope",
        "c=1,e=1,w=2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with('c'));
    let cnf = deon_sat::parse_dimacs(&text).unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    assert_eq!(header, format!("p cnf {} {}", cnf.num_vars(), cnf.clauses().len()));
    let r = deon_sat::solve(&cnf, &deon_sat::SolverConfig::default());
    assert!(matches!(r.outcome, deon_sat::Outcome::Unsat));

    let o = deon(&["emit-dimacs", g.to_str().unwrap(), "--scope", "c=1,e=1,w=2"]);
    let cnf = deon_sat::parse_dimacs(&stdout(&o)).unwrap();
    let r = deon_sat::solve(&cnf, &deon_sat::SolverConfig::default());
    assert!(matches!(r.outcome, deon_sat::Outcome::Sat(_)));
}

#[test]
fn check_lists_the_signature() {
    let g = gewirth();
    let o = deon(&["check", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("FWB : p"), "{out}");
    assert!(out.contains("PPA is reconstructed"));
    assert!(out.contains("9 axioms, 6 goals"));
    let o = deon(&["check", g.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["axioms"].as_array().unwrap().len(), 9);
    assert_eq!(v["definitions"].as_array().unwrap().len(), 2);
}

#[test]
fn parse_prints_a_reparsable_theory() {
    let g = gewirth();
    let o = deon(&["parse", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let f = temp_theory(&stdout(&o));
    let again = deon(&["parse", f.path().to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn help_exits_zero_and_bad_flags_exit_two() {
    assert_eq!(code(&deon(&["--help"])), 0);
    assert_eq!(code(&deon(&["corpus"])), 2);
    assert_eq!(code(&deon(&["frobnicate"])), 2);
}
