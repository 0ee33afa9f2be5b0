use std::io::Write;
use std::process::{Command, Output, Stdio};

fn laglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laglab")).args(args).output().unwrap()
}

fn laglab_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_laglab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // usage errors exit before reading stdin
    let _ = child.stdin.take().unwrap().write_all(input.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// First number after `"key":` in a JSON document.
fn json_number(doc: &str, key: &str) -> f64 {
    let at = doc.find(&format!("\"{key}\":")).unwrap_or_else(|| panic!("no {key}"));
    let rest = doc[at + key.len() + 3..].trim_start();
    let end = rest.find([',', '\n']).unwrap();
    rest[..end].trim().parse().unwrap()
}

#[test]
fn segments() {
    let o = laglab(&["colex", "4", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3 4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
    assert_eq!(stdout(&laglab(&["lex", "3", "5", "3"])), "3 5 3\n1 2 3\n1 2 4\n1 2 5\n");
    let o = laglab(&["clique", "5", "3"]);
    assert_eq!(stdout(&o).lines().count(), 11);
    assert_eq!(stdout(&o).lines().next(), Some("3 5 10"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(laglab(&["colex", "4", "1"]).status.code(), Some(2));
    assert_eq!(laglab(&["lex", "11", "5", "3"]).status.code(), Some(2));
    assert_eq!(laglab(&["clique", "2", "3"]).status.code(), Some(2));
    assert_eq!(laglab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(laglab(&["lagrangian", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(laglab_stdin(&["lagrangian", "-"], "3 4 1\n1 2 9\n").status.code(), Some(2));
    assert_eq!(laglab_stdin(&["lagrangian", "-", "--tol", "0"], "3 4 0\n").status.code(), Some(2));
    assert_eq!(laglab_stdin(&["lagrangian", "-", "--starts", "0"], "3 4 0\n").status.code(), Some(2));
}

#[test]
fn lagrangian_reports() {
    let clique = stdout(&laglab(&["clique", "6", "3"]));
    let o = laglab_stdin(&["lagrangian", "-"], &clique);
    assert!(o.status.success());
    let doc = stdout(&o);
    assert!(doc.contains("\"schema\": \"lagrangian-lab/1\""));
    assert!(doc.contains("\"converged\": true"));
    assert!((json_number(&doc, "value") - 0.0925926).abs() <= 1e-7);

    let o = laglab_stdin(&["lagrangian", "-"], "3 5 0\n");
    assert!(o.status.success());
    assert_eq!(json_number(&stdout(&o), "value"), 0.0);

    let colex = stdout(&laglab(&["colex", "2", "3"]));
    let o = laglab_stdin(&["lagrangian", "-", "--format", "text"], &colex);
    let line = stdout(&o).lines().next().unwrap().to_string();
    let v: f64 = line.strip_prefix("lambda ").unwrap().parse().unwrap();
    assert!((v - 1.0 / 27.0).abs() <= 1e-10);
}

#[test]
fn lagrangian_from_file_is_deterministic() {
    let path = std::env::temp_dir().join(format!("laglab-cli-{}.txt", std::process::id()));
    std::fs::write(&path, stdout(&laglab(&["colex", "9", "3"]))).unwrap();
    let p = path.to_str().unwrap();
    let a = laglab(&["lagrangian", p, "--seed", "7"]);
    let b = laglab(&["lagrangian", p, "--seed", "7", "--threads", "1"]);
    std::fs::remove_file(&path).unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_ak() {
    let o = laglab(&["verify", "ak"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = stdout(&o);
    assert!(doc.contains("\"counterexample\": 211"));
    assert!(doc.contains("\"family_max\": 209"));

    let o = laglab(&["verify", "ak", "--t-max", "12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("237"));
}

#[test]
fn verify_nikiforov() {
    let o = laglab(&["verify", "nikiforov", "--r", "3", "--m-max", "20", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equalities [1, 4, 10, 20]"));
}

#[test]
fn verify_ff() {
    let o = laglab(&["verify", "ff", "--r", "2", "--m-max", "10", "--t", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"passed\": true"));

    let o = laglab(&["verify", "ff", "--r", "3", "--m-min", "9", "--m-max", "9", "--t", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("rank,edges,lambda,kkt_residual\n0,"));
    assert_eq!(csv.lines().count(), 6);

    let a = laglab(&["verify", "ff", "--r", "3", "--m-max", "12", "--t", "6", "--threads", "1"]);
    let b = laglab(&["verify", "ff", "--r", "3", "--m-max", "12", "--t", "6", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_expansion() {
    let o = laglab(&["verify", "expansion", "--t", "14", "--a-max", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("laglab-out-{}.json", std::process::id()));
    let o = laglab(&["verify", "ak", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(doc.contains("\"kind\": \"verify_ak\""));
}

#[test]
fn p2_commands() {
    let o = laglab_stdin(&["p2", "-", "--format", "text"], "3 4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
    assert_eq!(stdout(&o), "36\n");
    let o = laglab(&["p2-max", "--r", "3", "--m", "2", "--t", "7", "--format", "text"]);
    assert_eq!(stdout(&o), "10\n");
    let o = laglab(&["p2-max", "--r", "3", "--m", "11", "--format", "text"]);
    assert_eq!(stdout(&o), "253\n");
}
