use std::process::{Command, Output};

fn qmock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmock")).args(args).env_remove("QMOCK_DEFAULT_ORDER").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_corpus(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qmock-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn expand_examples() {
    let o = qmock(&["expand", "psi(q)", "--order", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "q + q^2 + q^3 + 2*q^4");

    let o = qmock(&["expand", "j(q,q)", "--order", "10"]);
    assert_eq!(stdout(&o).trim(), "0 (+O(q^10))");

    assert_eq!(qmock(&["expand", "q^(1/"]).status.code(), Some(2));
    assert_eq!(qmock(&["expand", "m(1,q,1)"]).status.code(), Some(3));
}

#[test]
fn expand_json() {
    let o = qmock(&["expand", "1 - q^(1/2)", "--order", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"].to_string(), "[[0,1,1,1,0,1],[1,2,-1,1,0,1]]");
    assert_eq!(v["precision"].to_string(), "[3,1]");
}

#[test]
fn verify_exit_codes() {
    let o = qmock(&["verify", "2*q^2*phibar0(q^2)", "psi(q)+negq(psi(q))", "--order", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qmock(&["verify", "Jm(1)", "Jm(2)", "--order", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("at q^1"), "{}", stdout(&o));
    let o = qmock(&["verify", "m(1,q,1)", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("DegenerateZ"));
    assert_eq!(qmock(&["verify", "1 +", "1"]).status.code(), Some(2));
}

#[test]
fn default_order_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_qmock")).args(["expand", "1/(1-q)"]).env("QMOCK_DEFAULT_ORDER", "3").output().unwrap();
    assert_eq!(stdout(&o).trim(), "1 + q + q^2");
}

const PLANTED: &str = "\
[identity b-theta]
anchor = \"J_{1,2}\"
order = 30
lhs = Jm(1)^2 / Jm(2)
rhs = J(1, 2)

[identity a-planted]
order = 10
lhs = Jm(1)
rhs = Jm(1) + q^7

[identity c-pole]
lhs = m(q, q, q^-1)
rhs = 0
";

#[test]
fn corpus_counts_and_exit() {
    let p = write_corpus("planted.qid", PLANTED);
    let o = qmock(&["corpus", p.to_str().unwrap(), "--stable"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("FAIL  a-planted"), "{out}");
    assert!(lines[1].starts_with("PASS  b-theta"), "{out}");
    assert!(lines[2].starts_with("ERROR c-pole"), "{out}");
    assert_eq!(lines[3], "PASS 1 / FAIL 1 / ERROR 1");
}

#[test]
fn corpus_is_deterministic() {
    let p = write_corpus("det.qid", PLANTED);
    let path = p.to_str().unwrap();
    let one = qmock(&["corpus", path, "--json", "--stable", "--jobs", "1"]);
    let many = qmock(&["corpus", path, "--json", "--stable", "--jobs", "8"]);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, qmock(&["corpus", path, "--json", "--stable", "--jobs", "1"]).stdout);
}

#[test]
fn corpus_syntax_error() {
    let p = write_corpus("bad.qid", "[identity a]\nlhs = q^(1/2\nrhs = 1\n");
    let o = qmock(&["corpus", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
}
