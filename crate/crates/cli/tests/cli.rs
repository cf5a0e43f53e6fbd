use std::process::{Command, Output};

fn taut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taut"))
        .args(args)
        .env_remove("TAUT_SEED")
        .output()
        .expect("run taut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FAST: &[&str] = &["--cases", "lemma31a", "--cases", "su2-c2r3", "--cases", "so3-s2r3-r3", "--cases", "spin9-r9r16"];

#[test]
fn list_shows_every_case() {
    let o = taut(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().count() >= 30);
    assert!(text.contains("lemma31a"));
    assert!(text.contains("spin10-r10c16"));
}

#[test]
fn run_prints_a_certificate() {
    let o = taut(&["run", "--case", "lemma31a"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["verdict"], "obstruction-found");
    assert_eq!(cert["matches"], true);
    assert_eq!(cert["evidence"]["inequality"]["lhs"], 6);
    assert_eq!(cert["evidence"]["inequality"]["rhs"], 4);
}

#[test]
fn unknown_case_is_an_error() {
    let o = taut(&["run", "--case", "no-such-case"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-case"));
}

#[test]
fn run_all_is_reproducible_without_timings() {
    let mut args = vec!["run-all", "--no-timings", "--seed", "17"];
    args.extend_from_slice(FAST);
    let a = taut(&args);
    let b = taut(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn seed_comes_from_the_environment() {
    let mut args = vec!["run-all", "--no-timings"];
    args.extend_from_slice(FAST);
    let env = Command::new(env!("CARGO_BIN_EXE_taut"))
        .args(&args)
        .env("TAUT_SEED", "17")
        .output()
        .unwrap();
    let flag = taut(&[&args[..], &["--seed", "17"]].concat());
    assert_eq!(stdout(&env), stdout(&flag));
}

#[test]
fn csv_and_json_agree() {
    let mut args = vec!["run-all", "--no-timings"];
    args.extend_from_slice(FAST);
    let json: serde_json::Value = serde_json::from_str(&stdout(&taut(&args))).unwrap();
    let csv = stdout(&taut(&[&args[..], &["--format", "csv"]].concat()));
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("case,verdict,expected,matches,table_row,runtime_ms,seed"));
    let certs = json["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 4);
    for (row, cert) in rows.zip(certs) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], cert["case"]);
        assert_eq!(cols[1], cert["verdict"]);
        assert_eq!(cols[3], cert["matches"].to_string());
        assert_eq!(cols[6], cert["seed"].to_string());
    }
}

#[test]
fn rep_dumps_the_basis() {
    let o = taut(&["rep", "so3-r3r3"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc.is_object());
    assert!(stdout(&o).contains("R3"));
}
