use nalgebra::DMatrix;
use taut_core::certify::{run_all, run_case, word_element, Registry, RunOptions, Verdict};
use taut_core::repbuilder::build_rep;

fn opts(seed: u64) -> RunOptions {
    RunOptions { master_seed: seed, ..RunOptions::default() }
}

#[test]
fn clifford_words_act_orthogonally() {
    for (spec, word, sq) in [
        ("spin10: R10 + C16+", vec![0, 1], -1.0),
        ("spin10: R10 + C16+", vec![1, 5, 7, 6], 1.0),
        ("spin10: R10 + C16-", vec![2, 3, 4, 8, 9, 0], -1.0),
    ] {
        let rep = build_rep(spec).unwrap();
        let g = word_element(&rep, &word).unwrap();
        let n = rep.dim();
        assert!((g.transpose() * &g - DMatrix::<f64>::identity(n, n)).amax() < 1e-12, "{spec}");
        // on the spinor summands (e_w1⋯e_wm)² = ±1; the vector action squares to 1
        let last = rep.summands.last().unwrap();
        let block = g.view((last.offset, last.offset), (last.len, last.len)).into_owned();
        let target = DMatrix::<f64>::identity(last.len, last.len) * sq;
        assert!((&block * &block - target).amax() < 1e-12, "{spec}");
    }
    assert!(word_element(&build_rep("spin9: R9 + R16").unwrap(), &[0, 1]).is_err());
}

#[test]
fn every_case_builds_and_parses_its_point() {
    let reg = Registry::load().unwrap();
    for c in &reg.cases {
        let rep = build_rep(&c.rep).unwrap_or_else(|e| panic!("{}: {e}", c.id));
        if let Some(p) = &c.point {
            let x = rep.parse_point(p).unwrap_or_else(|e| panic!("{}: {e}", c.id));
            assert_eq!(x.len(), rep.dim());
        }
    }
}

#[test]
fn deferrals_reach_a_certified_case() {
    let reg = Registry::load().unwrap();
    let cert = run_case(&reg, "spin6-c4r6r6", &opts(1)).unwrap();
    assert_eq!(cert.verdict, Verdict::CitedTheory);
    let deferred = &cert.evidence["deferred"];
    assert_eq!(deferred["case"], "sp2-c4r5");
    assert!(deferred["citation"].is_string());

    let cert = run_case(&reg, "f4-r26r26", &opts(1)).unwrap();
    assert_eq!(cert.verdict, Verdict::CitedTheory);
    assert_eq!(cert.evidence["deferred"]["inequality"]["lhs"], 4);
}

#[test]
fn fast_cases_are_deterministic() {
    let reg = Registry::load().unwrap();
    let ids: Vec<String> = ["lemma31a", "spn-chain", "su2-c2r3", "spin8-0+-"].map(String::from).into();
    let a = run_all(&reg, &ids, &opts(99)).unwrap().without_timings();
    let b = run_all(&reg, &ids, &opts(99)).unwrap().without_timings();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.exit_code(), 0);
    assert_eq!(a.certificates.iter().map(|c| c.case.as_str()).collect::<Vec<_>>(), ["lemma31a", "spn-chain", "su2-c2r3", "spin8-0+-"]);
}

#[test]
fn csv_rows_follow_certificates() {
    let reg = Registry::load().unwrap();
    let ids = vec!["so3-s2r3-r3".to_string(), "su3-adj-c3".to_string()];
    let s = run_all(&reg, &ids, &opts(2)).unwrap();
    let csv = s.to_csv();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for (row, c) in rows.iter().zip(&s.certificates) {
        assert!(row.starts_with(&format!("{},{},", c.case, c.verdict.as_str())));
    }
}

#[test]
fn exit_code_reflects_mismatches() {
    let reg = Registry::load().unwrap();
    let mut s = run_all(&reg, &["su2-c2r3".to_string()], &opts(3)).unwrap();
    assert_eq!(s.exit_code(), 0);
    s.certificates[0].matches = false;
    s.certificates[0].verdict = Verdict::Inconclusive;
    assert_eq!(s.exit_code(), 3);
    s.certificates[0].verdict = Verdict::Consistent;
    assert_eq!(s.exit_code(), 2);
}

#[test]
fn unknown_deferral_targets_are_rejected() {
    let text = r#"
[[case]]
id = "a"
title = "t"
rep = "so3: R3"
certificate = "slice"
expected = "obstruction-found"
table = false
slice = { isotropy_dim = 1, space_dim = 1, trivial_dim = 1, defers_to = "missing", reason = "r" }
"#;
    assert!(Registry::parse(text).is_err());
}
