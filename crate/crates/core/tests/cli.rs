use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use lsym::algebra::StructureAlgebra;
use lsym::fixtures::{random_dinov, random_lsym, sample};
use lsym::replicate::canonical_key;
use lsym::term::parse_identities;

const GOLDEN_DINOV: &str = include_str!("golden/dinov.ids");

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn lsym(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lsym")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixtures(dir: &str) -> PathBuf {
    let d = scratch(dir);
    assert_eq!(lsym(&["fixtures", "--out", d.to_str().unwrap()]).0, 0);
    d
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn perm_dimensions() {
    for k in 1..=5 {
        let (code, out, _) = lsym(&["dim", "--variety", "perm", "-n", &k.to_string()]);
        assert_eq!((code, out), (0, format!("{k}\n")));
    }
}

#[test]
fn replicate_nov_matches_golden() {
    let (code, out, _) = lsym(&["replicate", "--variety", "nov"]);
    assert_eq!(code, 0);
    let keys = |src: &str| -> BTreeSet<_> { parse_identities(src).unwrap().iter().map(canonical_key).collect() };
    assert_eq!(keys(&out), keys(GOLDEN_DINOV));

    let dir = scratch("replicate");
    let ids = write(&dir, "dinov.ids", &out);
    let (code, text, _) = lsym(&["check-identity", &ids]);
    assert_eq!(code, 0, "{text}");
}

#[test]
fn identities_in_free_perm() {
    let dir = scratch("free-perm");
    let good = write(&dir, "good.ids", "(x1*x2)*x3 - x1*(x2*x3) = (x2*x1)*x3 - x2*(x1*x3)\n");
    assert_eq!(lsym(&["check-identity", &good]).0, 0);
    let bad = write(&dir, "bad.ids", "(x1*x2)*x3 = x1*(x2*x3)\n");
    let (code, out, _) = lsym(&["check-identity", &bad]);
    assert_eq!(code, 1);
    assert!(out.contains("FAILS"), "{out}");
}

#[test]
fn sls2q_is_not_special() {
    let d = fixtures("fx-special");
    let (code, out, _) = lsym(&["special", d.join("sls2q.alg").to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "not special");
    assert!(lines.contains(&"witness relation: 1 x⊗z"), "{out}");
    assert!(lines.contains(&"multiplier: y"), "{out}");
    assert!(lines.contains(&"value: xyz"), "{out}");
}

#[test]
fn sls1_is_nice() {
    let d = fixtures("fx-nice");
    let (code, out, _) = lsym(&["nice", d.join("sls1.alg").to_str().unwrap()]);
    assert_eq!((code, out.lines().next()), (0, Some("nice")));
}

#[test]
fn every_certificate_verifies() {
    let d = fixtures("fx-certs");
    let a = |name: &str| d.join(name).to_str().unwrap().to_string();
    let lsym_alg = write(&d, "lsym.alg", &sample(3, 1, random_lsym)[0].to_text());
    let dinov_alg = write(&d, "dinov.alg", &sample(3, 1, random_dinov)[0].to_text());
    let golden = write(&d, "golden.ids", GOLDEN_DINOV);
    let runs: Vec<Vec<String>> = vec![
        vec!["dim".into(), "--variety".into(), "sls".into(), "-n".into(), "3".into()],
        vec!["replicate".into(), "--variety".into(), "lsym".into()],
        vec!["sls-basis".into(), "-n".into(), "3".into()],
        vec!["check-identity".into(), golden.clone()],
        vec!["check-identity".into(), golden, "--algebra".into(), dinov_alg.clone()],
        vec!["envelope-test".into(), lsym_alg, "--samples".into(), "20".into()],
        vec!["nice".into(), a("sls1.alg")],
        vec!["special".into(), a("sls1.alg"), "-D".into(), "3".into()],
        vec!["ideals".into(), a("sls2q.alg"), "-D".into(), "3".into(), "--samples".into(), "10".into()],
        vec!["cur".into(), dinov_alg],
    ];
    for (k, args) in runs.into_iter().enumerate() {
        let cert = d.join(format!("c{k}.json"));
        let mut full = args.clone();
        full.extend(["--out".into(), cert.to_str().unwrap().into()]);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let (code, _, err) = lsym(&refs);
        assert_eq!(code, 0, "{args:?}: {err}");
        let (code, out, err) = lsym(&["verify-certificate", cert.to_str().unwrap()]);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(out.starts_with("certificate verified"));
    }
}

#[test]
fn tampered_certificate_fails() {
    let d = scratch("tamper");
    let cert = d.join("c.json");
    let c = cert.to_str().unwrap();
    assert_eq!(lsym(&["dim", "--variety", "lsym", "-n", "3", "--out", c]).0, 0);
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"dim\": 9"));
    std::fs::write(&cert, text.replace("\"dim\": 9", "\"dim\": 8")).unwrap();
    assert_eq!(lsym(&["verify-certificate", c]).0, 1);
}

#[test]
fn structured_output_is_stable() {
    let d = fixtures("fx-stable");
    let alg = d.join("sls2q.alg");
    let args = ["ideals", alg.to_str().unwrap(), "-D", "3", "--seed", "7", "--format", "structured"];
    let (c1, o1, _) = lsym(&args);
    let (c2, o2, _) = lsym(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert!(o1.contains("\"kind\": \"ideals\""));
}

#[test]
fn malformed_inputs_exit_two() {
    let d = scratch("malformed");
    let neg = write(&d, "neg.alg", r#"{"dim": 1, "product": [[["1/-2"]]]}"#);
    let ragged = write(&d, "ragged.alg", r#"{"dim": 2, "product": [[["1", "0"]], [["0", "1"], ["0", "0"]]]}"#);
    let dup = write(&d, "dup.alg", r#"{"dim": 2, "basis": ["a", "a"], "product": [[["0","0"],["0","0"]],[["0","0"],["0","0"]]]}"#);
    let syntax = write(&d, "syntax.alg", "{\"dim\": 1,\n \"product\": [[[1]]\n");
    for f in [&neg, &ragged, &dup, &syntax] {
        let (code, _, err) = lsym(&["nice", f]);
        assert_eq!(code, 2, "{f}");
        assert!(err.starts_with("error:"), "{err}");
    }
    let (_, _, err) = lsym(&["nice", &syntax]);
    assert!(err.contains("line 3"), "{err}");
    let ids = write(&d, "bad.ids", "x1 * x2\nx1 * (x2 # x3)\n");
    let (code, _, err) = lsym(&["check-identity", &ids]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn one_dimensional_algebra_round_trips() {
    let src = "{\n  \"dim\": 1,\n  \"basis\": [\"e1\"],\n  \"product\": [\n    [[\"1\"]]\n  ]\n}\n";
    let a = StructureAlgebra::parse(src).unwrap();
    assert_eq!(a.to_text(), src);
}

#[test]
fn fixture_dimensions() {
    let d = fixtures("fx-dims");
    let sls1 = StructureAlgebra::parse(&std::fs::read_to_string(d.join("sls1.alg")).unwrap()).unwrap();
    let sls2q = StructureAlgebra::parse(&std::fs::read_to_string(d.join("sls2q.alg")).unwrap()).unwrap();
    assert_eq!((sls1.dim(), sls2q.dim()), (14, 32));
}
