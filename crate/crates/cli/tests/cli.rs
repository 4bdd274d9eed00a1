//! End-to-end tests of the `acbm` binary against golden files.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files in `tests/golden`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn acbm(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_acbm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}; rerun with UPDATE_GOLDEN=1", path.display()));
    if expected != actual {
        for (n, (e, a)) in expected.lines().zip(actual.lines()).enumerate() {
            if e != a {
                panic!("{name} differs at line {}:\n  expected: {e}\n  actual:   {a}", n + 1);
            }
        }
        panic!("{name} differs in length: expected {} lines, got {}", expected.lines().count(), actual.lines().count());
    }
}

fn family(args: &[&str]) -> String {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    let r = acbm(&full, "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    r.stdout
}

#[test]
fn family_file() {
    assert_golden("family_symbolic.json", &family(&[]));
    assert_golden("family_a1_b2.json", &family(&["--a", "1", "--b", "2"]));
}

#[test]
fn family_emit_to_file() {
    let dir = std::env::temp_dir().join(format!("acbm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("family.json");
    let r = acbm(&["family", "--emit", path.to_str().unwrap()], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), family(&[]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn classify_f5_point() {
    let r = acbm(&["classify"], &family(&["--a", "0", "--b", "1"]));
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("class: F5 (proper)\n"));
    assert_golden("classify_a0_b1.txt", &r.stdout);
}

#[test]
fn classify_symbolic() {
    let r = acbm(&["classify", "-"], &family(&[]));
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("F4 iff {b}\nF5 iff {a}\nF0 iff {a, b}\n"), "{}", r.stdout);
    assert_golden("classify_symbolic.txt", &r.stdout);
}

#[test]
fn report_text_and_json() {
    let input = family(&[]);
    let text = acbm(&["report"], &input);
    let json = acbm(&["report", "--json"], &input);
    assert_eq!((text.code, json.code), (0, 0));
    assert_golden("report_symbolic.txt", &text.stdout);
    assert_golden("report_symbolic.json", &json.stdout);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn connection_and_curvature() {
    let input = family(&[]);
    let c = acbm(&["connection"], &input);
    assert_eq!(c.code, 0);
    assert_golden("connection_symbolic.txt", &c.stdout);
    let k = acbm(&["curvature"], &input);
    assert_eq!(k.code, 0);
    assert_golden("curvature_symbolic.txt", &k.stdout);
}

#[test]
fn bianchi_points() {
    let input = family(&[]);
    let at = |p: &str| acbm(&["bianchi", "--at", p], &input);
    assert_eq!(at("a=0,b=0").stdout, "type I (abelian)\n");
    assert_eq!(at("a=1,b=0").stdout, "type VII_0\n");
    assert_eq!(at("a=0,b=1").stdout, "type V\n");
    assert_eq!(at("a=1,b=1").stdout, "type VII_h (h = 1.414214; trace = -2, det = 2)\n");
    let missing = at("a=1");
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("`b`"), "{}", missing.stderr);
    assert_eq!(at("a=1;b=2").code, 2);
}

#[test]
fn bianchi_of_emitted_origin() {
    let r = acbm(&["bianchi"], &family(&["--a", "0", "--b", "0"]));
    assert_eq!((r.code, r.stdout.as_str()), (0, "type I (abelian)\n"));
}

#[test]
fn verify_summary() {
    let r = acbm(&["verify"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.trim_end().ends_with(
        "Main theorem: PASS; Curvature characteristics: 6/6 PASS; Vertical-class equivalences: 4/5 identical, 1 locus-flagged"
    ));
    assert_golden("verify.txt", &r.stdout);
    let j = acbm(&["verify", "--grid", "0", "--json"], "");
    assert_eq!(j.code, 0);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "flagged"));
}

#[test]
fn validate_reports_violations() {
    let good = acbm(&["validate"], &family(&[]));
    assert_eq!(good.code, 0);
    assert!(good.stdout.contains("axioms: ok"));
    // g22 = +1 breaks the B-metric condition
    let bad_input = family(&[]).replacen("\"-1\"\n    ]\n  ]", "\"1\"\n    ]\n  ]", 1);
    assert_ne!(bad_input, family(&[]));
    let bad = acbm(&["validate"], &bad_input);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("axiom violated: g(phi x, phi y) = -g(x, y) + eta(x) eta(y) fails at [2, 2]"));
}

#[test]
fn input_errors_exit_2() {
    let r = acbm(&["classify"], "{\"dimension\": 3,");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 1"), "{}", r.stderr);
    let bad_phi = family(&[]).replacen("\"-1\"", "\"z\"", 1);
    let r = acbm(&["classify"], &bad_phi);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("phi[1][2]"), "{}", r.stderr);
    assert_eq!(acbm(&["report", "/no/such/file"], "").code, 2);
    assert_eq!(acbm(&["family", "--a", "1/0"], "").code, 2);
    assert_eq!(acbm(&["verify", "--grid", "-1"], "").code, 2);
}

#[test]
fn classify_rejects_unadapted_frame() {
    let swapped = family(&[]).replace("\"xi\": [\n    \"1\",\n    \"0\",", "\"xi\": [\n    \"0\",\n    \"1\",");
    let r = acbm(&["classify"], &swapped);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("class: not decided"));
}
