use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_virtual-ext"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn piped(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn script_matches_golden_transcript() {
    let out = bin().arg("--script").arg(data("demo.vx")).output().unwrap();
    let expected = std::fs::read_to_string(data("demo.out")).unwrap();
    let expected_err = std::fs::read_to_string(data("demo.err")).unwrap();
    assert_eq!(text(&out.stdout), expected);
    assert_eq!(text(&out.stderr), expected_err);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn piped_session() {
    let out = piped(
        &[],
        "st((1+eps)^2)\ninf * (inf + 1)\n0 <= cyc[-1,1]\nderiv(x^2, x, 3)\nbogus +\n1/2 + 1/3\n",
    );
    assert_eq!(
        text(&out.stdout),
        "1\n(n^2+n)/1\nmixed (not comparable)\n6 (exact)\n5/6\n"
    );
    assert_eq!(
        text(&out.stderr),
        "syntax error at 5:8: unexpected end of input (expected number, identifier, '(', '-', cyc)\n"
    );
    // a session keeps going after errors
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn script_stops_at_first_error_unless_asked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.vx");
    std::fs::write(&path, "a = 2\nb = a / cyc{1; 0}\na * a\n").unwrap();
    let out = bin().arg("--script").arg(&path).output().unwrap();
    assert_eq!(text(&out.stdout), "> a = 2\na = 2\n> b = a / cyc{1; 0}\n");
    assert!(text(&out.stderr).starts_with("zero-branch divisor at 2:7:"));
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--script").arg(&path).arg("--keep-going").output().unwrap();
    assert!(text(&out.stdout).ends_with("> a * a\n4\n"));
    assert_eq!(out.status.code(), Some(1));
    let missing = bin().arg("--script").arg(dir.path().join("none.vx")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn diagnostics_name_kind_and_position() {
    let cases = [
        ("1 + * 2", "syntax error at 1:5"),
        ("x^y", "syntax error at 1:3"),
        ("ln(-1)", "domain violation at 1:1"),
        ("1 / cyc[0, 1]", "zero-branch divisor at 1:3"),
        ("  nope", "name error at 1:3"),
        ("st(sin(eps))", "type error at 1:4"),
        ("n^40", "limit exceeded at 1:2"),
    ];
    for (src, prefix) in cases {
        let out = piped(&[], &format!("{src}\n"));
        let err = text(&out.stderr);
        assert!(err.starts_with(prefix), "{src}: {err}");
    }
}

#[test]
fn json_mode() {
    let out = piped(&["--json"], "x = cyc[1, 2]\nst(x)\n1 +\n");
    let lines: Vec<serde_json::Value> = text(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["kind"], "exact");
    assert_eq!(lines[0]["name"], "x");
    assert_eq!(lines[0]["period"], 2);
    assert_eq!(lines[0]["canonical"]["period"], 2);
    assert_eq!(lines[1]["kind"], "undefined");
    assert_eq!(lines[2]["kind"], "error");
    assert_eq!(lines[2]["error"], "syntax error");
    assert_eq!((lines[2]["line"].as_u64(), lines[2]["column"].as_u64()), (Some(3), Some(4)));
    assert!(out.stderr.is_empty());
}

#[test]
fn settings_flags() {
    let out = piped(&["--horizon", "100", "--tol", "1e-3"], "exp(eps) > 1\n");
    assert_eq!(text(&out.stdout), "true (checked to H=100, tol=1e-3)\n");
    let out = piped(&["--max-period", "2"], "cyc[1, 2, 3]\n");
    assert!(text(&out.stderr).starts_with("limit exceeded at 1:1"));
}

#[test]
fn vet_summary_and_reports() {
    let out = bin().arg("vet").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = text(&out.stdout);
    for item in ["ii", "iv", "v", "vi"] {
        let row = table.lines().find(|l| l.split_whitespace().next() == Some(item)).unwrap();
        assert!(row.contains("StrictSubset-witnessed"), "{row}");
        assert!(row.ends_with("yes"), "{row}");
    }
    for item in ["i", "iii", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "a", "b", "c"] {
        let row = table.lines().find(|l| l.split_whitespace().next() == Some(item)).unwrap();
        assert!(row.contains("Equal") && row.ends_with("yes"), "{row}");
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let out = bin()
        .args(["vet", "--random", "20", "--seed", "7", "--json", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let saved = std::fs::read_to_string(&path).unwrap();
    assert_eq!(saved, text(&out.stdout));
    assert_eq!(saved.lines().count(), 16);
    let first: serde_json::Value = serde_json::from_str(saved.lines().next().unwrap()).unwrap();
    assert_eq!(first["seed"], 7);

    let clash = bin().args(["vet", "--all", "--random", "3"]).output().unwrap();
    assert_eq!(clash.status.code(), Some(2));
}
