use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn gkat(args: &[&str], path: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gkat"));
    cmd.args(args);
    if let Some(p) = path {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const EXAMPLE_PAIR: &str =
    "tests: b; actions: p, q;\nif b then (p; q) else q\n---\n(p +[b] skip); q\n";
const LOOP: &str = "tests: b; actions: p;\nwhile b do p\n";

#[test]
fn check_equivalent_pair() {
    let f = file(EXAMPLE_PAIR);
    let o = gkat(&["check"], Some(f.path()));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "equivalent\n");
}

#[test]
fn check_reports_a_witness() {
    let f = file("tests: b; actions: p, q;\np\n---\nq\n");
    let o = gkat(&["check"], Some(f.path()));
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("witness: ")).unwrap();
    assert_eq!(
        line.matches(" . p . ").count() + line.matches(" . q . ").count(),
        1
    );
}

#[test]
fn errors_exit_two() {
    let f = file("tests: b; actions: p;\nwhile b p\n");
    let o = gkat(&["check"], Some(f.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:9"));
    let o = gkat(&["check", "/nonexistent/file.gkat"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = gkat(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hoare_triples() {
    let valid = file("tests: t; actions: p;\n1\n---\nwhile t do p\n---\nnot t\n");
    assert_eq!(gkat(&["hoare"], Some(valid.path())).status.code(), Some(0));
    let invalid = file("tests: t; actions: p;\n1\n---\np\n---\nt\n");
    let o = gkat(&["hoare"], Some(invalid.path()));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "invalid\n");
}

#[test]
fn dot_output_for_a_loop() {
    let f = file(LOOP);
    let o = gkat(&["automaton", "--dot"], Some(f.path()));
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph gkat {"));
    assert!(dot.contains("s0 -> s0 [label=\"b / p\"];"));
    assert!(dot.contains("s1 -> s0 [label=\"b / p\"];"));
    assert_eq!(dot.matches("label=\"not b\"").count(), 2);
}

#[test]
fn json_and_normalize() {
    let f = file("tests: b; actions: p, q;\np; while 1 do q\n");
    let raw = stdout(&gkat(&["automaton", "--json"], Some(f.path())));
    let norm = stdout(&gkat(&["normalize", "--json"], Some(f.path())));
    let raw: serde_json::Value = serde_json::from_str(&raw).unwrap();
    let norm: serde_json::Value = serde_json::from_str(&norm).unwrap();
    assert_ne!(raw["delta"], norm["delta"]);
    assert!(norm["delta"].to_string().find("[\"p\"").is_none());
    let flag = stdout(&gkat(
        &["automaton", "--normalize", "--json"],
        Some(f.path()),
    ));
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&flag).unwrap(),
        norm
    );
}

#[test]
fn lang_lists_sorted_strings() {
    let f = file(LOOP);
    let o = gkat(&["lang", "--max-actions", "2"], Some(f.path()));
    assert_eq!(
        stdout(&o),
        "{b=0}\n{b=1} . p . {b=0}\n{b=1} . p . {b=1} . p . {b=0}\n"
    );
}

#[test]
fn solve_and_system() {
    let f = file(LOOP);
    let solved = stdout(&gkat(&["solve"], Some(f.path())));
    let pair = file(&format!(
        "tests: b; actions: p;\nwhile b do p\n---\n{solved}"
    ));
    assert_eq!(gkat(&["check"], Some(pair.path())).status.code(), Some(0));

    let sys = stdout(&gkat(&["system"], Some(f.path())));
    assert!(sys.starts_with("x0 = "));
    assert!(sys.ends_with("salomaa: true\n"));
}

#[test]
fn interp_under_a_model() {
    let model = file(r#"{"m": 2, "eval": {"p": [[0, 1]]}, "sat": {"t": [0]}}"#);
    let prog = file("tests: t; actions: p;\nwhile t do p\n");
    let m = model.path().to_str().unwrap();
    let o = gkat(&["interp", "--model", m], Some(prog.path()));
    assert_eq!(stdout(&o), "[[0,1],[1,1]]\n");
    let pair =
        file("tests: t; actions: p;\nwhile t do p\n---\nif t then (p; while t do p) else skip\n");
    assert_eq!(
        gkat(&["interp", "--model", m], Some(pair.path()))
            .status
            .code(),
        Some(0)
    );
    let bad = file(r#"{"m": 2, "eval": {"zz": []}}"#);
    let o = gkat(
        &["interp", "--model", bad.path().to_str().unwrap()],
        Some(prog.path()),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_csv() {
    let o = gkat(
        &[
            "bench", "--family", "seq", "--sizes", "10,20", "--reps", "1",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "size,build_ns,normalize_ns,decide_ns");
    assert!(lines[1].starts_with("10,") && lines[2].starts_with("20,"));
    let o = gkat(&["bench", "--family", "nested", "--sizes", "5"], None);
    assert_eq!(stdout(&o).lines().count(), 2);
}
