use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use miura::script::{parse_script, run_script, Entry, Transcript};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scripts")
        .join(name)
}

fn miura(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_miura"))
        .args(args)
        .output()
        .unwrap()
}

fn script_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn arg(f: &tempfile::NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn run_text(text: &str) -> Transcript {
    run_script(&parse_script(text).unwrap())
}

#[test]
fn elliptic_fixture() {
    let out = miura(&["run", fixture("elliptic.miura").to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        &lines[..4],
        [
            "ideal (y - 2*x, x^2 - x)",
            "ideal (x - 3, y - 6)",
            "ideal (x - 3, y + 6)",
            "ideal (x - 3, y + 6)"
        ]
    );
    assert!(lines[4..].iter().all(|l| l.ends_with(": ok")));
}

#[test]
fn genus_four_fixture() {
    let out = miura(&["run", fixture("miura_gf5.miura").to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines[0],
        "ideal (x^2 + y + z + 2*x, x*z + 3*y + 3*z + 2*x, x*y + 4*y + 4*z + 4*x, y*z + 3*y + 3*z + 4*x + 1)"
    );
    assert_eq!(lines[1..4], ["4", "ideal 1", "ideal (x + 1, y)"]);
}

#[test]
fn json_output() {
    let out = miura(&[
        "run",
        "--format",
        "json",
        fixture("miura_gf5.miura").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let first: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(first["field"], "GF(5)");
    assert_eq!(first["generators"].as_array().unwrap().len(), 4);
    let last_print: serde_json::Value =
        serde_json::from_str(stdout.lines().nth(3).unwrap()).unwrap();
    assert_eq!(last_print["generators"], serde_json::json!(["x + 1", "y"]));
}

#[test]
fn exit_codes() {
    let header = "ring q vars x:2 y:3\ncurve y^2 - x^3 - 3*x\n";
    let failing = script_file(&format!("{header}assert point(0, 0) == unit\n"));
    assert_eq!(miura(&["run", arg(&failing)]).status.code(), Some(1));
    let syntax = script_file(&format!("{header}let A = reduce(\n"));
    let out = miura(&["run", arg(&syntax)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    let name = script_file(&format!("{header}print B\n"));
    assert_eq!(miura(&["run", arg(&name)]).status.code(), Some(2));
    assert_eq!(
        miura(&["run", "/nonexistent/script.miura"]).status.code(),
        Some(2)
    );
}

#[test]
fn repl_reads_statements_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_miura"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"ring gf 5 vars x:2 y:3\ncurve y^2 - x^3 - 3*x\nlet P = point(1, 2)\nprint double(P)\nquit\nprint P\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "ideal (x + 1, y + 4)\n"
    );
}

#[test]
fn transcripts_are_deterministic() {
    for name in ["elliptic.miura", "miura_gf5.miura"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let render = |t: &Transcript| {
            t.entries
                .iter()
                .map(Entry::render_text)
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(render(&run_text(&text)), render(&run_text(&text)));
        let a = miura(&["run", fixture(name).to_str().unwrap()]).stdout;
        let b = miura(&["run", fixture(name).to_str().unwrap()]).stdout;
        assert_eq!(a, b);
    }
}

#[test]
fn printed_ideals_parse_back() {
    let header = "ring gf 5 vars x:4 y:6 z:5\ncurve y^2 - x^3 - 1; z^2 - x*y - 1\n";
    let points = [
        "point(2,2,0)",
        "point(4,0,1)",
        "point(0,1,4)",
        "point(0,4,1)",
    ];
    let mut exprs: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    exprs.push(format!("reduce({})", points.join("*")));
    exprs.push(format!("{}*{}", points[0], points[1]));
    exprs.push("multi(reduce(point(2,2,0)*point(4,0,1)), 7)".into());
    exprs.push("unit".into());
    for e in exprs {
        let t = run_text(&format!("{header}print {e}"));
        let Entry::Printed { text, .. } = &t.entries[0] else {
            panic!()
        };
        let gens = text.strip_prefix("ideal ").unwrap();
        let rebuilt = if gens == "1" {
            "unit".to_string()
        } else {
            format!("ideal{gens}")
        };
        let t = run_text(&format!(
            "{header}assert {rebuilt} == {e}\nassert reduce({rebuilt}) == reduce({e})"
        ));
        assert_eq!(t.exit_code(), 0, "{e}: {:?}", t.entries);
    }
}
