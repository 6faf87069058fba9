use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const FIRST: &str = "a = 2; f = a \\cos(2x); g=\\int(f) d x;";
const CHECK: &str = "\"We can first evaluate the indefinite integral,\"
a=2; f=a\\cos(2x); g=\\int(f) d x;
\"and then check that we haven't made a mistake \"
h= \\D_{x}(g); ; \\print(g,h) ;";
const HEAT: &str = include_str!("heat.mpr");

fn mathpar(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mathpar"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_first_example() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "first.txt", FIRST);
    let out = mathpar(&["run", &path], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "\\sin(2x)\n");
}

#[test]
fn run_empty_file() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "empty.txt", "");
    let out = mathpar(&["run", &path], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");
}

#[test]
fn run_heat_document() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "heat.txt", HEAT);
    let out = mathpar(&["run", &path], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[lines.len() - 2..],
        ["mass = \\frac{1071}{230} \\cdot kg", "4.66 \\cdot kg"]
    );
}

#[test]
fn exit_code_matrix() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, i32); 6] = [
        ("a = 1;", 0),
        ("\"only prose\"", 0),
        ("a = 1/0;", 1),
        ("a = (1;", 1),
        ("a = 1;\n\nb = \\ln(0);\n\nc = 2;", 1),
        ("x = 2 kg + 3 kJ;", 1),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let path = file(&dir, &format!("case{i}.txt"), text);
        for format in ["plain", "latex", "json"] {
            let out = mathpar(&["run", &path, "--format", format], None);
            assert_eq!(out.status.code(), Some(*code), "{text} ({format})");
        }
    }
    let missing = dir.path().join("missing.txt");
    let out = mathpar(&["run", missing.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
    assert_eq!(mathpar(&["run"], None).status.code(), Some(2));
    assert_eq!(mathpar(&["frobnicate"], None).status.code(), Some(2));
    let out = mathpar(&["run", "-", "--unknown", "kg"], Some("1;"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn standard_input() {
    let out = mathpar(&["run", "-"], Some(FIRST));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "\\sin(2x)\n");
}

#[test]
fn flags() {
    let out = mathpar(&["run", "-", "--precision", "4"], Some("\\value(2/3);"));
    assert_eq!(stdout(&out), "0.6667\n");
    let out = mathpar(&["run", "-", "--unknown", "t"], Some("\\solve(3t = 1);"));
    assert_eq!(stdout(&out), "\\frac{1}{3}\n");
    let out = mathpar(&["run", "-", "--format", "latex"], Some(CHECK));
    assert_eq!(stdout(&out), "$g = \\sin(2x)$\n$h = 2\\cos(2x)$\n");
}

#[test]
fn json_format() {
    let out = mathpar(&["run", "-", "--format", "json"], Some("a = 1;\n\n\\print(a);\n\n1/0;"));
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        json,
        serde_json::json!([
            {"cell": 0, "outputs": [{"label": null, "display": "1", "source": "1"}], "diagnostics": []},
            {"cell": 1, "outputs": [{"label": "a", "display": "1", "source": "1"}], "diagnostics": []},
            {"cell": 2, "outputs": [], "diagnostics": [{
                "severity": "error", "code": "DivisionByZero",
                "message": "division by zero", "span": {"start": 0, "end": 3}
            }]}
        ])
    );
    let out = mathpar(&["run", "-", "--format", "json"], Some(""));
    assert_eq!(stdout(&out), "[]\n");
}

#[test]
fn repeated_runs_are_identical() {
    let first = mathpar(&["run", "-", "--format", "json"], Some(HEAT));
    let second = mathpar(&["run", "-", "--format", "json"], Some(HEAT));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn render_inlines_outputs() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "check.txt", CHECK);
    let output = dir.path().join("check.out.txt");
    let out = mathpar(&["render", &input, "-o", output.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let rendered = std::fs::read_to_string(&output).unwrap();
    assert_eq!(
        rendered,
        format!("{CHECK}\n\"OUT:\n$g = \\sin(2x)$\n$h = 2\\cos(2x)$\n\"")
    );

    let again = mathpar(&["run", output.to_str().unwrap()], None);
    let original = mathpar(&["run", &input], None);
    assert_eq!(again.stdout, original.stdout);
}

#[test]
fn render_leaves_prose_alone() {
    let dir = TempDir::new().unwrap();
    let text = "\"Just prose.\"\n\n\"More prose with $x^2$.\"\n";
    let input = file(&dir, "prose.txt", text);
    let output = dir.path().join("prose.out.txt");
    let out = mathpar(&["render", &input, "-o", output.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&output).unwrap(), text);
}

#[test]
fn render_is_stable_and_reports_failure() {
    let dir = TempDir::new().unwrap();
    let input = file(&dir, "heat.txt", HEAT);
    let once = dir.path().join("once.txt");
    let twice = dir.path().join("twice.txt");
    mathpar(&["render", &input, "-o", once.to_str().unwrap()], None);
    mathpar(&["render", once.to_str().unwrap(), "-o", twice.to_str().unwrap()], None);
    let once_text = std::fs::read_to_string(&once).unwrap();
    assert!(once_text.contains("$mass = \\frac{1071}{230} \\cdot kg$"));
    assert_eq!(once_text, std::fs::read_to_string(&twice).unwrap());

    let bad = file(&dir, "bad.txt", "a = 1/0;");
    let out = mathpar(&["render", &bad, "-o", "-"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("OUT:\nerror[DivisionByZero]"));
    let out = mathpar(&["render", &bad, "-o", dir.path().join("no/such/dir").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new("no/such/dir").exists());
}

#[test]
fn repl_over_pipes() {
    let out = mathpar(&["repl"], Some("a=2\n\na+1;\n\n:quit\n"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2\n3\n");
    let out = mathpar(&["repl"], Some(&format!("{FIRST}\n")));
    assert_eq!(stdout(&out), "\\sin(2x)\n");
}
