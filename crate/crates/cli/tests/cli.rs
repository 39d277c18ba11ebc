use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmc"))
        .args(args)
        .env("BMC_NO_COLOR", "1")
        .output()
        .unwrap()
}

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .display()
        .to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&bmc(&["check", &fixture("positive/factory.bmc")])), 0);
    assert_eq!(code(&bmc(&["check", &fixture("positive/factory.json")])), 0);
    let out = bmc(&["check", &fixture("negative/dr03_segment_supports.bmc")]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    let line = err.lines().find(|l| l.contains("E010")).unwrap();
    assert!(line.starts_with("error E010 "));
    assert!(line.ends_with("[DR3]"));
    assert!(line.contains("dr03_segment_supports.bmc:8:5 "));
    assert_eq!(code(&bmc(&["check", "/no/such/file.bmc"])), 2);
    assert_eq!(code(&bmc(&["check", "--bogus", &fixture("positive/factory.bmc")])), 2);
    assert_eq!(code(&bmc(&["check", &fixture("io/not_utf8.bmc")])), 2);
}

#[test]
fn warnings_and_lint_flags() {
    let f = fixture("positive/factory.bmc");
    let out = bmc(&["check", &f]);
    assert!(stderr(&out).contains("warning W"));
    assert_eq!(code(&bmc(&["check", "--deny-warnings", &f])), 1);
    let out = bmc(&["check", "--no-lint", "--deny-warnings", &f]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).is_empty());
}

#[test]
fn check_json_output() {
    let out = bmc(&["check", "--json", &fixture("negative/dr10_segment_determines_cost.bmc")]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let errors: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["severity"] == "error")
        .collect();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["code"], "E010");
    assert_eq!(errors[0]["rule"], "DR10");
    assert!(errors[0]["hint"].as_str().unwrap().contains("Customers affects Costs"));
}

#[test]
fn input_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.txt");
    std::fs::copy(fixture("positive/factory.json"), &path).unwrap();
    let p = path.display().to_string();
    assert_eq!(code(&bmc(&["check", &p])), 1);
    assert_eq!(code(&bmc(&["check", "--input", "json", &p])), 0);
}

#[test]
fn fmt_modes() {
    let dir = tempfile::tempdir().unwrap();
    let canonical = stdout(&bmc(&["fmt", &fixture("positive/passive.bmc")]));
    let path = dir.path().join("canonical.bmc");
    std::fs::write(&path, &canonical).unwrap();
    assert_eq!(code(&bmc(&["fmt", "--check", &path.display().to_string()])), 0);

    let out = bmc(&["fmt", "--check", &fixture("positive/passive.bmc")]);
    assert_eq!(code(&out), 1);
    let diff = stdout(&out);
    assert!(diff.contains("-    Goods is_determined_by Locals"));
    assert!(diff.contains("+    Locals determines Goods"));

    assert_eq!(code(&bmc(&["fmt", &fixture("negative/syntax_errors.bmc")])), 2);

    let path = dir.path().join("rewrite.bmc");
    std::fs::copy(fixture("positive/passive.bmc"), &path).unwrap();
    let p = path.display().to_string();
    assert_eq!(code(&bmc(&["fmt", "--write", &p])), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), canonical);
}

#[test]
fn render_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("pmc.svg");
    let o = out.display().to_string();
    let r = bmc(&["render", &fixture("positive/pmc.bmc"), "--format", "svg", "--bm", "Polycarbonate", "-o", &o]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("Polycarbonate panels"));

    let bad = dir.path().join("bad.svg");
    let b = bad.display().to_string();
    let r = bmc(&["render", &fixture("negative/dr08_resource_affects_offer.bmc"), "--format", "svg", "-o", &b]);
    assert_eq!(code(&r), 1);
    assert!(!bad.exists());

    let r = bmc(&["render", &fixture("positive/multi.bmc"), "--format", "dot"]);
    assert_eq!(code(&r), 2);
    let r = bmc(&["render", &fixture("positive/multi.bmc"), "--format", "dot", "--bm", "Outlet"]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).starts_with("digraph \"Outlet\""));
    let r = bmc(&["render", &fixture("positive/multi.bmc"), "--format", "json"]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).contains("\"Wholesale\""));
}

#[test]
fn infer_entries() {
    let r = bmc(&["infer", "CS", "VP"]);
    assert_eq!((code(&r), stdout(&r).as_str()), (0, "determines\n"));
    let r = bmc(&["infer", "VP", "CS"]);
    assert_eq!(stdout(&r), "reverse-only (reverse kind: determines)\n");
    assert_eq!(code(&r), 0);
    assert_eq!(stdout(&bmc(&["infer", "KR", "KR"])), "supports\n");
    assert_eq!(stdout(&bmc(&["infer", "key_resource", "revenue_stream"])), "affects\n");
    assert_eq!(code(&bmc(&["infer", "KR", "XX"])), 2);
}

#[test]
fn matrix_formats() {
    let csv = stdout(&bmc(&["matrix", "--format", "csv"]));
    let rows: Vec<_> = csv.lines().collect();
    assert_eq!(rows[0], "src,dst,entry");
    assert_eq!(rows.len(), 82);
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/policy.golden"),
    )
    .unwrap();
    assert_eq!(csv, golden);

    let table = stdout(&bmc(&["matrix"]));
    let lines: Vec<Vec<&str>> = table.lines().map(|l| l.split_whitespace().collect()).collect();
    let header = &lines[0];
    let cell = |src: &str, dst: &str| {
        let row = lines.iter().find(|r| r[0] == src).unwrap();
        let col = header.iter().position(|h| *h == dst).unwrap();
        row[col + 1].to_string()
    };
    assert_eq!(cell("CR", "VP"), "A");
    assert_eq!(cell("CS", "KR"), "·S");
    assert_eq!(lines.len(), 10);
}

#[test]
fn serve_on_occupied_port_exits_2() {
    let holder = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = holder.local_addr().unwrap().port().to_string();
    let r = bmc(&["serve", "--port", &port]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("cannot bind"));
}
