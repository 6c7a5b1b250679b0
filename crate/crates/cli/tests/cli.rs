use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_whitforge"));
    cmd.env_remove("WHITFORGE_FIXTURE_DIR");
    cmd
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json_of(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(out)))
}

const GLSAME: &str = r#"{"S": "diag(3,1,-1,-3)", "f": "E21+E43"}"#;

#[test]
fn chain_of_glsame() {
    let out = run(&["pair-chain", "-"], Some(GLSAME));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out.stdout);
    assert_eq!(v["criticals"], serde_json::json!(["0", "1/4", "3/4"]));
    assert_eq!(v["obstructions"].as_array().unwrap().len(), 3);
    assert!(v["checks"].as_object().unwrap().values().all(|b| *b == Value::Bool(true)));
}

#[test]
fn single_snapshot() {
    let out = run(&["pair-chain", "-", "--t", "1/4"], Some(GLSAME));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out.stdout);
    assert!(v["snapshot"].is_object());
    assert!(v["checks"].as_object().unwrap().values().all(|b| *b == Value::Bool(true)));
    assert_eq!(run(&["pair-chain", "-", "--t", "-1"], Some(GLSAME)).status.code(), Some(2));
}

#[test]
fn deform_gl_small() {
    let out = run(&["deform-gl", "--mu", "2,2", "--lambda", "3,1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out.stdout);
    let psi = &v["psi"];
    for i in 0..4 {
        for j in 0..4 {
            let want = if (i, j) == (3, 1) { "1" } else { "0" };
            assert_eq!(psi[i][j], want, "psi[{i}][{j}]");
        }
    }
    assert!(v["checks"].as_object().unwrap().values().all(|b| *b == Value::Bool(true)));
}

#[test]
fn closure_and_classify() {
    let v = json_of(&run(&["orbit-closure", "--eta", "2,2", "--gamma", "4"], None).stdout);
    assert_eq!(v, serde_json::json!({ "leq": true }));
    let v = json_of(&run(&["orbit-closure", "--eta", "4", "--gamma", "2,2"], None).stdout);
    assert_eq!(v, serde_json::json!({ "leq": false }));
    let out = run(&["classify", "--group", "GL", "--field", "real", "--lambda", "3,1"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out.stdout).is_object());
}

#[test]
fn orbit_classify_reads_stdin() {
    let v = json_of(&run(&["orbit-classify"], Some(r#"{"N": "2*E21"}"#)).stdout);
    assert_eq!(v["lambda"], serde_json::json!([2]));
    assert_eq!(v["sl_class"]["a_class"], "2");
}

#[test]
fn sl_condition_not_met() {
    let out = run(&["deform-sl", "--mu", "2,2", "--lambda", "4", "--a", "2", "--b", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out.stdout);
    assert_eq!(v["status"], "condition_not_met");
    assert_eq!(v["d"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["pair-chain", "-"], Some("{not json")).status.code(), Some(1));
    assert_eq!(run(&["pair-chain", "-"], Some(r#"{"S": "diag(1,-1)", "f": "E2"}"#)).status.code(), Some(1));
    assert_eq!(run(&["pair-chain", "-"], Some(r#"{"S": "diag(1,-1)", "g": "E21"}"#)).status.code(), Some(1));
    assert_eq!(run(&["deform-gl", "--mu", "x", "--lambda", "2"], None).status.code(), Some(1));
    assert_eq!(run(&["no-such-verb"], None).status.code(), Some(1));
    assert_eq!(run(&["--version"], None).status.code(), Some(0));

    let out = run(&["deform-gl", "--mu", "4", "--lambda", "2,2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out.stderr)["error"], "NotDominated");
    // [S, f] = -f instead of -2f
    let out = run(&["pair-check", "-"], Some(r#"{"S": "diag(1,0)", "f": "E21"}"#));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_output() {
    let out = run(&["--output", "text", "orbit-closure", "--eta", "2,2", "--gamma", "4"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "leq: true");
    let out = run(&["verify-fixtures", "--output", "text"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS glsame_chain"), "{text}");
    assert!(text.ends_with("4 passed, 0 failed\n"), "{text}");
}

#[test]
fn output_is_byte_stable() {
    let a = run(&["pair-chain", "-"], Some(GLSAME)).stdout;
    let b = run(&["pair-chain", "-"], Some(GLSAME)).stdout;
    assert_eq!(a, b);
    let a = run(&["compar", "--mu", "2,1,1", "--lambda", "4"], None).stdout;
    let b = run(&["compar", "--mu", "2,1,1", "--lambda", "4"], None).stdout;
    assert_eq!(a, b);
}

#[test]
fn embedded_fixtures_pass() {
    let out = run(&["verify-fixtures"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out.stdout);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(4), Some(0)));

    let v = json_of(&run(&["verify-fixtures", "--filter", "gl6"], None).stdout);
    let names: Vec<_> = v["fixtures"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["gl6_first", "gl6_second"]);
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("whitforge-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn corrupted_fixture_is_reported() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dir = scratch_dir("fixtures");
    for entry in std::fs::read_dir(&src).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
    let target = dir.join("glsame_chain.json");
    let mut fx: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    fx["expected"]["criticals"] = serde_json::json!(["0", "1/3", "3/4"]);
    std::fs::write(&target, serde_json::to_string_pretty(&fx).unwrap()).unwrap();

    let out = bin().arg("verify-fixtures").env("WHITFORGE_FIXTURE_DIR", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out.stdout);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(3), Some(1)));
    let bad = v["fixtures"].as_array().unwrap().iter().find(|f| f["passed"] == false).unwrap();
    assert_eq!(bad["name"], "glsame_chain");
    let diff = bad["diff"].as_str().unwrap();
    assert!(diff.contains("-    \"1/3\"") && diff.contains("+    \"1/4\""), "{diff}");

    let out = bin()
        .args(["verify-fixtures", "--output", "text", "--filter", "glsame"])
        .env("WHITFORGE_FIXTURE_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("FAIL glsame_chain\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn library_entry_point() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = whitforge::run(["whitforge", "orbit-closure", "--eta", "1,1", "--gamma", "2"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out), serde_json::json!({ "leq": true }));
    assert!(err.is_empty());
}
