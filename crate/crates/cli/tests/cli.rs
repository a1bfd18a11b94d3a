use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_devmodal"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn force_prints_mostowski_line() {
    let (code, out, _) = run(&["force", "--max-poset", "3", "--rank", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(
        out.lines()
            .any(|l| l.starts_with("mostowski=val: PASS (") && l.ends_with(" instances)")),
        "{out}"
    );
}

#[test]
fn liar_file_passes() {
    let (code, out, err) = run(&[
        "revise",
        "--net",
        "data/liar.net",
        "--formula",
        "box (dia T(lambda) and dia not T(lambda))",
    ]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("phi0: PASS"), "{out}");
}

#[test]
fn failing_check_exits_one() {
    let (code, out, _) = run(&["revise", "--net", "liar", "--formula", "box T(lambda)"]);
    assert_eq!(code, 1);
    assert!(out.contains("phi0: FAIL"), "{out}");
}

#[test]
fn parse_errors_exit_two_with_a_position() {
    let (code, _, err) = run(&[
        "check",
        "--model",
        "data/growing-order.dev",
        "--formula",
        "forall x (le(x,",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("offset 12"), "{err}");
    let (code, _, err) = run(&["reals", "--net", "no-such-net"]);
    assert_eq!(code, 2);
    assert!(err.contains("no-such-net"), "{err}");
}

#[test]
fn csv_and_json_outputs() {
    let (code, out, _) = run(&[
        "reals", "--net", "leibniz", "--table", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().take(3).collect::<Vec<_>>(),
        ["s,value,bound", "0,4,4/3", "1,8/3,4/5"]
    );
    let (_, out, _) = run(&[
        "omega",
        "--preset",
        "arith-basic",
        "--formula",
        "box exists y forall x le(x,y)",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "omega");
    assert_eq!(v["data"]["verdict"], "True");
    for key in ["ok", "summary", "columns", "rows", "data"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn model_files_check_and_validate() {
    let (code, out, _) = run(&["validate", "--model", "data/growing-order.dev"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&[
        "check",
        "--model",
        "data/growing-order.dev",
        "--formula",
        "exists y forall x le(x,y)",
        "--state",
        "s1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains(": true"), "{out}");
    let (code, out, _) = run(&[
        "check",
        "--lasso",
        "data/blinker.lasso",
        "--formula",
        "box (dia T(l) and dia not T(l))",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains(": true"), "{out}");
}

#[test]
fn types_report_matches_examples() {
    let (code, out, _) = run(&[
        "types",
        "--type",
        "n-less-x",
        "--formula",
        "lt(5, x)",
        "--formula",
        "x = 3",
        "--formula",
        "exists y add(y, y, x)",
        "--period",
        "0,2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("lt(5, x): Satisfied"), "{out}");
    assert!(out.contains("x = 3: Unsatisfied"), "{out}");
    assert!(out.contains("UltrafilterDependent"), "{out}");
}
