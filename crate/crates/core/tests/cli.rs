use std::process::Command;

fn glr_bv() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glr-bv"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(glr_bv().arg("--help")), 0);
    assert_eq!(code(glr_bv().args(["alpha-vs-theta", "--help"])), 0);
    assert_eq!(code(&mut glr_bv()), 1);
    assert_eq!(code(glr_bv().args(["mse-vs-p", "--bogus"])), 1);
    assert_eq!(code(glr_bv().args(["alpha-vs-theta", "--theta", "log:1:0.1:3"])), 1);
    assert_eq!(code(glr_bv().args(["multi-sample", "--realizations", "0"])), 1);
}

#[test]
fn data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(glr_bv().args(["real-graph", "--graph"]).arg(&missing)), 2);
    let split = dir.path().join("split.txt");
    std::fs::write(&split, "0 1\n2 3\n").unwrap();
    let out = glr_bv().args(["real-graph", "--graph"]).arg(&split).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 components"));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n1 two\n").unwrap();
    let out = glr_bv().args(["real-graph", "--graph"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("t.csv"), dir.path().join("t.svg"));
    let status = glr_bv()
        .args(["alpha-vs-theta", "--n", "40", "--p", "0.3", "--theta", "log:0.01:100:5"])
        .args(["--alpha-t", "200", "--realizations", "3", "--seed", "9", "--out-csv"])
        .arg(&csv)
        .arg("--out-svg")
        .arg(&svg)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("theta,sigma,n,"));
    assert!(!text.contains('\r'));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));

    let stdout = glr_bv()
        .args(["band-limited", "--family", "ws", "--n", "30", "--d", "4", "--q", "0.2"])
        .args(["--band", "1:2,3:1", "--omega1", "-5,5", "--alphas", "1"])
        .output()
        .unwrap();
    assert!(stdout.status.success());
    let body = String::from_utf8(stdout.stdout).unwrap();
    assert_eq!(body.lines().count(), 1 + 2 + 2);
}
