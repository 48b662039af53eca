use std::process::Command;

fn pfred(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfred")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_sweep_prints_one_json_line_per_case() {
    let (code, out, _) = pfred(&[
        "verify",
        "--identity",
        "single",
        "--symbol",
        r#"{"kind":"bessel","t":1}"#,
        "--n",
        "-2..3",
        "--s",
        "0.5,-0.5",
        "--form",
        "both",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6 * 2 * 2);
    assert!(lines.iter().all(|v| v["pass"] == true));
}

#[test]
fn gessel_and_lambda2_sweeps() {
    let (code, out, _) = pfred(&["verify", "--identity", "gessel", "--t", "0.5,1", "--n", "1..3"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 6);
    let (code, _, _) = pfred(&[
        "verify",
        "--identity",
        "lambda2",
        "--t",
        "1",
        "--n",
        "1..3",
        "--tol",
        "1e-7",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn joint_and_moment_outputs() {
    let (code, out, _) = pfred(&["plancherel", "--t", "1", "--joint", "--a", "inf,1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!(v["probability"].as_f64().unwrap() > 0.9);
    let (code, out, _) = pfred(&["plancherel", "--t", "2", "--moment", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!((v["moment"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn out_file_and_threads_env() {
    let dir = std::env::temp_dir().join(format!("pfred-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_pfred"))
        .env("PFRED_THREADS", "2")
        .args(["plancherel", "--t", "1", "--n", "0..4", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("n,cdf"));
    assert_eq!(text.lines().count(), 6);
    let bad = Command::new(env!("CARGO_BIN_EXE_pfred"))
        .env("PFRED_THREADS", "many")
        .args(["oracle", "--dim", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pfred(&["verify"]).0, 2);
    assert_eq!(pfred(&["bogus"]).0, 2);
    assert_eq!(pfred(&["plancherel", "--t", "1", "--n", "5..2"]).0, 2);
    assert_eq!(pfred(&["--help"]).0, 0);
}

#[test]
fn fixtures_are_exact_rationals() {
    let (code, out, _) = pfred(&["oracle", "--fixtures"]);
    assert_eq!(code, 0);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(first["value"], "1/1");
    assert!(out
        .lines()
        .any(|l| l == r#"{"N":4,"k":1,"kind":"plancherel_row_cdf","n":2,"value":"7/12"}"#));
}
