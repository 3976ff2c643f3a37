use std::process::{Command, Output};

use monostar::{parse_expr, Scalar};

fn monostar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monostar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CONSTANT: [&str; 6] = ["--field-b1", "1/3*q1", "--field-b2", "1/3*q2", "--field-b3", "1/3*q3"];

#[test]
fn eval_a3_cadabra_on_momentum_square() {
    let mut args = vec!["eval", "--op", "A3_cadabra", "--arg", "p1^2+p2^2+p3^2"];
    args.extend(CONSTANT);
    let o = monostar(&args);
    assert!(o.status.success());
    let got = parse_expr::<Scalar>(stdout(&o).trim()).unwrap();
    assert_eq!(got, parse_expr("32/9*i*(p1*q1+p2*q2+p3*q3)").unwrap());
}

#[test]
fn eval_bracket_and_jacobiator() {
    let mut args = vec!["eval", "--op", "jacobiator", "--arg", "p1", "--arg", "p2", "--arg", "p3"];
    args.extend(CONSTANT);
    assert_eq!(stdout(&monostar(&args)).trim(), "-1");
    let o = monostar(&["eval", "--op", "bracket", "--arg", "q1", "--arg", "p1"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn verify_json_for_varying_density() {
    let o = monostar(&[
        "verify", "--field-b1", "1/2*q1^2", "--field-b2", "0", "--field-b3", "0",
        "--checks", "obstruction_nonconstant,flexible2", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"][0]["status"], "fail");
    assert_eq!(v["verdicts"][0]["expected"], "nonzero");
    assert!(v["verdicts"][0]["witness"].as_str().unwrap().contains("q1"));
    assert_eq!(v["verdicts"][1]["status"], "pass");
}

#[test]
fn full_run_exits_nonzero_on_unreproduced_claim() {
    let mut args = vec!["verify"];
    args.extend(CONSTANT);
    let o = monostar(&args);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("BAD a2_antisym_half_jacobiator")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("monostar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("report.json");
    std::fs::write(&cfg, "field.b1 = q1\nfield.b2 = -q2\nfield.b3 = 0\nb3_mode = pair:3\nchecks = pentagon\n").unwrap();
    let o = monostar(&["verify", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["field"]["div"], "0");
    assert_eq!(v["b3"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_exit_with_status_two() {
    let o = monostar(&["eval", "--op", "bracket", "--arg", "q1 + * p1", "--arg", "p1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 5"));
    let o = monostar(&["verify", "--field-b1", "1/2*q1^2", "--checks", "obstruction_constant"]);
    assert_eq!(o.status.code(), Some(2));
    let o = monostar(&["verify", "--field-b1", "p1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_checks_names_every_check() {
    let text = stdout(&monostar(&["list-checks"]));
    for id in ["unit", "pentagon", "obstruction_constant", "gauge", "op A3_closed_form/1"] {
        assert!(text.contains(id), "{id}");
    }
}
