use std::process::Command;

fn pcf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).env_remove("PCF_PRECISION").output().unwrap()
}

#[test]
fn negative_values_are_accepted_as_arguments() {
    let out = pcf(&["search", "--b", "-n^2", "--box", "-3..3,-3..3", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.lines().any(|l| l.starts_with("-n^2,2n+1,")), "{body}");
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(pcf(&["eval", "--a", "n+", "--b", "1"]).status.code(), Some(2));
    assert_eq!(pcf(&["eval"]).status.code(), Some(2));
    assert_eq!(pcf(&["report", "--reproduce", "table9"]).status.code(), Some(2));
    assert_eq!(pcf(&["eval", "--a", "1", "--b", "1", "--ref", "x"]).status.code(), Some(2));
    assert_eq!(pcf(&["reduce", "--a", "n", "--b", "2n^2+n", "--gcd", "n?"]).status.code(), Some(2));
}

#[test]
fn saved_config_reproduces_the_run() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let cfg = dir.join("cli_binary_config.json");
    let cfg = cfg.to_str().unwrap();
    let first = pcf(&["eval", "--a", "[1,2]", "--b", "[0,0,1]", "--ref", "4/pi", "--save-config", cfg]);
    assert!(first.status.success());
    let second = pcf(&["eval", "--config", cfg]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pcf"))
        .args(["eval", "--a", "[1]", "--b", "[1]"])
        .env("PCF_PRECISION", "512")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 512);
}
