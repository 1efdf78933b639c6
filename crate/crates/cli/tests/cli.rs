use std::fs;
use std::process::{Command, Output};

fn cool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cool")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn occupation_reports_both_paths() {
    let o = cool(&["occupation", "--set", "mu_tilde=0.02", "--path", "both"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# overrides = mu_tilde=0.02"));
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let n1: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((n1 - 0.54719).abs() < 1e-4);
    }
}

#[test]
fn occupation_json_with_bare_masses() {
    let o = cool(&["occupation", "--set", "mu_tilde=0.05", "--bare-mass", "1", "1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["reports"][0];
    assert!(r["n_f_bare"][0].as_f64().unwrap() > r["n_f"][0].as_f64().unwrap());
}

#[test]
fn spectrum_grid() {
    let o = cool(&["spectrum", "--from", "-1.5", "--to", "1.5", "--points", "7", "--path", "both"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("omega,s_q_1_analytic"));
    assert!(lines[0].ends_with("gamma_eff_2_oracle"));
}

#[test]
fn sweep_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.csv");
    fs::write(
        &cfg,
        r#"
[system]
mu_tilde = 0.02
[feedback]
gain = [1.0, 0.6]
[sweep]
tol = 1e-6
overrides = ["kappa=4"]
[[sweep.axis]]
param = "G2_over_G1"
start = 0.5
stop = 1.0
points = 3
"#,
    )
    .unwrap();
    let o = cool(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# main.axis1 = G2_over_G1 linear [0.5, 1] x 3"));
    assert_eq!(data_lines(&text).len(), 4);
}

#[test]
fn sweep_axis_flag_and_scenario_fallback() {
    let o = cool(&["sweep", "--axis", "omega:0.5:1.5:5", "--measure", "rates", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig.toml");
    fs::write(&cfg, "[sweep]\nscenario = \"fig1c\"\n").unwrap();
    let o = cool(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# scenario = fig1c"));
}

#[test]
fn figure_output_is_reproducible() {
    let a = cool(&["figure", "fig1c"]);
    let b = cool(&["figure", "fig1c", "--threads", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_passes() {
    let o = cool(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(cool(&["figure", "fig9"]).status.code(), Some(1));
    assert_eq!(cool(&["occupation", "--set", "vartheta=3"]).status.code(), Some(1));
    assert_eq!(cool(&["occupation", "--set", "nonsense=3"]).status.code(), Some(1));
    assert_eq!(cool(&["occupation", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(cool(&["bogus"]).status.code(), Some(1));
    let o = cool(&["sweep", "--axis", "mu_tilde:0:0.05"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("name:start:stop:points"));
}

#[test]
fn help_exits_cleanly() {
    let o = cool(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("figure"));
}
