use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_optoqfi"));
    cmd.args(args).env_remove("OPTOQFI_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, row: &str, col: usize) -> f64 {
    let line = text.lines().find(|l| l.starts_with(&format!("{row},"))).unwrap();
    line.split(',').nth(col).unwrap().parse().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const SWEEP: &str = r#"
[couplings]
theta = "d1"
g = { form = "constant", g0 = 1.0 }
d1 = { form = "cos", amp = 1.0, omega = 1.0 }

[probe]
mu = 1.0

[sweep]
scenario = "d1"
axis = "time"
start = 0.0
stop = 6.0
count = 4
"#;

#[test]
fn table1_passes() {
    let o = run(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert_eq!(t.lines().count(), 5);
    assert!((field(&t, "qfi_g0_res", 1) / 3.02e25 - 1.0).abs() < 0.01);
}

#[test]
fn table1_sensitivities() {
    let o = run(&["table1", "--sensitivity"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert!((field(&t, "qfi_g0_res", 4) / 1.82e-13 - 1.0).abs() < 0.02);
    assert!((field(&t, "qfi_d1_res", 4) / 7.96e-7 - 1.0).abs() < 0.02);
    assert!((field(&t, "qfi_dw_res", 4) / 2.50e-12 - 1.0).abs() < 0.02);
}

#[test]
fn table1_without_photons() {
    let o = run(&["table1", "--mu-sq", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "qfi_g0_res", 1), 0.0);
}

#[test]
fn oracle_check_default_suite() {
    let o = run(&["oracle-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = stdout(&o);
    assert_eq!(t.lines().next(), Some("name,analytic,oracle,rel_err"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn oracle_check_control_and_failures() {
    let o = run(&["oracle-check", "--preset", "control"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "control-inert", 1), 0.0);

    let o = run(&["oracle-check", "--dt", "1.0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no convergence"));

    assert_eq!(run(&["oracle-check", "--preset", "huge"]).status.code(), Some(2));
}

#[test]
fn sweep_to_stdout_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let o = run(&["sweep", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert_eq!(stdout(&run(&["sweep", &cfg])), text);
    assert_eq!(stdout(&run_env(&["sweep", &cfg], &[("OPTOQFI_THREADS", "1")])), text);

    let out = dir.path().join("out.csv");
    let body = format!("{SWEEP}output = \"{}\"\n", out.display());
    let cfg = write_config(dir.path(), &body);
    assert_eq!(run(&["sweep", &cfg]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn invalid_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SWEEP.replace("count = 4", "count = 1"));
    assert_eq!(run(&["sweep", &cfg]).status.code(), Some(2));
    let cfg = write_config(dir.path(), "not toml [");
    assert_eq!(run(&["sweep", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "/nonexistent/run.toml"]).status.code(), Some(2));
    let cfg = write_config(dir.path(), SWEEP);
    let o = run_env(&["sweep", &cfg], &[("OPTOQFI_THREADS", "zero")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mechanics_dump() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SWEEP);
    let o = run(&["mechanics", "dump", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    let mut lines = t.lines();
    assert!(lines.next().unwrap().starts_with("tau,xi_re,xi_im,alpha_re"));
    // without squeezing ξ = e^{−iτ}
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[0].cos()).abs() < 1e-8 && (v[2] + v[0].sin()).abs() < 1e-8);
    }
}
