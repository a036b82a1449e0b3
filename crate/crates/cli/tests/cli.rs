use std::process::{Command, Output};

fn cpulse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpulse"))
        .args(args)
        .env_remove("CPULSE_DIGITS")
        .output()
        .expect("run cpulse")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = cpulse(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no `{key}` in {text}")).trim()
}

#[test]
fn plan_reproduces_perfect_chain() {
    let out = ok(&["plan", "--regime", "perfect", "--start", "inf,inf,1", "--depth", "6"]);
    assert_eq!(field(&out, "schedule:"), "X,Y,Z,X,Y,Z");
    assert_eq!(field(&out, "final:"), "(94;78;49)");
    assert_eq!(field(&out, "pulses:"), "729 target + 1456 correction");
}

#[test]
fn plan_goal_and_regimes() {
    let out = ok(&["plan", "--regime", "covariant", "--deltas", "inf,inf,inf", "--start", "1,1,1", "--goal", "5"]);
    assert!(field(&out, "final:").starts_with('('));
    let out = ok(&["plan", "--regime", "axisdep", "--start", "1,1,1", "--depth", "2"]);
    assert_eq!(field(&out, "schedule:").split(',').count(), 2);
}

#[test]
fn build_then_simulate_without_error_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pi3y.seq");
    let p = path.to_str().unwrap();
    ok(&["build", "pi3:Y", "--target", "x-pi", "--out", p]);
    let out = ok(&["simulate", "--seq", p, "--model", "none"]);
    assert_eq!(field(&out, "infidelity:").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn built_file_simulates_like_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq");
    let p = path.to_str().unwrap();
    for name in ["pi3Y∘b2sym", "pi5", "concat:X,Y"] {
        ok(&["build", name, "--target", "0.6,0.8,0:1/3", "--out", p]);
        let args = |seq: &str| {
            ok(&["simulate", "--seq", seq, "--target", "0.6,0.8,0:1/3", "--model", "model=vector dx=0.01 dy=0.02 dz=-0.01", "--eps", "0.5"])
        };
        assert_eq!(args(p), args(name), "{name}");
    }
}

#[test]
fn fit_b2_is_sixth_order() {
    let out = ok(&["fit", "--seq", "b2", "--model", "linear"]);
    let slope: f64 = out.split_whitespace().find_map(|t| t.strip_prefix("slope=")).unwrap().parse().unwrap();
    assert!((slope - 6.0).abs() < 0.05, "{out}");
}

#[test]
fn scan_emits_csv() {
    let out = ok(&["scan", "--seq", "pi3:Y", "--grid", "1e-3:1e-1:2"]);
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "epsilon,cx,cy,cz,infidelity");
    assert_eq!(lines.len(), 1 + 5);
    let out = ok(&["scan", "--seq", "naive", "--eps", "0.1,0.01"]);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn table1_needs_precision() {
    let o = cpulse(&["table1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--digits"));
}

#[test]
fn table1_agrees_between_precisions() {
    let parse = |text: String| -> Vec<Vec<String>> {
        text.lines().skip(1).map(|l| l.split_whitespace().skip(1).map(str::to_string).collect()).collect()
    };
    let lo = parse(ok(&["--digits", "16", "table1", "--force"]));
    let hi = parse(ok(&["--digits", "60", "table1"]));
    assert_eq!(hi[0][0], "1.1e-1");
    assert_eq!(hi[5][5], "5.5e-35");
    for (rl, rh) in lo.iter().zip(&hi) {
        for (l, h) in rl.iter().zip(rh) {
            if h.parse::<f64>().unwrap() >= 1e-12 {
                assert_eq!(l, h);
            }
        }
    }
}

#[test]
fn digits_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cpulse")).arg("table1").env("CPULSE_DIGITS", "50").output().unwrap();
    assert!(o.status.success());
}

#[test]
fn expand_needs_extended_precision() {
    let o = cpulse(&["expand", "--seq", "naive", "--index", "ex"]);
    assert_eq!(o.status.code(), Some(3));
    let out = ok(&["--digits", "60", "expand", "--seq", "naive", "--index", "ex", "--component", "x"]);
    // bare π pulse about x with error exp(iεX): x component is 2 sin ε
    assert!((out.trim().parse::<f64>().unwrap() - 2.0).abs() < 1e-10, "{out}");
}

#[test]
fn exit_codes_for_bad_input() {
    for args in [
        vec!["simulate", "--model", "model=linear eps=0.01 bogus=1"],
        vec!["simulate", "--seq", "nosuch"],
        vec!["simulate", "--target", "w-pi"],
        vec!["scan", "--grid", "1:2"],
        vec!["plan", "--start", "1,1"],
        vec!["plan", "--start", "1,1,1"],
        vec!["--digits", "8", "plan", "--start", "1,1,1", "--depth", "1"],
        vec!["frobnicate"],
    ] {
        let o = cpulse(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    // deeper than the planner allows
    let o = cpulse(&["plan", "--start", "1,1,1", "--depth", "50"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn errors_name_the_flag_or_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.seq");
    std::fs::write(&path, "target 1 0 0 1/2\npulse 1 0 0 1/2 target\n").unwrap();
    let o = cpulse(&["simulate", "--seq", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--seq") && err.contains("line 2"), "{err}");
    let o = cpulse(&["simulate", "--pi3-model", "model=axisdep delta=0.01 deltahat=1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--pi3-model"));
}
