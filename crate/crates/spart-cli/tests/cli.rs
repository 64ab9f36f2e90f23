use std::process::{Command, Output};

fn spart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spart")).args(args).env("SPART_COLOR", "never").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_fock() {
    let o = spart(&["enumerate", "--parity", "+++--", "--family", "fock:+:0", "--max-boxes", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = spart(&["enumerate", "--family", "fock:+:0", "--max-boxes", "3", "--counts"]);
    assert_eq!(stdout(&o), "1,1,2,4\n");
    let o = spart(&["enumerate", "--max-boxes", "0"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn enumerate_forbidden() {
    let o = spart(&["enumerate", "--family", "macmahon:0", "--forbid", "0,0,1", "--max-boxes", "4", "--counts"]);
    assert_eq!(stdout(&o), "1,1,2,4,6\n");
}

#[test]
fn char_commands() {
    let o = spart(&["char", "--family", "macmahon:0", "--formula", "product", "--trunc", "10", "--principal"]);
    assert_eq!(stdout(&o), "1,1,2,5,8,16,29,50,88,150,254\n");
    let o = spart(&["char", "--formula", "fermionic", "--compare", "direct", "--trunc", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("EQUAL"));
    let o = spart(&["char", "--trunc", "0"]);
    assert_eq!(stdout(&o), "1\n");
    let o = spart(&["char", "--family", "macmahon:0", "--formula", "product", "--compare", "direct,tableaux", "--trunc", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = spart(&["char", "--family", "fock:+:0", "--formula", "fermionic", "--compare", "direct", "--trunc", "4", "--format", "csv"]);
    assert!(o.status.success());
}

#[test]
fn compare_with_inapplicable_formula() {
    let o = spart(&["char", "--family", "restricted:0:1:1", "--formula", "restricted", "--compare", "direct", "--trunc", "5"]);
    assert!(o.status.success());
    let o = spart(&["char", "--family", "macmahon:0", "--formula", "product", "--compare", "fermionic"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_commands() {
    let o = spart(&["verify", "--suite", "ke,kf", "--family", "fock:+:0", "--max-boxes", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all passed"));
    let o = spart(&["verify", "--suite", "ef", "--family", "macmahon:0", "--max-boxes", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let o = spart(&["verify", "--suite", "tame", "--max-boxes", "0"]);
    assert!(o.status.success());
}

#[test]
fn usage_errors() {
    assert_eq!(spart(&["enumerate", "--family", "bogus"]).status.code(), Some(2));
    assert_eq!(spart(&["enumerate", "--parity", "+-"]).status.code(), Some(2));
    assert_eq!(spart(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "--family", "macmahon:1", "--max-boxes", "4"];
    let a = Command::new(env!("CARGO_BIN_EXE_spart")).args(["--jobs", "1"]).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_spart")).args(["--jobs", "4"]).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let args = ["char", "--family", "fock:-:2", "--formula", "fermionic", "--trunc", "6", "--format", "csv"];
    let a = Command::new(env!("CARGO_BIN_EXE_spart")).args(["--jobs", "1"]).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_spart")).args(["--jobs", "3"]).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn render() {
    let o = spart(&["render", "--lambda", "3,1", "--mu", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("fock:+:0"));
    let o = spart(&["render", "--lambda", "3,1", "--format", "svg"]);
    assert!(stdout(&o).starts_with("<svg"));
    let o = spart(&["render", "--family", "macmahon:0", "--layers", "2/1;1/"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = spart(&["render", "--always-bad"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn color_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_spart")).args(["render", "--lambda", "2"]).env("SPART_COLOR", "always").output().unwrap();
    assert!(String::from_utf8(o.stdout).unwrap().contains("\x1b["));
}
