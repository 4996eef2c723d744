//! Exit codes and output files of the `fsi` binary.

use std::process::Command;

fn fsi() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fsi"))
}

#[test]
fn help_exits_zero() {
    assert_eq!(fsi().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn bad_flags_exit_three() {
    assert_eq!(fsi().arg("run").output().unwrap().status.code(), Some(3));
    let out = fsi().args(["run", "--rate", "0", "--scheme", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = fsi().args(["run", "--rate", "0", "--tfinal", "0.0123"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "incommensurate final time");
}

#[test]
fn jagged_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = fsi()
        .args(["run", "--rate", "0", "--scheme", "jagged", "--nf", "2", "--ns", "3", "--checkpoint-stride", "1"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["profile_rate0.csv", "fluid_state.csv", "checkpoint.txt", "schedule_2_3.txt"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let profile = std::fs::read_to_string(dir.path().join("profile_rate0.csv")).unwrap();
    assert_eq!(profile.lines().next(), Some("x,dy"));
    assert_eq!(profile.lines().count(), 62);
}

#[test]
fn strict_unstable_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# tiny threshold flags every run as blown up\nscheme = ern\nblowup = 1e-30\n").unwrap();
    let out = fsi().args(["run", "--rate", "0", "--strict", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = fsi().args(["run", "--rate", "0", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "non-strict runs report but succeed");
}
