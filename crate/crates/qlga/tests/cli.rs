//! End-to-end checks of the command-line surface: subcommands, exit codes,
//! and byte-identical rerun outputs.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qlga(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlga"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn qlga")
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn complexity_reference_row_and_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qlga(
        &["complexity", "--variant", "basic", "--l-list", "2,4,8", "--out", "cx"],
        tmp.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("9236"), "{stdout}");
    let csv = fs::read_to_string(tmp.path().join("cx/complexity_basic.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("8,2048,5,12,9236")));
}

#[test]
fn converge_writes_deterministic_csv_across_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.cfg",
        "variant = basic\nl_sweep = 8,16,32\nmass = 1.0\nend_time = 0.25\n",
    );
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2", "8"].iter().enumerate() {
        let dir = format!("out{i}");
        let out = qlga(
            &["converge", "--config", &cfg, "--out", &dir, "--threads", threads],
            tmp.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(tmp.path().join(dir).join("convergence_basic.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn converge_slope_bound_failure_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    // The basic rule's slope is around 2; demanding at least 5 must fail
    // with the acceptance exit code.
    let cfg = write_cfg(
        tmp.path(),
        "run.cfg",
        "variant = basic\nl_sweep = 8,16,32\nslope_min = 5.0\n",
    );
    let out = qlga(&["converge", "--config", &cfg, "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bad_config_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(tmp.path(), "run.cfg", "variant = basic\nnot_a_key = 1\n");
    let out = qlga(&["converge", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
    // Unknown flags are usage errors too.
    let out = qlga(&["converge", "--bogus"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equiv_passes_and_corrupted_sign_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qlga(&["equiv"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let cfg = write_cfg(tmp.path(), "bad.cfg", "[equiv]\ncorrupt_gate_sign = true\n");
    let out = qlga(&["equiv", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn evolve_writes_norms_and_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        tmp.path(),
        "run.cfg",
        "variant = interleaved\nl = 32\nmass = 1.0\nend_time = 0.02\n\
         [output]\nobserver_cadence = 8\n",
    );
    let out = qlga(&["evolve", "--config", &cfg, "--out", "evo"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let norms = fs::read_to_string(tmp.path().join("evo/norms.csv")).unwrap();
    assert!(norms.starts_with("step,norm,relative_drift\n"));
    assert!(norms.lines().count() > 2);
    let snapshots: Vec<_> = fs::read_dir(tmp.path().join("evo"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "qlga"))
        .collect();
    assert!(!snapshots.is_empty());
    // Snapshots read back through the library.
    let mut file = fs::File::open(snapshots[0].path()).unwrap();
    let field = qlga::snapshot::read_snapshot(&mut file).unwrap();
    assert_eq!(field.dims(), [1, 1, 32]);
}
