//! End-to-end checks of the binary: exit codes, error reporting, artifacts,
//! and a parser fuzz property.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

use phase_ensemble_cli::config::parse_config;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_phase-ensemble"));
    cmd.env("NO_COLOR", "1");
    cmd
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn kappa_runs_without_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(&["kappa", "--out", dir.path().to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("kappa = 0.5894899"), "{stdout}");
    assert!(dir.path().join("summary.csv").exists());
    assert!(dir.path().join("manifest.txt").exists());
}

#[test]
fn config_errors_exit_one_and_name_lines() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("broken.conf");
    fs::write(&config, "experiment = born-check\nbanana = 7\nn_shots = soon\n").unwrap();
    let out = bin()
        .args(["born-check", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
    assert!(stderr.contains("unknown key"), "{stderr}");
    assert!(stderr.contains("line 3"), "{stderr}");
    // Missing required keys are all reported too.
    assert!(stderr.contains("\"system\""), "{stderr}");
    assert!(stderr.contains("\"state\""), "{stderr}");
}

#[test]
fn subcommand_and_config_experiment_must_agree() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("kappa.conf");
    fs::write(&config, "experiment = kappa\n").unwrap();
    let out = bin()
        .args(["born-check", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("subcommand"));
}

#[test]
fn flags_override_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("born.conf");
    fs::write(
        &config,
        "experiment = born-check\nsystem = twolevel\nstate = born08\nobservable = pm1\nt_e = 1.0\nn_shots = 500\nseed = 1\n",
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    run_ok(&[
        "born-check",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--shots",
        "800",
        "--seed",
        "123",
    ]);
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().contains(",800,"), "{summary}");
    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert!(manifest.contains("seed = 123"));
    assert!(manifest.contains("n_shots = 800"));
}

#[test]
fn no_temp_files_left_behind() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["kappa", "--out", dir.path().to_str().unwrap()]);
    assert_no_tmp(dir.path());
}

fn assert_no_tmp(dir: &Path) {
    for entry in fs::read_dir(dir).unwrap().flatten() {
        let name = entry.file_name();
        assert!(
            !name.to_string_lossy().ends_with(".tmp"),
            "temp file left behind: {name:?}"
        );
    }
}

#[test]
fn te_scan_writes_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scan.conf");
    fs::write(
        &config,
        "experiment = te-scan\nsystem = twolevel\nstate = born08\nobservable = pm1\nt_e_list = 0.0,0.01,0.1,1.0\nn_shots = 2000\nseed = 5\n",
    )
    .unwrap();
    let out_dir = dir.path().join("scan-out");
    run_ok(&[
        "te-scan",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let table = fs::read_to_string(out_dir.join("te_scan.csv")).unwrap();
    assert_eq!(table.lines().count(), 5); // header + 4 points
    let first_point = table.lines().nth(1).unwrap();
    assert!(first_point.starts_with("0,0,0,"), "variance at 0 must be 0: {first_point}");
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
}

#[test]
fn weyl_test_writes_per_mode_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("weyl.conf");
    // The 0.02 KS threshold is calibrated for 1e4 draws.
    fs::write(
        &config,
        "experiment = weyl-test\nsystem = incommensurate3\nn_shots = 10000\nseed = 9\nwindow = 1e5\nt_e = 0.0\n",
    )
    .unwrap();
    let out_dir = dir.path().join("weyl-out");
    run_ok(&[
        "weyl-test",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let table = fs::read_to_string(out_dir.join("weyl.csv")).unwrap();
    assert_eq!(table.lines().count(), 4); // header + 3 modes
    assert!(table.starts_with("mode,energy,period,ks,pass\n"));
}

#[test]
fn free_particle_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("fp.conf");
    fs::write(
        &config,
        "experiment = free-particle\nlattice = 32,8.0,1.0\nstate = packet:4.0,0.8,0.0\nobservable = position\nt_e = 1.0\nn_shots = 20000\nseed = 3\nenergy_offset = 1.0\n",
    )
    .unwrap();
    let out_dir = dir.path().join("fp-out");
    let out = run_ok(&[
        "free-particle",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("truncation"), "{stdout}");
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().starts_with("free-particle,32,"));
    assert!(out_dir.join("shots.jsonl").exists());
}

#[test]
fn spectral_state_and_matrix_files_are_usable() {
    use num_complex::Complex64;
    use phase_ensemble::spectral::{state_to_text, StateVector};

    let dir = tempfile::tempdir().unwrap();
    let state = StateVector::normalized(
        vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)],
        "custom",
    )
    .unwrap();
    let state_path = dir.path().join("state.txt");
    fs::write(&state_path, state_to_text(&state)).unwrap();
    let matrix_path = dir.path().join("obs.txt");
    fs::write(&matrix_path, "M 0 0 0.5 0\nM 0 1 0 -1\nM 1 0 0 1\nM 1 1 -0.5 0\n").unwrap();

    let config = dir.path().join("file.conf");
    fs::write(
        &config,
        format!(
            "experiment = born-check\nsystem = twolevel\nstate = file:{}\nobservable = matrix:{}\nt_e = 1.0\nn_shots = 4000\nseed = 11\n",
            state_path.display(),
            matrix_path.display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("file-out");
    run_ok(&[
        "born-check",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
}

proptest! {
    /// Parser fuzz: arbitrary text never panics, and every rejection names a
    /// line number in its message list.
    #[test]
    fn parser_never_panics(text in ".{0,400}") {
        let _ = parse_config(&text);
    }

    #[test]
    fn mutated_valid_configs_fail_gracefully(
        key_idx in 0usize..16,
        junk in "[a-z0-9 ]{0,20}",
    ) {
        let base = "experiment = born-check\nsystem = twolevel\nstate = born08\nobservable = pm1\nt_e = 1.0\nn_shots = 100\nseed = 1\n";
        let mutated = format!("{base}{} = {junk}\n", phase_ensemble_cli::config::KNOWN_KEYS[key_idx]);
        match parse_config(&mutated) {
            Ok(_) => {}
            Err(errors) => {
                prop_assert!(!errors.0.is_empty());
            }
        }
    }
}
