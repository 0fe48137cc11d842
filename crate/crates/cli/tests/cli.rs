use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cliffwave_cli::{CheckStatus, RunReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cliffwave"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn minimal_scenario_exits_zero_with_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let out = run(&[
        "run",
        scenario("minimal.toml").to_str().unwrap(),
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = RunReport::load(&json).unwrap();
    assert_eq!(report.checks.len(), 1);
    let check = &report.checks[0];
    assert_eq!(check.status, CheckStatus::Pass);
    assert!((check.observed.unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn forced_failure_exits_one_and_names_the_check() {
    let out = run(&["run", scenario("forced_failure.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(
        err.contains("FAILED cwt_roundtrip.isometry[random_band_pass[1]]"),
        "{err}"
    );
    assert!(err.contains("threshold=0"), "{err}");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_schema = dir.path().join("bad.toml");
    std::fs::write(
        &bad_schema,
        "schema = \"other/1\"\ndim = 2\n[grid]\npoints = 32\nhalf_width = 8.0\n",
    )
    .unwrap();
    let unknown_key = dir.path().join("unknown.toml");
    std::fs::write(
        &unknown_key,
        "schema = \"cliffwave-scenario/1\"\ndim = 2\ncolour = 1\n[grid]\npoints = 32\nhalf_width = 8.0\n",
    )
    .unwrap();
    let odd_grid = dir.path().join("odd.toml");
    std::fs::write(
        &odd_grid,
        "schema = \"cliffwave-scenario/1\"\ndim = 2\n[grid]\npoints = 33\nhalf_width = 8.0\n",
    )
    .unwrap();
    for path in [&bad_schema, &unknown_key, &odd_grid, &dir.path().join("missing.toml")] {
        let out = run(&["run", path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{}: {}", path.display(), stderr(&out));
        assert!(stderr(&out).starts_with("error:"));
    }
    assert_eq!(code(&run(&["verify-algebra", "--bogus"])), 2);
    assert_eq!(code(&run(&["uncertainty", "--theorem", "fermat"])), 2);
    assert_eq!(code(&run(&["cwt-roundtrip", "--scales", "1:2"])), 2);
    assert_eq!(code(&run(&["cwt-roundtrip", "--scales", "2:1:4", "--grid-n", "16"])), 2);
    assert_eq!(code(&run(&["admissibility", "--wavelet", "morlet"])), 2);
    assert_eq!(code(&run(&["uncertainty", "--constant-mode", "exact"])), 2);
}

#[test]
fn stage_subcommands() {
    let out = run(&["verify-algebra", "--grid-n", "16"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass algebra.blade_product_oracle"));

    let out = run(&["verify-fourier", "--grid-n", "32"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = run(&[
        "admissibility",
        "--dim",
        "2",
        "--wavelet",
        "mexican_hat",
        "--grid-n",
        "64",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["scalar_ok = 1", "a_psi = ", "c_psi = "] {
        assert!(text.contains(key), "missing {key}: {text}");
    }

    let out = run(&["admissibility", "--wavelet", "gaussian", "--grid-n", "32"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("admissibility.a_psi"));

    let out = run(&[
        "uncertainty",
        "--theorem",
        "heisenberg_fourier",
        "--dim",
        "2",
        "--grid-n",
        "64",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass uncertainty.heisenberg_fourier[gaussian,k=1] observed=1.000000e0"));
}

#[test]
fn report_only_checks_never_fail_the_run() {
    let out = run(&[
        "uncertainty",
        "--grid-n",
        "32",
        "--scales",
        "0.5:2:3",
        "--spins",
        "2",
        "--theorem",
        "sharp_bound",
        "--theorem",
        "base_inequality_probe",
        "--theorem",
        "proof_identities_check",
        "--constant-mode",
        "admissibility",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("report_only uncertainty.proof_identities_check[gaussian,k=1]"));
    assert!(!text.contains("\nfail "));
}

#[test]
fn reports_are_deterministic_and_convert_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut payloads = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("run{i}.json"));
        let out = run(&[
            "uncertainty",
            "--grid-n",
            "32",
            "--scales",
            "0.25:4:6",
            "--spins",
            "3",
            "--seed",
            "5",
            "--out",
            json.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 1, "banouh and identity checks fail at this resolution");
        payloads.push(RunReport::load(&json).unwrap().payload_json());
    }
    assert_eq!(payloads[0], payloads[1]);

    let json = dir.path().join("run0.json");
    let out = run(&["report", "--in", json.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let report = RunReport::load(&json).unwrap();
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), report.checks.len());
    assert_eq!(reader.headers().unwrap().get(2), Some("status"));
    // six evaluators on three suite fields
    assert_eq!(rows.len(), 18);

    let out = run(&["report", "--in", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn default_scenario_printout_parses() {
    let out = run(&["scenario", "--dim", "3"]);
    assert_eq!(code(&out), 0);
    let s = cliffwave_cli::Scenario::from_toml(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(s.dim, 3);
}
