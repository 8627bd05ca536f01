mod common;

use std::process::{Command, Output};

use common::*;

fn mbsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbsim"))
        .args(args)
        .env_remove(mbsim_cli::run::OUTPUT_ROOT_VAR)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_succeeds_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "out");
    let o = mbsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(tmp.path().join("out/manifest.json").is_file());
    assert!(tmp.path().join("out/snapshots/snap_00000200.mbs").is_file());
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let typo = FREE_GAUSSIAN.replace("detuning = 5.0", "detunning = 5.0");
    let cfg = write_config(tmp.path(), "typo.toml", &typo, "out");
    let o = mbsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("did you mean `detuning`"),
        "{}",
        stderr(&o)
    );

    let zero = FREE_GAUSSIAN.replace("detuning = 5.0", "detuning = 0.0");
    let cfg = write_config(tmp.path(), "zero.toml", &zero, "out");
    let o = mbsim(&["check", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`detuning`"));

    let o = mbsim(&["run", tmp.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(mbsim(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_prints_regime_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", DENSE_CLOUD, "out");
    let o = mbsim(&["check", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["saturation_bound"], 0.375);
    assert!(report["min_abs_detuning"].as_f64().unwrap() >= 4.0);
    assert!(
        report["max_mossotti_denominator_proximity"]
            .as_f64()
            .unwrap()
            <= 1.0
    );
    // no evolution happened
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn sweep_writes_one_directory_per_value() {
    let tmp = tempfile::tempdir().unwrap();
    let body = FREE_GAUSSIAN.replace("n_steps = 200", "n_steps = 20");
    let cfg = write_config(tmp.path(), "s.toml", &body, "sweep");
    let o = mbsim(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--vary",
        "physics.detuning=1,-2,3.5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for v in ["1", "-2", "3.5"] {
        let m = manifest(&tmp.path().join(format!("sweep/detuning={v}")));
        assert_eq!(
            m["config"]["physics"]["detuning"],
            v.parse::<f64>().unwrap()
        );
    }
    let o = mbsim(&["sweep", cfg.to_str().unwrap(), "--vary", "detuning=0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_reports_worst_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "[grid]\nn_points = 256\nlength = 40.0\n[physics]\ndipole = 1.0\ndetuning = -1.0\n\
                [initial]\nwidth = 2.0\nnorm = 3.0\n[evolution]\ndt = 0.001\nn_steps = 5\n";
    let cfg = write_config(tmp.path(), "s.toml", body, "sweep");
    // the dense cloud crosses the resonance for Δ = -1 but not for Δ = 2
    let o = mbsim(&["sweep", cfg.to_str().unwrap(), "--vary", "detuning=2,-1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert_eq!(
        manifest(&tmp.path().join("sweep/detuning=2"))["status"],
        "ok"
    );
    assert_eq!(
        manifest(&tmp.path().join("sweep/detuning=-1"))["status"],
        "failed"
    );
}

#[test]
fn plotdata_rejects_unknown_quantity() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "out");
    assert_eq!(
        mbsim(&["run", cfg.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let glob = format!("{}/out/snapshots/*.mbs", tmp.path().display());
    let out = tmp.path().join("p.dat");
    let o = mbsim(&[
        "plotdata",
        &glob,
        "--quantity",
        "temperature",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("density, intensity, n2, V, delta_l, phase"));
    let o = mbsim(&[
        "plotdata",
        &glob,
        "--quantity",
        "V",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("# source").count(), 5);
}

#[test]
fn output_root_variable_relocates_relative_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("r.toml");
    std::fs::write(
        &cfg,
        format!("{FREE_GAUSSIAN}\n[output]\ndirectory = \"rel\"\n"),
    )
    .unwrap();
    let root = tmp.path().join("root");
    let o = Command::new(env!("CARGO_BIN_EXE_mbsim"))
        .args(["run", cfg.to_str().unwrap()])
        .env(mbsim_cli::run::OUTPUT_ROOT_VAR, &root)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(root.join("rel/manifest.json").is_file());
}
