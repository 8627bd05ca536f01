mod common;

use common::*;
use mbsim_cli::config::parse_config;
use mbsim_cli::plot::{columns, emit_plot_data, Quantity};
use mbsim_cli::run::run_in;
use mbsim_cli::{load_config, run, Snapshot};
use mbsim_core::{
    clausius_mossotti, density, local_detuning, make_grid, polarizability, ComplexField,
    PhysicalParams,
};

#[test]
fn free_gaussian_keeps_norm_and_full_transmission() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load_config(write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "out")).unwrap();
    let outcome = run(&cfg).unwrap();
    assert!(outcome.error.is_none());
    assert_eq!(outcome.steps_completed, 200);
    assert_eq!(outcome.snapshots.len(), 5);
    let rows = timeseries(&outcome.directory);
    assert_eq!(rows.len(), 5);
    let n0 = rows[0][1];
    assert!((n0 - 2.0).abs() < 1e-10);
    for r in &rows {
        assert!(
            ((r[1] - n0) / n0).abs() <= 1e-10,
            "norm drift {}",
            r[1] - n0
        );
        assert!((r[4] - 1.0).abs() <= 1e-12, "|t|^2 = {}", r[4]);
        assert!(r[5] <= 1e-24);
    }
    let m = manifest(&outcome.directory);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["units"]["system"], "recoil");
    assert_eq!(m["config"]["physics"]["detuning"], 5.0);
}

#[test]
fn empty_cloud_has_unit_index() {
    let tmp = tempfile::tempdir().unwrap();
    let body = DENSE_CLOUD.replace("norm = 3.0", "norm = 0.0");
    let cfg = load_config(write_config(tmp.path(), "a.toml", &body, "out")).unwrap();
    let outcome = run(&cfg).unwrap();
    assert!(outcome.error.is_none());
    for snap in snapshots(&outcome.directory) {
        for z in snap.complex("n_squared").unwrap() {
            assert_eq!(z.re, 1.0);
            assert_eq!(z.im, 0.0);
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = load_config(write_config(tmp.path(), "a.toml", DENSE_CLOUD, "a")).unwrap();
    run(&a).unwrap();
    let first = tree(&tmp.path().join("a"));
    std::fs::rename(tmp.path().join("a"), tmp.path().join("first")).unwrap();
    run(&a).unwrap();
    assert!(first.len() > 3);
    assert_eq!(tree(&tmp.path().join("a")), first);
    // rerunning into an existing directory leaves nothing stale behind
    run(&a).unwrap();
    assert_eq!(tree(&tmp.path().join("a")), first);
}

/// Every stored array is recomputed from `psi1` and the parameters.
#[test]
fn snapshots_are_self_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load_config(write_config(tmp.path(), "a.toml", DENSE_CLOUD, "out")).unwrap();
    let outcome = run(&cfg).unwrap();
    assert!(outcome.error.is_none());
    let params = PhysicalParams::recoil(0.3, 4.0, 0.0).unwrap();
    let grid = make_grid(256, 40.0).unwrap();
    let alpha = polarizability(&params).unwrap();
    for snap in snapshots(&outcome.directory) {
        let psi = ComplexField::new(grid.clone(), snap.complex("psi1").unwrap().to_vec()).unwrap();
        let rho = density(&psi);
        assert_eq!(rho.values(), snap.real("density").unwrap());
        let n2 = clausius_mossotti(alpha, &rho).unwrap();
        assert_eq!(n2.n_squared(), snap.complex("n_squared").unwrap());
        let dl = local_detuning(&rho, &params).unwrap();
        assert_eq!(dl.values.values(), snap.real("delta_l").unwrap());
        let norm = snap.real("norm").unwrap()[0];
        assert!((norm - 3.0).abs() < 1e-9);
    }
}

#[test]
fn plot_density_integrates_to_norm() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load_config(write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "out")).unwrap();
    let outcome = run(&cfg).unwrap();
    let pattern = format!("{}/snapshots/*.mbs", outcome.directory.display());
    let out = tmp.path().join("density.dat");
    emit_plot_data(&pattern, "density", &out).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let blocks: Vec<&str> = text.split("\n\n\n").collect();
    assert_eq!(blocks.len(), 5);
    for block in blocks {
        let rows: Vec<(f64, f64)> = block
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .map(|l| {
                let mut c = l.split('\t').map(|v| v.parse::<f64>().unwrap());
                (c.next().unwrap(), c.next().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 256);
        // trapezoid on the periodic grid, closing the last interval
        let h = rows[1].0 - rows[0].0;
        let integral: f64 = (0..rows.len())
            .map(|j| 0.5 * h * (rows[j].1 + rows[(j + 1) % rows.len()].1))
            .sum();
        assert!((integral - 2.0).abs() <= 1e-10, "{integral}");
    }
}

#[test]
fn plot_vacuum_index_and_plane_wave_phase() {
    let tmp = tempfile::tempdir().unwrap();
    let k = std::f64::consts::TAU * 3.0 / 40.0;
    let body = format!(
        "[grid]\nn_points = 128\nlength = 40.0\n[physics]\ndipole = 0.0\ndetuning = 1.0\n\
         [initial]\nkind = \"plane_wave\"\nk = {k}\namplitude = 0.2\n\
         [evolution]\ndt = 0.01\nn_steps = 1\n"
    );
    let cfg = load_config(write_config(tmp.path(), "p.toml", &body, "out")).unwrap();
    let outcome = run(&cfg).unwrap();
    let path = outcome.directory.join("snapshots/snap_00000000.mbs");
    let snap = Snapshot::read(&path).unwrap();

    let n2 = &columns(&snap, Quantity::NSquared, &path).unwrap()[0];
    assert!(n2.iter().all(|&v| v == 1.0));

    let phase = &columns(&snap, Quantity::Phase, &path).unwrap()[0];
    let x = snap.positions();
    for j in 1..x.len() {
        let slope = (phase[j] - phase[j - 1]) / (x[j] - x[j - 1]);
        assert!((slope - k).abs() < 1e-9, "slope {slope} at {j}");
    }

    let out = tmp.path().join("n2.dat");
    emit_plot_data(&path.display().to_string(), "n2", &out).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().starts_with('#'));
    for l in text.lines().filter(|l| !l.starts_with('#')) {
        assert_eq!(l.split('\t').nth(1).unwrap().parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn file_initial_state_continues_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load_config(write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "first")).unwrap();
    let first = run(&cfg).unwrap();
    let last = first.directory.join(first.snapshots.last().unwrap());
    let body = FREE_GAUSSIAN.replace(
        "[initial]\nkind = \"gaussian\"\nwidth = 1.5\nnorm = 2.0\n",
        &format!(
            "[initial]\nkind = \"file\"\npath = \"{}\"\n",
            last.display()
        ),
    );
    let cfg = load_config(write_config(tmp.path(), "b.toml", &body, "second")).unwrap();
    let second = run(&cfg).unwrap();
    assert!(second.error.is_none());
    let s0 = &snapshots(&second.directory)[0];
    let prev = Snapshot::read(&last).unwrap();
    assert_eq!(s0.real("density"), prev.real("density"));

    let mismatch = body.replace("n_points = 256", "n_points = 128");
    let cfg = load_config(write_config(tmp.path(), "c.toml", &mismatch, "third")).unwrap();
    assert!(run(&cfg).is_err());
}

#[test]
fn text_output_alongside_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = load_config(write_config(tmp.path(), "a.toml", FREE_GAUSSIAN, "out")).unwrap();
    cfg.output.formats = vec!["binary".into(), "text".into()];
    let outcome = run_in(&cfg, &tmp.path().join("t")).unwrap();
    let txt =
        std::fs::read_to_string(outcome.directory.join("snapshots/snap_00000000.txt")).unwrap();
    assert!(txt.contains("# x psi1_re psi1_im density"));
}

#[test]
fn lab_units_match_recoil_run() {
    // rubidium-87 at 780 nm
    let m = 1.443_160_6e-25;
    let k = std::f64::consts::TAU / 780e-9;
    let scales = mbsim_cli::units::UnitScales::lab(m, k);
    let recoil = load_config(write_config(
        tempfile::tempdir().unwrap().path(),
        "r.toml",
        DENSE_CLOUD,
        "r",
    ))
    .unwrap();
    let lab_text = format!(
        "[grid]\nn_points = 256\nlength = {}\n\
         [physics]\nunits = \"lab\"\nmass = {m}\nk_laser = {k}\ndipole = {}\ndetuning = {}\n\
         [initial]\nwidth = {}\nnorm = 3.0\n\
         [illumination]\nleft = {}\n\
         [evolution]\ndt = {}\nn_steps = 40\nsnapshot_stride = 10\n",
        40.0 * scales.length,
        0.3 * scales.dipole,
        4.0 / scales.time,
        2.0 * scales.length,
        0.5 * scales.field,
        0.01 * scales.time,
    );
    let lab = parse_config(&lab_text, std::path::Path::new("lab.toml")).unwrap();
    let (pr, pl) = (
        recoil.recoil_params().unwrap(),
        lab.recoil_params().unwrap(),
    );
    assert!((pr.dipole - pl.dipole).abs() < 1e-12);
    assert!((pr.detuning - pl.detuning).abs() < 1e-12);
    let (a, b) = (
        mbsim_cli::setup::prepare(&recoil).unwrap(),
        mbsim_cli::setup::prepare(&lab).unwrap(),
    );
    assert!((a.dt - b.dt).abs() < 1e-15);
    assert!((a.grid.length() - b.grid.length()).abs() < 1e-12);
    for (x, y) in a.psi0.values().iter().zip(b.psi0.values()) {
        assert!((x - y).norm() < 1e-12);
    }
}
