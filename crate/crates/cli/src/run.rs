//! Run orchestration and on-disk artifacts.
//!
//! A run directory holds:
//!
//! * `manifest.json`: config echo, unit scales, internal parameters,
//!   status and the list of written files
//! * `timeseries.tsv`: one row per snapshot
//! * `snapshots/snap_<step>.mbs` (and `.txt` when text output is on)
//! * `checkpoint.mbs` if the run aborted
//!
//! Nothing time- or host-dependent is recorded, so identical configs
//! produce identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mbsim_core::{density, norm_squared, CoupledState, Illumination, MatterState, RealField};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::setup::{prepare, Prepared};
use crate::snapshot::{Array, Snapshot};

/// Environment variable that relocates relative output directories.
pub const OUTPUT_ROOT_VAR: &str = "MBSIM_OUTPUT_ROOT";

pub const TIMESERIES_HEADER: &str = "time\tnorm\tresidual\tmin_abs_delta_l\tt2\tr2";

#[derive(Debug)]
pub struct RunOutcome {
    pub directory: PathBuf,
    pub steps_completed: u64,
    pub snapshots: Vec<String>,
    pub checkpoint: Option<String>,
    pub error: Option<CliError>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }
}

/// Where a config's outputs go: absolute directories are kept, relative
/// ones are placed under `$MBSIM_OUTPUT_ROOT` when it is set.
pub fn output_directory(config: &RunConfig) -> PathBuf {
    let dir = &config.output.directory;
    match std::env::var_os(OUTPUT_ROOT_VAR) {
        Some(root) if dir.is_relative() => PathBuf::from(root).join(dir),
        _ => dir.clone(),
    }
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn timeseries_row(state: &CoupledState) -> String {
    let o = &state.optics;
    format!(
        "{:.17e}\t{:.17e}\t{:.17e}\t{:.17e}\t{:.17e}\t{:.17e}\n",
        state.matter.time,
        norm_squared(&state.matter.psi1),
        state.residual,
        state.local_detuning.min_abs,
        o.transmission.norm_sqr(),
        o.reflection.norm_sqr(),
    )
}

struct Writer<'a> {
    dir: &'a Path,
    text: bool,
    snapshots: Vec<String>,
    timeseries: String,
}

impl Writer<'_> {
    fn record(&mut self, step: u64, state: &CoupledState, prep: &Prepared) -> Result<()> {
        let snap = Snapshot::from_state(state, &prep.params, prep.saturation)?;
        let name = format!("snap_{step:08}");
        let rel = format!("snapshots/{name}.mbs");
        snap.write(&self.dir.join(&rel))?;
        if self.text {
            write_file(
                &self.dir.join(format!("snapshots/{name}.txt")),
                snap.to_text(),
            )?;
        }
        self.snapshots.push(rel);
        self.timeseries.push_str(&timeseries_row(state));
        Ok(())
    }
}

/// Checkpoint when no coupled state exists yet: the matter field alone.
fn matter_checkpoint(matter: &MatterState) -> Snapshot {
    let psi = &matter.psi1;
    let g = psi.grid();
    let rho: RealField = density(psi);
    Snapshot {
        n_points: g.n_points(),
        length: g.length(),
        x0: g.origin(),
        time: matter.time,
        arrays: vec![
            ("psi1".into(), Array::Complex(psi.values().to_vec())),
            ("density".into(), Array::Real(rho.into_values())),
            ("norm".into(), Array::Real(vec![norm_squared(psi)])),
        ],
    }
}

/// Runs a validated config, writing artifacts into `dir`.
///
/// Configuration problems that make the run impossible are returned as
/// `Err` before anything is written. Failures during the physics are
/// reported through [`RunOutcome::error`] after the manifest and a
/// checkpoint have been written.
pub fn run_in(config: &RunConfig, dir: &Path) -> Result<RunOutcome> {
    let prep = prepare(config)?;
    let coupler = prep.coupler()?;
    // stale files from an earlier run would mix into this one
    let snapdir = dir.join("snapshots");
    if snapdir.is_dir() {
        std::fs::remove_dir_all(&snapdir).map_err(|e| CliError::io(&snapdir, e))?;
    }
    let stale = dir.join("checkpoint.mbs");
    if stale.exists() {
        std::fs::remove_file(&stale).map_err(|e| CliError::io(&stale, e))?;
    }
    create_dir(&snapdir)?;

    let mut w = Writer {
        dir,
        text: config.output.text(),
        snapshots: Vec::new(),
        timeseries: format!("{TIMESERIES_HEADER}\n"),
    };
    let mut steps_completed = 0;
    let mut checkpoint = None;
    let initial = MatterState::new(prep.psi0.clone());

    let error = match coupler.initial_state(initial.clone()) {
        Err(e) => {
            matter_checkpoint(&initial).write(&dir.join("checkpoint.mbs"))?;
            checkpoint = Some("checkpoint.mbs".to_string());
            Some(CliError::from(e))
        }
        Ok(mut state) => {
            w.record(0, &state, &prep)?;
            let mut failure = None;
            for step in 1..=prep.n_steps {
                match coupler.advance(&state) {
                    Ok(next) => {
                        state = next;
                        steps_completed = step;
                        if step % prep.snapshot_stride == 0 || step == prep.n_steps {
                            w.record(step, &state, &prep)?;
                        }
                    }
                    Err(e) => {
                        Snapshot::from_state(&state, &prep.params, prep.saturation)?
                            .write(&dir.join("checkpoint.mbs"))?;
                        checkpoint = Some("checkpoint.mbs".to_string());
                        failure = Some(CliError::from(e));
                        break;
                    }
                }
            }
            failure
        }
    };

    write_file(&dir.join("timeseries.tsv"), &w.timeseries)?;
    let outcome = RunOutcome {
        directory: dir.to_path_buf(),
        steps_completed,
        snapshots: w.snapshots,
        checkpoint,
        error,
    };
    let manifest = manifest(config, &prep, &outcome);
    write_file(
        &dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n",
    )?;
    Ok(outcome)
}

/// Runs a config into its configured output directory.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    run_in(config, &output_directory(config))
}

fn manifest(config: &RunConfig, prep: &Prepared, outcome: &RunOutcome) -> serde_json::Value {
    let p = &prep.params;
    let illumination = match prep.illumination {
        Illumination::Scattering { left, right } => json!({
            "mode": "scattering",
            "left": [left.re, left.im],
            "right": [right.re, right.im],
        }),
        Illumination::Uniform { amplitude } => json!({
            "mode": "uniform",
            "amplitude": [amplitude.re, amplitude.im],
        }),
    };
    let status = if outcome.error.is_some() {
        "failed"
    } else {
        "ok"
    };
    let mut error = String::new();
    if let Some(e) = &outcome.error {
        let _ = write!(error, "{e}");
    }
    json!({
        "program": "mbsim",
        "version": env!("CARGO_PKG_VERSION"),
        "snapshot_format_version": crate::snapshot::VERSION,
        "config": config,
        "units": prep.scales,
        "internal": {
            "n_points": prep.grid.n_points(),
            "length": prep.grid.length(),
            "spacing": prep.grid.spacing(),
            "dt": prep.dt,
            "dipole": p.dipole,
            "detuning": p.detuning,
            "gamma": p.gamma,
            "mass": p.mass,
            "k_laser": p.k_laser,
            "hbar": p.hbar,
            "statistics": p.statistics.as_str(),
            "illumination": illumination,
            "detuning_threshold": prep.settings.detuning_threshold(p),
            "mossotti_epsilon": prep.settings.mossotti_epsilon,
            "collective_shift": p.collective_shift(),
            "g_eff": prep.g_eff,
        },
        "status": status,
        "exit_code": outcome.exit_code(),
        "error": outcome.error.as_ref().map(|_| error),
        "steps_completed": outcome.steps_completed,
        "snapshots": outcome.snapshots,
        "checkpoint": outcome.checkpoint,
    })
}
