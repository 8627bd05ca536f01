//! Turns a validated config into internal-unit simulation inputs.

use std::sync::Arc;

use mbsim_core::{
    make_grid, rabi_frequency, reduce_low_density, Complex64, ComplexField, Coupler,
    CouplerSettings, Grid1D, Illumination, PhysicalParams,
};

use crate::config::{IlluminationMode, InitialKind, RunConfig};
use crate::error::{CliError, Result};
use crate::snapshot::Snapshot;
use crate::units::UnitScales;

/// Everything a run needs, in recoil units.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub grid: Arc<Grid1D>,
    pub params: PhysicalParams,
    pub illumination: Illumination,
    pub settings: CouplerSettings,
    pub dt: f64,
    pub n_steps: u64,
    pub snapshot_stride: u64,
    pub saturation: f64,
    pub scales: UnitScales,
    pub psi0: ComplexField,
    /// Cubic coefficient of the dilute expansion under uniform light.
    pub g_eff: Option<f64>,
}

impl Prepared {
    pub fn coupler(&self) -> Result<Coupler> {
        Ok(Coupler::new(
            self.grid.clone(),
            self.params,
            self.illumination,
            self.settings,
            self.dt,
        )?)
    }
}

fn amplitude(a: Option<crate::config::Amplitude>, field_unit: f64) -> Complex64 {
    a.map_or(Complex64::new(0.0, 0.0), |a| a.0 / field_unit)
}

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    let scales = config.unit_scales();
    let params = config.recoil_params()?;
    let grid = make_grid(config.grid.n_points, config.grid.length / scales.length)?;

    let ill = &config.illumination;
    let illumination = match ill.mode {
        IlluminationMode::Scattering => Illumination::Scattering {
            left: amplitude(ill.left, scales.field),
            right: amplitude(ill.right, scales.field),
        },
        IlluminationMode::Uniform => Illumination::Uniform {
            amplitude: amplitude(ill.amplitude, scales.field),
        },
    };
    let g_eff = match illumination {
        Illumination::Uniform { amplitude } => {
            let omega = rabi_frequency(&ComplexField::constant(grid.clone(), amplitude), &params);
            let intensity = omega.values()[0].norm_sqr();
            Some(reduce_low_density(&params, intensity)?)
        }
        Illumination::Scattering { .. } => None,
    };

    let tol = &config.tolerances;
    let settings = CouplerSettings {
        tol: tol.tol_scf,
        max_iter: tol.max_iter,
        sub_iterate: tol.sub_iterate,
        mossotti_epsilon: tol.eps_mossotti,
        detuning_epsilon: tol.eps_detuning.map(|e| e * scales.time),
    };

    // generated states get the canonical global phase; a loaded state is
    // taken bit for bit
    let mut psi0 = initial_state(config, &grid, &params, g_eff, &scales)?;
    if config.initial.kind != InitialKind::File {
        psi0 = psi0.with_canonical_phase();
    }

    Ok(Prepared {
        grid,
        params,
        illumination,
        settings,
        dt: config.evolution.dt / scales.time,
        n_steps: config.evolution.n_steps,
        snapshot_stride: config.evolution.snapshot_stride,
        saturation: config.diagnostics.saturation,
        scales,
        psi0,
        g_eff,
    })
}

/// Peak density of a bright `sech` soliton of width `w`.
pub fn soliton_peak_density(params: &PhysicalParams, g: f64, width: f64) -> f64 {
    params.hbar * params.hbar / (params.mass * g * width * width)
}

fn initial_state(
    config: &RunConfig,
    grid: &Arc<Grid1D>,
    params: &PhysicalParams,
    g_eff: Option<f64>,
    scales: &UnitScales,
) -> Result<ComplexField> {
    let init = &config.initial;
    let len = |v: Option<f64>| v.unwrap_or(0.0) / scales.length;
    let field = match init.kind {
        InitialKind::Gaussian => {
            let (c, w) = (len(init.center), len(init.width));
            let norm = init.norm.unwrap_or(1.0);
            let a = norm.sqrt() * (std::f64::consts::TAU * w * w).powf(-0.25);
            ComplexField::from_fn(grid.clone(), |x| {
                Complex64::new(a * (-(x - c) * (x - c) / (4.0 * w * w)).exp(), 0.0)
            })?
        }
        InitialKind::PlaneWave => {
            let k = init.k.unwrap_or(0.0) * scales.length;
            let a = init.amplitude.unwrap_or(1.0) * scales.length.sqrt();
            ComplexField::from_fn(grid.clone(), |x| Complex64::from_polar(a, k * x))?
        }
        InitialKind::Soliton => {
            let g = g_eff.unwrap_or(0.0);
            if g <= 0.0 {
                return Err(CliError::invalid(
                    "amplitude",
                    "a soliton needs a non-zero cubic coefficient (dipole and amplitude non-zero)",
                ));
            }
            let (c, w) = (len(init.center), len(init.width));
            let amp = soliton_peak_density(params, g, w).sqrt();
            ComplexField::from_fn(grid.clone(), |x| {
                Complex64::new(amp / ((x - c) / w).cosh(), 0.0)
            })?
        }
        InitialKind::File => {
            let path = init.path.as_deref().expect("validated");
            let snap = Snapshot::read(path)?;
            let same = snap.n_points == grid.n_points()
                && (snap.length - grid.length()).abs() <= 1e-12 * grid.length();
            if !same {
                return Err(CliError::invalid(
                    "path",
                    format!(
                        "snapshot grid ({} points, length {}) differs from the config grid",
                        snap.n_points, snap.length
                    ),
                ));
            }
            let psi = snap.complex("psi1").ok_or_else(|| CliError::Snapshot {
                path: path.to_path_buf(),
                reason: "no psi1 array".into(),
            })?;
            ComplexField::new(grid.clone(), psi.to_vec())?
        }
    };
    Ok(field)
}
