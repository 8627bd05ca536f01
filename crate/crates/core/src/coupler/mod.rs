//! Closure of the Maxwell-Bloch loop: density → index → light → Rabi
//! frequency → local detuning → potential → matter step.

mod regime;

pub use regime::{regime_report, saturation_bound, RegimeReport, SATURATION_COEFFICIENT};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{density, ComplexField, RealField};
use crate::matter::{
    detuning_threshold, effective_potential, local_detuning_with_threshold, LocalDetuning,
    MatterState, SplitStepPropagator,
};
use crate::optics::{
    clausius_mossotti_with_threshold, polarizability, rabi_frequency, solve_helmholtz_two_sided,
    OpticalSolution, MOSSOTTI_EPSILON,
};
use crate::params::PhysicalParams;

/// How the laser reaches the atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Illumination {
    /// Plane waves entering from the left and/or right; the envelope is
    /// solved through the cloud.
    Scattering { left: Complex64, right: Complex64 },
    /// Prescribed spatially uniform envelope. The index profile is still
    /// evaluated (and policed) but the light is not propagated; `r = 0`,
    /// `t = 1` are reported.
    Uniform { amplitude: Complex64 },
}

impl Illumination {
    pub fn from_left(amplitude: Complex64) -> Self {
        Illumination::Scattering {
            left: amplitude,
            right: Complex64::new(0.0, 0.0),
        }
    }
}

/// Tolerances and thresholds of the coupled solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSettings {
    pub tol: f64,
    pub max_iter: usize,
    /// Iterate light and matter to a fixed point within each step (the
    /// potential is evaluated at the mid-step density).
    pub sub_iterate: bool,
    pub mossotti_epsilon: f64,
    /// Overrides the default `10γ` / `1e-6|Δ|` rule.
    pub detuning_epsilon: Option<f64>,
}

impl Default for CouplerSettings {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 8,
            sub_iterate: false,
            mossotti_epsilon: MOSSOTTI_EPSILON,
            detuning_epsilon: None,
        }
    }
}

impl CouplerSettings {
    pub fn detuning_threshold(&self, params: &PhysicalParams) -> f64 {
        self.detuning_epsilon
            .unwrap_or_else(|| detuning_threshold(params))
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Config {
                field: "tol_scf",
                reason: format!("must be > 0, got {}", self.tol),
            });
        }
        if self.max_iter == 0 {
            return Err(Error::Config {
                field: "max_iter",
                reason: "must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Light solution for a density profile: Clausius-Mossotti index, then
/// one direct Helmholtz solve (or the prescribed envelope).
pub fn solve_light(
    rho: &RealField,
    params: &PhysicalParams,
    illumination: &Illumination,
    settings: &CouplerSettings,
) -> Result<OpticalSolution> {
    let alpha = polarizability(params)?;
    let profile = clausius_mossotti_with_threshold(alpha, rho, settings.mossotti_epsilon)?;
    match *illumination {
        Illumination::Scattering { left, right } => {
            solve_helmholtz_two_sided(&profile, params.k_laser, left, right)
        }
        Illumination::Uniform { amplitude } => Ok(OpticalSolution {
            envelope: ComplexField::constant(rho.grid().clone(), amplitude),
            reflection: Complex64::new(0.0, 0.0),
            transmission: Complex64::new(1.0, 0.0),
            profile,
            k_laser: params.k_laser,
        }),
    }
}

/// Envelope the atoms would see with no atoms present.
fn vacuum_envelope(
    rho: &RealField,
    params: &PhysicalParams,
    illumination: &Illumination,
) -> Result<ComplexField> {
    let empty = RealField::zeros(rho.grid().clone());
    let vacuum = PhysicalParams {
        dipole: 0.0,
        ..*params
    };
    let settings = CouplerSettings::default();
    Ok(solve_light(&empty, &vacuum, illumination, &settings)?.envelope)
}

/// Relative sup-norm change between two envelopes.
pub fn relative_change(new: &ComplexField, old: &ComplexField) -> f64 {
    let scale = new.max_abs();
    if scale == 0.0 {
        return old.max_abs();
    }
    let diff = new
        .values()
        .iter()
        .zip(old.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    diff / scale
}

fn relative_change_real(new: &RealField, old: &RealField) -> f64 {
    let scale = new.values().iter().map(|v| v.abs()).fold(0.0, f64::max);
    let diff = new
        .values()
        .iter()
        .zip(old.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Light solve with its fixed-point bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSolve {
    pub solution: OpticalSolution,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// Iterates the light solve for the current matter density, starting from
/// the vacuum envelope, until the relative sup-norm change of the envelope
/// drops to `tol`.
///
/// The index depends on the density only, so the second iterate already
/// reproduces the first; an empty or decoupled cloud converges in one.
pub fn self_consistent_field(
    matter: &MatterState,
    params: &PhysicalParams,
    illumination: &Illumination,
    tol: f64,
    max_iter: usize,
) -> Result<LightSolve> {
    let settings = CouplerSettings {
        tol,
        max_iter,
        ..CouplerSettings::default()
    };
    settings.validate()?;
    let rho = density(&matter.psi1);
    let mut previous = vacuum_envelope(&rho, params, illumination)?;
    let mut history = Vec::new();
    for iteration in 1..=max_iter {
        let solution = solve_light(&rho, params, illumination, &settings)?;
        let residual = relative_change(&solution.envelope, &previous);
        history.push(residual);
        if residual <= tol {
            return Ok(LightSolve {
                solution,
                residual,
                iterations: iteration,
                history,
            });
        }
        previous = solution.envelope;
    }
    Err(Error::Convergence { history })
}

/// Second-order density coefficient of the dilute expansion
/// `V ≈ ħ|Ω|²/(4Δ) - g ρ`, with `g = (2π d²/3) |Ω|² / Δ²`.
pub fn reduce_low_density(params: &PhysicalParams, intensity: f64) -> Result<f64> {
    if params.detuning == 0.0 {
        return Err(Error::SingularParameter {
            field: "detuning",
            reason: "the dilute expansion needs Δ ≠ 0".into(),
        });
    }
    if intensity < 0.0 {
        return Err(Error::Domain(format!("|Ω|² must be >= 0, got {intensity}")));
    }
    let d2 = params.dipole * params.dipole;
    Ok(2.0 * std::f64::consts::PI * d2 / 3.0 * intensity / (params.detuning * params.detuning))
}

/// Matter field, the light it produces and the derived potential.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub matter: MatterState,
    pub optics: OpticalSolution,
    pub residual: f64,
    pub iterations: usize,
    pub local_detuning: LocalDetuning,
    pub potential: RealField,
}

struct Derived {
    optics: OpticalSolution,
    local_detuning: LocalDetuning,
    potential: RealField,
}

fn derive(
    rho: &RealField,
    params: &PhysicalParams,
    illumination: &Illumination,
    settings: &CouplerSettings,
) -> Result<Derived> {
    let optics = solve_light(rho, params, illumination, settings)?;
    let omega = rabi_frequency(&optics.envelope, params);
    let dl = local_detuning_with_threshold(rho, params, settings.detuning_threshold(params))?;
    dl.ensure_regular()?;
    let potential = effective_potential(&omega, &dl, params)?;
    Ok(Derived {
        optics,
        local_detuning: dl,
        potential,
    })
}

impl CoupledState {
    /// Solves the light for the matter's current density and builds the
    /// potential that drives the next step.
    pub fn new(
        matter: MatterState,
        params: &PhysicalParams,
        illumination: &Illumination,
        settings: &CouplerSettings,
    ) -> Result<Self> {
        settings.validate()?;
        params.require_adiabatic()?;
        let rho = density(&matter.psi1);
        let d = derive(&rho, params, illumination, settings)?;
        Ok(Self {
            matter,
            optics: d.optics,
            residual: 0.0,
            iterations: 1,
            local_detuning: d.local_detuning,
            potential: d.potential,
        })
    }
}

/// Drives a trajectory with fixed parameters and time step.
#[derive(Debug, Clone)]
pub struct Coupler {
    params: PhysicalParams,
    illumination: Illumination,
    settings: CouplerSettings,
    propagator: SplitStepPropagator,
}

impl Coupler {
    pub fn new(
        grid: std::sync::Arc<crate::grid::Grid1D>,
        params: PhysicalParams,
        illumination: Illumination,
        settings: CouplerSettings,
        dt: f64,
    ) -> Result<Self> {
        let params = params.validated()?;
        params.require_adiabatic()?;
        settings.validate()?;
        Ok(Self {
            propagator: SplitStepPropagator::new(grid, &params, dt)?,
            params,
            illumination,
            settings,
        })
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn illumination(&self) -> &Illumination {
        &self.illumination
    }

    pub fn settings(&self) -> &CouplerSettings {
        &self.settings
    }

    pub fn dt(&self) -> f64 {
        self.propagator.dt()
    }

    pub fn initial_state(&self, matter: MatterState) -> Result<CoupledState> {
        CoupledState::new(matter, &self.params, &self.illumination, &self.settings)
    }

    /// One step: the matter moves under the potential stored in `state`,
    /// then light, local detuning and potential are rebuilt for the new
    /// density.
    pub fn advance(&self, state: &CoupledState) -> Result<CoupledState> {
        if self.settings.sub_iterate {
            return self.advance_iterated(state);
        }
        let matter = self.propagator.step(&state.matter, &state.potential)?;
        let rho = density(&matter.psi1);
        let d = derive(&rho, &self.params, &self.illumination, &self.settings)?;
        Ok(CoupledState {
            matter,
            optics: d.optics,
            residual: 0.0,
            iterations: 1,
            local_detuning: d.local_detuning,
            potential: d.potential,
        })
    }

    fn advance_iterated(&self, state: &CoupledState) -> Result<CoupledState> {
        let rho_start = density(&state.matter.psi1);
        let mut matter = self.propagator.step(&state.matter, &state.potential)?;
        let mut envelope = state.optics.envelope.clone();
        let mut potential = state.potential.clone();
        let mut history = Vec::new();
        for iteration in 1..=self.settings.max_iter {
            let rho_end = density(&matter.psi1);
            let mid: Vec<f64> = rho_start
                .values()
                .iter()
                .zip(rho_end.values())
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            let rho_mid = RealField::new(rho_start.grid().clone(), mid)?;
            let d = derive(&rho_mid, &self.params, &self.illumination, &self.settings)?;
            let residual = relative_change(&d.optics.envelope, &envelope)
                .max(relative_change_real(&d.potential, &potential));
            history.push(residual);
            matter = self.propagator.step(&state.matter, &d.potential)?;
            envelope = d.optics.envelope;
            potential = d.potential;
            if residual <= self.settings.tol {
                let rho = density(&matter.psi1);
                let d = derive(&rho, &self.params, &self.illumination, &self.settings)?;
                return Ok(CoupledState {
                    matter,
                    optics: d.optics,
                    residual,
                    iterations: iteration,
                    local_detuning: d.local_detuning,
                    potential: d.potential,
                });
            }
        }
        Err(Error::Convergence { history })
    }
}

/// Single coupled step with left-incident scattering illumination and
/// default settings.
pub fn advance(
    state: &CoupledState,
    dt: f64,
    params: &PhysicalParams,
    incident: Complex64,
) -> Result<CoupledState> {
    Coupler::new(
        state.matter.psi1.grid().clone(),
        *params,
        Illumination::from_left(incident),
        CouplerSettings::default(),
        dt,
    )?
    .advance(state)
}
