use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{check_same_grid, ComplexField, RealField};
use crate::grid::Grid1D;
use crate::params::PhysicalParams;

/// Ground-state mean field in the rotating frame at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct MatterState {
    pub psi1: ComplexField,
    pub time: f64,
}

impl MatterState {
    pub fn new(psi1: ComplexField) -> Self {
        Self { psi1, time: 0.0 }
    }
}

/// Strang-split propagator for `iħ ∂ψ/∂t = (-ħ²∇²/2m + V) ψ`: half kinetic
/// step in Fourier space, full potential phase, half kinetic step.
///
/// The half-step kinetic phases are cached for a fixed `dt`.
#[derive(Debug, Clone)]
pub struct SplitStepPropagator {
    grid: Arc<Grid1D>,
    dt: f64,
    hbar: f64,
    half_kinetic: Vec<Complex64>,
}

impl SplitStepPropagator {
    pub fn new(grid: Arc<Grid1D>, params: &PhysicalParams, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config {
                field: "dt",
                reason: format!("must be positive and finite, got {dt}"),
            });
        }
        let rate = params.hbar / (2.0 * params.mass);
        let half_kinetic = grid
            .wavenumbers()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -rate * k * k * 0.5 * dt))
            .collect();
        Ok(Self {
            grid,
            dt,
            hbar: params.hbar,
            half_kinetic,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    fn half_kick(&self, buf: &mut [Complex64]) {
        self.grid.forward(buf);
        buf.iter_mut()
            .zip(&self.half_kinetic)
            .for_each(|(z, &ph)| *z *= ph);
        self.grid.inverse(buf);
    }

    pub fn step(&self, state: &MatterState, potential: &RealField) -> Result<MatterState> {
        check_same_grid(&self.grid, state.psi1.grid())?;
        check_same_grid(&self.grid, potential.grid())?;
        let mut buf = state.psi1.values().to_vec();
        self.half_kick(&mut buf);
        let phase = -self.dt / self.hbar;
        buf.iter_mut()
            .zip(potential.values())
            .for_each(|(z, &v)| *z *= Complex64::from_polar(1.0, phase * v));
        self.half_kick(&mut buf);
        let time = state.time + self.dt;
        if let Some(j) = buf
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NumericalBlowup {
                time,
                reason: format!(
                    "non-finite ψ₁ at index {j} (x = {}) after step dt = {}",
                    self.grid.position(j),
                    self.dt
                ),
            });
        }
        Ok(MatterState {
            psi1: ComplexField::from_parts(self.grid.clone(), buf),
            time,
        })
    }
}

/// One Strang step of length `dt` under a static potential.
pub fn evolve_step(
    state: &MatterState,
    potential: &RealField,
    dt: f64,
    params: &PhysicalParams,
) -> Result<MatterState> {
    SplitStepPropagator::new(state.psi1.grid().clone(), params, dt)?.step(state, potential)
}
