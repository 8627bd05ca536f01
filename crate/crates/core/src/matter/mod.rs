//! Matter side: local detuning, adiabatic excited-state amplitude,
//! effective potential, polarization and the split-step propagator.

mod propagator;

pub use propagator::{evolve_step, MatterState, SplitStepPropagator};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{check_same_grid, ComplexField, RealField};
use crate::params::PhysicalParams;

/// Density-dependent detuning `Δ_l(x) = Δ + (4π/3ħ) d² ρ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDetuning {
    pub values: RealField,
    pub min_abs: f64,
    pub threshold: f64,
    pub singular_points: Vec<usize>,
}

impl LocalDetuning {
    pub fn is_singular(&self) -> bool {
        !self.singular_points.is_empty()
    }

    /// Fails with [`Error::SingularDetuning`] when any `|Δ_l| < ε`.
    pub fn ensure_regular(&self) -> Result<&Self> {
        if self.is_singular() {
            return Err(Error::SingularDetuning {
                points: self.singular_points.clone(),
                min_abs: self.min_abs,
                threshold: self.threshold,
            });
        }
        Ok(self)
    }
}

/// Default singularity threshold: `10 γ` when `γ > 0`, else `1e-6 |Δ|`.
pub fn detuning_threshold(params: &PhysicalParams) -> f64 {
    if params.gamma > 0.0 {
        10.0 * params.gamma
    } else {
        1e-6 * params.detuning.abs()
    }
}

pub fn local_detuning(rho: &RealField, params: &PhysicalParams) -> Result<LocalDetuning> {
    local_detuning_with_threshold(rho, params, detuning_threshold(params))
}

/// Evaluates `Δ_l` and flags points with `|Δ_l| < threshold`. Flagging is
/// not an error by itself; callers decide via
/// [`LocalDetuning::ensure_regular`].
pub fn local_detuning_with_threshold(
    rho: &RealField,
    params: &PhysicalParams,
    threshold: f64,
) -> Result<LocalDetuning> {
    rho.ensure_non_negative("density")?;
    let shift = params.collective_shift();
    let values: Vec<f64> = rho
        .values()
        .iter()
        .map(|&r| params.detuning + shift * r)
        .collect();
    let mut min_abs = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    // exact zero is singular even if the threshold is 0
    let mut singular_points: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() < threshold || **v == 0.0)
        .map(|(j, _)| j)
        .collect();
    // a sign change between neighbours (periodic) hides a zero between
    // the samples
    let n = values.len();
    for j in 0..n {
        let k = (j + 1) % n;
        if values[j] * values[k] < 0.0 {
            singular_points.extend([j, k]);
            min_abs = 0.0;
        }
    }
    singular_points.sort_unstable();
    singular_points.dedup();
    Ok(LocalDetuning {
        values: RealField::new(rho.grid().clone(), values)?,
        min_abs,
        threshold,
        singular_points,
    })
}

/// Adiabatic excited-state amplitude `φ₂ = -Ω ψ₁ / (2 (Δ_l + iγ/2))`.
///
/// With `γ > 0` the denominator never vanishes and a flagged detuning is
/// accepted; with `γ = 0` a flagged detuning is an error.
pub fn adiabatic_excited(
    omega: &ComplexField,
    psi1: &ComplexField,
    dl: &LocalDetuning,
    gamma: f64,
) -> Result<ComplexField> {
    check_same_grid(omega.grid(), psi1.grid())?;
    check_same_grid(omega.grid(), dl.values.grid())?;
    if gamma <= 0.0 {
        dl.ensure_regular()?;
    }
    let values = omega
        .values()
        .iter()
        .zip(psi1.values())
        .zip(dl.values.values())
        .map(|((&o, &p), &d)| -o * p / (2.0 * Complex64::new(d, 0.5 * gamma)))
        .collect();
    ComplexField::new(omega.grid().clone(), values)
}

/// Optical potential `V = (ħ/4) Δ |Ω|² / Δ_l²` of the nonlinear matter
/// equation.
pub fn effective_potential(
    omega: &ComplexField,
    dl: &LocalDetuning,
    params: &PhysicalParams,
) -> Result<RealField> {
    check_same_grid(omega.grid(), dl.values.grid())?;
    dl.ensure_regular()?;
    let values = omega
        .values()
        .iter()
        .zip(dl.values.values())
        .map(|(o, &d)| 0.25 * params.hbar * params.detuning * o.norm_sqr() / (d * d))
        .collect();
    RealField::new(omega.grid().clone(), values)
}

/// Mean-field polarization `P = d ψ₁* φ₂`.
pub fn polarization_density(
    psi1: &ComplexField,
    phi2: &ComplexField,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    check_same_grid(psi1.grid(), phi2.grid())?;
    let values = psi1
        .values()
        .iter()
        .zip(phi2.values())
        .map(|(p, &e)| params.dipole * p.conj() * e)
        .collect();
    ComplexField::new(psi1.grid().clone(), values)
}
