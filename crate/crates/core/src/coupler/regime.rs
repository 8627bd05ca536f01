use crate::error::{Error, Result};
use crate::field::density;
use crate::optics::density_gradient_metric;
use crate::params::PhysicalParams;

use super::CoupledState;

/// Coefficient of the contact-interaction bound `U_d / U_g ≫ 37.5 s`.
pub const SATURATION_COEFFICIENT: f64 = 37.5;

/// Lower bound on the dipole-to-contact energy ratio required to neglect
/// ground-state collisions at saturation parameter `s`.
pub fn saturation_bound(s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!(
            "saturation parameter must be finite and >= 0, got {s}"
        )));
    }
    Ok(SATURATION_COEFFICIENT * s)
}

/// Validity diagnostics of a coupled state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    /// `min |Δ_l|` over the grid.
    pub min_abs_detuning: f64,
    /// `max 1 / |1 - (4π/3) α ρ|`; 1 in vacuum, diverges at the Mossotti
    /// resonance.
    pub max_mossotti_denominator_proximity: f64,
    pub saturation_bound: f64,
    /// `max|∂ρ/∂x| / (k_L max ρ)`.
    pub density_gradient_metric: f64,
}

pub fn regime_report(
    state: &CoupledState,
    params: &PhysicalParams,
    s: f64,
) -> Result<RegimeReport> {
    let rho = density(&state.matter.psi1);
    let proximity = state
        .optics
        .profile
        .min_denominator()
        .map_or(1.0, |d| 1.0 / d);
    Ok(RegimeReport {
        min_abs_detuning: state.local_detuning.min_abs,
        max_mossotti_denominator_proximity: proximity,
        saturation_bound: saturation_bound(s)?,
        density_gradient_metric: density_gradient_metric(&rho, params.k_laser),
    })
}
