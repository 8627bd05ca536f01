//! Light side of the model: polarizability, local-field correction, Rabi
//! frequency, refractive index and the 1D scattering solver.

mod helmholtz;
mod index;

pub use helmholtz::{
    helmholtz_residual, solve_helmholtz, solve_helmholtz_two_sided, transmission_from_right,
    OpticalSolution,
};
pub use index::{
    clausius_mossotti, clausius_mossotti_with_threshold, density_gradient_metric,
    low_density_index, IndexProfile, MOSSOTTI_EPSILON,
};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{check_same_grid, ComplexField};
use crate::params::PhysicalParams;

/// Two-level polarizability `α = -d² / (ħ (Δ + iγ/2))`.
///
/// Uses the bare detuning; the collective shift is resummed by the
/// Clausius-Mossotti denominator.
pub fn polarizability(params: &PhysicalParams) -> Result<Complex64> {
    if params.detuning == 0.0 && params.gamma == 0.0 {
        return Err(Error::SingularParameter {
            field: "detuning",
            reason: "polarizability diverges for Δ = 0 with γ = 0".into(),
        });
    }
    let denom = Complex64::new(params.detuning, 0.5 * params.gamma) * params.hbar;
    Ok(-params.dipole * params.dipole / denom)
}

/// Local field from the macroscopic field: `E_loc = E_mac + (4π/3) P`.
pub fn lorentz_lorenz(e_mac: &ComplexField, polarization: &ComplexField) -> Result<ComplexField> {
    check_same_grid(e_mac.grid(), polarization.grid())?;
    let c = 4.0 * PI / 3.0;
    let values = e_mac
        .values()
        .iter()
        .zip(polarization.values())
        .map(|(&e, &p)| e + p * c)
        .collect();
    ComplexField::new(e_mac.grid().clone(), values)
}

/// Position-dependent Rabi frequency `Ω = 2 d 𝓔 / ħ`.
pub fn rabi_frequency(e_mac: &ComplexField, params: &PhysicalParams) -> ComplexField {
    e_mac.scale(Complex64::new(2.0 * params.dipole / params.hbar, 0.0))
}
