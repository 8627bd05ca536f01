//! Mean-field Maxwell-Bloch simulator for dense ultracold two-level gases.
//!
//! A ground-state matter wave `ψ₁` evolves under the optical potential
//! `(ħ/4) Δ |Ω|² / Δ_l²`, where the local detuning `Δ_l = Δ + (4π/3ħ) d² ρ`
//! carries the density dependence. The Rabi frequency comes from the
//! macroscopic light envelope, which solves `𝓔'' + k² n² 𝓔 = 0` with the
//! Clausius-Mossotti index of the same density.
//!
//! All quantities are one-dimensional and, by default, in recoil units
//! (`ħ = m = k_L = 1`).

pub mod coupler;
pub mod error;
pub mod field;
pub mod grid;
pub mod matter;
pub mod optics;
pub mod params;

pub use coupler::{
    advance, reduce_low_density, regime_report, saturation_bound, self_consistent_field,
    CoupledState, Coupler, CouplerSettings, Illumination, LightSolve, RegimeReport,
};
pub use error::{Error, Result};
pub use field::{density, norm_squared, ComplexField, RealField};
pub use grid::{make_grid, Grid1D};
pub use matter::{
    adiabatic_excited, effective_potential, evolve_step, local_detuning, polarization_density,
    LocalDetuning, MatterState, SplitStepPropagator,
};
pub use optics::{
    clausius_mossotti, lorentz_lorenz, low_density_index, polarizability, rabi_frequency,
    solve_helmholtz, IndexProfile, OpticalSolution,
};
pub use params::{PhysicalParams, Statistics};

pub use num_complex::Complex64;
