//! Conversion between laboratory inputs and the internal recoil units.
//!
//! Lab configs give the mass in kg, `k_laser` in 1/m, lengths in m,
//! times in s, detuning and linewidth in rad/s. The dipole is taken in
//! √(J·m), so that `d²ρ` with a line density `ρ` is an energy; field
//! amplitudes are in J per dipole unit.

use serde::Serialize;

/// Reduced Planck constant, J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Size of one internal unit expressed in input units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitScales {
    pub system: &'static str,
    pub length: f64,
    pub time: f64,
    pub energy: f64,
    pub dipole: f64,
    pub field: f64,
}

impl UnitScales {
    pub fn recoil() -> Self {
        Self {
            system: "recoil",
            length: 1.0,
            time: 1.0,
            energy: 1.0,
            dipole: 1.0,
            field: 1.0,
        }
    }

    pub fn lab(mass: f64, k_laser: f64) -> Self {
        let length = 1.0 / k_laser;
        let time = mass / (HBAR_SI * k_laser * k_laser);
        let energy = HBAR_SI / time;
        let dipole = (energy * length).sqrt();
        Self {
            system: "lab",
            length,
            time,
            energy,
            dipole,
            field: energy / dipole,
        }
    }
}
