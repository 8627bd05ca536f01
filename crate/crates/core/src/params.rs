//! Scalar model constants.

use crate::error::{Error, Result};

/// Quantum statistics of the atoms. Carried through to outputs as
/// metadata; the mean-field equations do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Statistics {
    #[default]
    Bose,
    Fermi,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bose" => Ok(Statistics::Bose),
            "fermi" => Ok(Statistics::Fermi),
            other => Err(Error::Config {
                field: "statistics",
                reason: format!("expected \"bose\" or \"fermi\", got {other:?}"),
            }),
        }
    }
}

/// Constants of the two-level model.
///
/// Internal units are recoil units (`hbar = mass = k_laser = 1`), but every
/// kernel keeps the constants explicit so other scalings stay consistent.
/// `detuning` is `ω_L - ω_a - δ` with the Lamb shift already absorbed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub dipole: f64,
    pub detuning: f64,
    pub gamma: f64,
    pub mass: f64,
    pub k_laser: f64,
    pub hbar: f64,
    pub statistics: Statistics,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            dipole: 0.0,
            detuning: 1.0,
            gamma: 0.0,
            mass: 1.0,
            k_laser: 1.0,
            hbar: 1.0,
            statistics: Statistics::Bose,
        }
    }
}

impl PhysicalParams {
    /// Recoil-unit parameters with the given dipole, detuning and linewidth.
    pub fn recoil(dipole: f64, detuning: f64, gamma: f64) -> Result<Self> {
        Self {
            dipole,
            detuning,
            gamma,
            ..Self::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        let finite = |field: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config {
                    field,
                    reason: format!("must be finite, got {v}"),
                })
            }
        };
        finite("dipole", self.dipole)?;
        finite("detuning", self.detuning)?;
        finite("gamma", self.gamma)?;
        finite("mass", self.mass)?;
        finite("k_laser", self.k_laser)?;
        finite("hbar", self.hbar)?;
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config {
                    field,
                    reason: format!("must be > 0, got {v}"),
                })
            }
        };
        positive("mass", self.mass)?;
        positive("k_laser", self.k_laser)?;
        positive("hbar", self.hbar)?;
        if self.gamma < 0.0 {
            return Err(Error::Config {
                field: "gamma",
                reason: format!("must be >= 0, got {}", self.gamma),
            });
        }
        Ok(self)
    }

    /// Rejects `Δ = 0`, which the adiabatic branch cannot represent.
    pub fn require_adiabatic(&self) -> Result<()> {
        if self.detuning == 0.0 {
            return Err(Error::SingularParameter {
                field: "detuning",
                reason: "adiabatic elimination needs a non-zero detuning".into(),
            });
        }
        Ok(())
    }

    /// Collective shift per unit density, `(4π/3ħ) d²`.
    pub fn collective_shift(&self) -> f64 {
        4.0 * std::f64::consts::PI / (3.0 * self.hbar) * self.dipole * self.dipole
    }
}
