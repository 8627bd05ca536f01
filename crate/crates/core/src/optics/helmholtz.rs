//! Staircase transfer-matrix solver for `𝓔'' + k² n²(x) 𝓔 = 0`.
//!
//! Each grid cell `[x_j, x_j + dx)` is a homogeneous slab with `n² = n²(x_j)`.
//! Outside `[-L/2, L/2]` the medium is vacuum. Inside a slab the pair
//! `(𝓔, 𝓔')` is carried exactly by
//!
//! ```text
//! [ cos(q h)       sin(q h)/q ]
//! [ -q sin(q h)    cos(q h)   ]      q = k n
//! ```
//!
//! which depends on `q²` only, so no square-root branch has to be chosen.
//! The solve starts from a pure outgoing wave on the right edge and sweeps
//! leftwards; the left edge is then split into incident and reflected
//! parts.

use num_complex::Complex64;

use super::index::IndexProfile;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::Grid1D;

/// Magnitude at which the backward sweep is declared ill-conditioned.
const GROWTH_LIMIT: f64 = 1e150;

/// Macroscopic envelope together with the scattering amplitudes for
/// left incidence.
///
/// Phase references: the incident and reflected waves are `e^{±ik(x - x_L)}`
/// and the transmitted wave is `t e^{ik(x - x_R)}`, so vacuum gives
/// `t = e^{ikL}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalSolution {
    pub envelope: ComplexField,
    pub reflection: Complex64,
    pub transmission: Complex64,
    pub profile: IndexProfile,
    pub k_laser: f64,
}

struct Sweep {
    /// Field at the left edge of every cell, unnormalised.
    nodes: Vec<Complex64>,
    /// Incident amplitude at `x_L` for unit transmitted amplitude.
    incident: Complex64,
    reflected: Complex64,
}

fn sin_over_q(q: Complex64, h: f64) -> Complex64 {
    let qh = q * h;
    if qh.norm() < 1e-6 {
        h * (1.0 - qh * qh / 6.0)
    } else {
        qh.sin() / q
    }
}

fn backward_sweep(grid: &Grid1D, n_squared: &[Complex64], k: f64) -> Result<Sweep> {
    let h = grid.spacing();
    let ik = Complex64::new(0.0, k);
    let mut e = Complex64::new(1.0, 0.0);
    let mut de = ik;
    let mut nodes = vec![Complex64::default(); n_squared.len()];
    for j in (0..n_squared.len()).rev() {
        let q = (n_squared[j] * (k * k)).sqrt();
        let c = (q * h).cos();
        let s = sin_over_q(q, h);
        // inverse propagator: step by -h
        let e_new = c * e - s * de;
        let de_new = q * q * s * e + c * de;
        e = e_new;
        de = de_new;
        let mag = e.norm().max(de.norm() / k);
        if !mag.is_finite() || mag > GROWTH_LIMIT {
            return Err(Error::Conditioning {
                cell: j,
                position: grid.position(j),
                reason: format!(
                    "backward sweep grew to {mag:e}; evanescent span too long (n² = {})",
                    n_squared[j]
                ),
            });
        }
        nodes[j] = e;
    }
    let incident = 0.5 * (e + de / ik);
    let reflected = 0.5 * (e - de / ik);
    if incident.norm() == 0.0 {
        return Err(Error::Conditioning {
            cell: 0,
            position: grid.origin(),
            reason: "vanishing incident amplitude".into(),
        });
    }
    Ok(Sweep {
        nodes,
        incident,
        reflected,
    })
}

fn check_k(k_laser: f64) -> Result<()> {
    if !(k_laser.is_finite() && k_laser > 0.0) {
        return Err(Error::Config {
            field: "k_laser",
            reason: format!("must be positive, got {k_laser}"),
        });
    }
    Ok(())
}

/// Scattering solution for a wave of amplitude `incident` entering from
/// the left.
pub fn solve_helmholtz(
    profile: &IndexProfile,
    k_laser: f64,
    incident: Complex64,
) -> Result<OpticalSolution> {
    solve_helmholtz_two_sided(profile, k_laser, incident, Complex64::new(0.0, 0.0))
}

/// Illumination from both sides: `left` enters at `x_L` moving right,
/// `right` enters at `x_R` moving left. The envelope is the superposition;
/// `reflection`/`transmission` are the left-incidence coefficients.
pub fn solve_helmholtz_two_sided(
    profile: &IndexProfile,
    k_laser: f64,
    left: Complex64,
    right: Complex64,
) -> Result<OpticalSolution> {
    check_k(k_laser)?;
    let grid = profile.grid().clone();
    let from_left = backward_sweep(&grid, profile.n_squared(), k_laser)?;
    let scale = left / from_left.incident;
    let mut values: Vec<Complex64> = from_left.nodes.iter().map(|&e| e * scale).collect();

    if right != Complex64::new(0.0, 0.0) {
        let mirrored = profile.mirrored();
        let from_right = backward_sweep(&grid, mirrored.n_squared(), k_laser)?;
        let scale = right / from_right.incident;
        // Mirrored node m sits at x = x_R - m·dx = x_{n-m}. The mirrored
        // sweep starts at its own right edge, which is x_L, with unit field.
        let n = values.len();
        values[0] += scale;
        for (j, v) in values.iter_mut().enumerate().skip(1) {
            *v += from_right.nodes[n - j] * scale;
        }
    }
    let envelope = ComplexField::new(grid, values)?;
    Ok(OpticalSolution {
        envelope,
        reflection: from_left.reflected / from_left.incident,
        transmission: 1.0 / from_left.incident,
        profile: profile.clone(),
        k_laser,
    })
}

/// Transmission amplitude for incidence from the right.
pub fn transmission_from_right(profile: &IndexProfile, k_laser: f64) -> Result<Complex64> {
    check_k(k_laser)?;
    let sweep = backward_sweep(profile.grid(), profile.mirrored().n_squared(), k_laser)?;
    Ok(1.0 / sweep.incident)
}

/// Relative residual `‖𝓔'' + k²n²𝓔‖ / (k² ‖𝓔‖)` using second differences
/// at interior nodes. This measures the staircase solution against the
/// continuous equation, so it scales like `(k dx)²`.
pub fn helmholtz_residual(solution: &OpticalSolution) -> f64 {
    let e = solution.envelope.values();
    let n2 = solution.profile.n_squared();
    let h = solution.envelope.grid().spacing();
    let k2 = solution.k_laser * solution.k_laser;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 1..e.len() - 1 {
        let lap = (e[j + 1] - 2.0 * e[j] + e[j - 1]) / (h * h);
        // average neighbouring cells since node j sits on their interface
        let n2_node = 0.5 * (n2[j] + n2[j - 1]);
        num += (lap + k2 * n2_node * e[j]).norm_sqr();
        den += e[j].norm_sqr();
    }
    if den == 0.0 {
        return 0.0;
    }
    (num / den).sqrt() / k2
}
