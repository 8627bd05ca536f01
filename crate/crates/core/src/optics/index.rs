use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::Grid1D;

/// Threshold on `|1 - (4π/3) α ρ|` below which the Clausius-Mossotti index is
/// refused.
pub const MOSSOTTI_EPSILON: f64 = 1e-6;

/// Squared refractive index sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexProfile {
    grid: Arc<Grid1D>,
    n_squared: Vec<Complex64>,
    min_denominator: Option<f64>,
}

impl IndexProfile {
    /// Arbitrary profile, e.g. a stack of homogeneous slabs.
    pub fn from_n_squared(grid: Arc<Grid1D>, n_squared: Vec<Complex64>) -> Result<Self> {
        if n_squared.len() != grid.n_points() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                n_squared.len()
            )));
        }
        if let Some(j) = n_squared
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Domain(format!("non-finite n² at index {j}")));
        }
        Ok(Self {
            grid,
            n_squared,
            min_denominator: None,
        })
    }

    pub fn vacuum(grid: Arc<Grid1D>) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            n_squared: vec![Complex64::new(1.0, 0.0); n],
            min_denominator: None,
        }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn n_squared(&self) -> &[Complex64] {
        &self.n_squared
    }

    /// Smallest `|1 - (4π/3) α ρ|` seen when the profile came from
    /// [`clausius_mossotti`]; `None` for other profiles.
    pub fn min_denominator(&self) -> Option<f64> {
        self.min_denominator
    }

    pub fn is_lossless(&self) -> bool {
        self.n_squared.iter().all(|z| z.im == 0.0)
    }

    /// Same profile seen from the other side.
    pub fn mirrored(&self) -> Self {
        let mut n_squared = self.n_squared.clone();
        n_squared.reverse();
        Self {
            grid: self.grid.clone(),
            n_squared,
            min_denominator: self.min_denominator,
        }
    }
}

/// `n² = (1 + (8π/3) α ρ) / (1 - (4π/3) α ρ)` with the default resonance
/// threshold.
pub fn clausius_mossotti(alpha: Complex64, rho: &RealField) -> Result<IndexProfile> {
    clausius_mossotti_with_threshold(alpha, rho, MOSSOTTI_EPSILON)
}

pub fn clausius_mossotti_with_threshold(
    alpha: Complex64,
    rho: &RealField,
    epsilon: f64,
) -> Result<IndexProfile> {
    rho.ensure_non_negative("density")?;
    let mut offending = Vec::new();
    let mut min_denominator = f64::INFINITY;
    let mut n_squared = Vec::with_capacity(rho.values().len());
    for (j, &r) in rho.values().iter().enumerate() {
        let ar = alpha * r;
        let denom = 1.0 - ar * (4.0 * PI / 3.0);
        let d = denom.norm();
        min_denominator = min_denominator.min(d);
        if d < epsilon {
            offending.push(j);
            continue;
        }
        n_squared.push((1.0 + ar * (8.0 * PI / 3.0)) / denom);
    }
    // the denominator varies continuously between samples: a segment
    // passing within epsilon of zero is a resonance the samples missed
    let denominators: Vec<Complex64> = rho
        .values()
        .iter()
        .map(|&r| 1.0 - alpha * r * (4.0 * PI / 3.0))
        .collect();
    let n = denominators.len();
    for j in 0..n {
        let k = (j + 1) % n;
        let (a, b) = (denominators[j], denominators[k]);
        if a.norm() < epsilon || b.norm() < epsilon {
            continue;
        }
        let d = segment_distance_to_origin(a, b);
        if d < epsilon {
            min_denominator = min_denominator.min(d);
            offending.extend([j, k]);
        }
    }
    offending.sort_unstable();
    offending.dedup();
    if !offending.is_empty() {
        return Err(Error::MossottiResonance {
            points: offending,
            min_denominator,
        });
    }
    Ok(IndexProfile {
        grid: rho.grid().clone(),
        n_squared,
        min_denominator: Some(min_denominator),
    })
}

fn segment_distance_to_origin(a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.conj() * ab).re / len2).clamp(0.0, 1.0);
    (a + ab * t).norm()
}

/// First-order (dilute) index `n² = 1 + 4π α ρ`.
pub fn low_density_index(alpha: Complex64, rho: &RealField) -> Result<IndexProfile> {
    rho.ensure_non_negative("density")?;
    let n_squared = rho
        .values()
        .iter()
        .map(|&r| 1.0 + alpha * r * (4.0 * PI))
        .collect();
    IndexProfile::from_n_squared(rho.grid().clone(), n_squared)
}

/// `max|∂ρ/∂x| / (k_L max ρ)`, the smoothness measure for the macroscopic
/// wave equation. Zero for an empty cloud.
pub fn density_gradient_metric(rho: &RealField, k_laser: f64) -> f64 {
    let peak = rho.max();
    if peak <= 0.0 {
        return 0.0;
    }
    let samples: Vec<Complex64> = rho
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let slope = rho
        .grid()
        .derivative(&samples)
        .iter()
        .map(|z| z.re.abs())
        .fold(0.0, f64::max);
    slope / (k_laser * peak)
}
