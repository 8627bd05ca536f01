//! Complex and real sample containers living on a shared [`Grid1D`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Complex scalar samples on a grid: matter fields, light envelopes,
/// polarization densities.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Arc<Grid1D>,
    values: Vec<Complex64>,
}

/// Real samples on a grid (densities, potentials, detunings).
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Arc<Grid1D>,
    values: Vec<f64>,
}

fn check_len(grid: &Grid1D, len: usize) -> Result<()> {
    if len != grid.n_points() {
        return Err(Error::Shape(format!(
            "expected {} samples, got {len}",
            grid.n_points()
        )));
    }
    Ok(())
}

pub(crate) fn check_same_grid(a: &Grid1D, b: &Grid1D) -> Result<()> {
    if !a.same_as(b) {
        return Err(Error::Shape(format!(
            "fields live on different grids ({} points / L = {} vs {} points / L = {})",
            a.n_points(),
            a.length(),
            b.n_points(),
            b.length()
        )));
    }
    Ok(())
}

impl ComplexField {
    pub fn new(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(j) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Domain(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(grid: Arc<Grid1D>, value: Complex64) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            values: vec![value; n],
        }
    }

    /// Samples `f(x_j)` at every grid point.
    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.positions().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    /// Wraps values produced by an operation that is finite by
    /// construction.
    pub(crate) fn from_parts(grid: Arc<Grid1D>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_parts(
            self.grid.clone(),
            self.values.iter().map(|&z| z * factor).collect(),
        )
    }

    /// Unnormalised forward spectrum.
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        self.grid.forward(&mut buf);
        buf
    }

    /// Inverse of [`ComplexField::spectrum`].
    pub fn from_spectrum(grid: Arc<Grid1D>, mut spectrum: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, spectrum.len())?;
        grid.inverse(&mut spectrum);
        Self::new(grid, spectrum)
    }

    /// Rotates the global phase so the sample with the largest modulus is
    /// real and positive. The first maximum wins ties.
    pub fn with_canonical_phase(&self) -> Self {
        let mut best = 0;
        let mut best_abs = f64::NEG_INFINITY;
        for (j, z) in self.values.iter().enumerate() {
            let a = z.norm_sqr();
            if a > best_abs {
                best_abs = a;
                best = j;
            }
        }
        let pivot = self.values.get(best).copied().unwrap_or_default();
        if pivot.norm() == 0.0 {
            return self.clone();
        }
        self.scale(pivot.conj() / pivot.norm())
    }

    /// Sup norm of the samples.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl RealField {
    pub fn new(grid: Arc<Grid1D>, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: Arc<Grid1D>, value: f64) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            values: vec![value; n],
        }
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.positions().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_parts(grid: Arc<Grid1D>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Σ v·dx over the periodic grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    pub(crate) fn ensure_non_negative(&self, what: &str) -> Result<()> {
        match self.values.iter().position(|&v| v < 0.0) {
            Some(j) => Err(Error::Domain(format!(
                "{what} must be non-negative; got {} at index {j}",
                self.values[j]
            ))),
            None => Ok(()),
        }
    }
}

/// Discrete `∫|f|² dx` (the atom number for the matter field).
pub fn norm_squared(f: &ComplexField) -> f64 {
    f.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid.spacing()
}

/// Spectral-domain counterpart of [`norm_squared`]: `(L / n²) Σ |F_k|²`.
pub fn spectral_norm_squared(f: &ComplexField) -> f64 {
    let n = f.grid.n_points() as f64;
    f.spectrum().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid.length() / (n * n)
}

/// Pointwise `|f|²`.
pub fn density(f: &ComplexField) -> RealField {
    RealField::from_parts(
        f.grid.clone(),
        f.values.iter().map(|z| z.norm_sqr()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn zero_field_has_zero_norm_and_density() {
        let g = make_grid(16, 3.0).unwrap();
        let f = ComplexField::zeros(g);
        assert_eq!(norm_squared(&f), 0.0);
        assert!(density(&f).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_unit_field_norm_is_box_length() {
        let g = make_grid(64, 7.5).unwrap();
        let f = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        assert!((norm_squared(&f) - 7.5).abs() < 1e-13);
    }

    #[test]
    fn normalized_gaussian_has_unit_norm() {
        // |ψ|² = exp(-x²/2σ²)/sqrt(2πσ²); box ±20σ so the tails are far below 1e-12.
        let sigma = 1.3;
        let g = make_grid(512, 40.0 * sigma).unwrap();
        let amp = (2.0 * PI * sigma * sigma).powf(-0.25);
        let f = ComplexField::from_fn(g, |x| {
            Complex64::new(amp * (-x * x / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .unwrap();
        assert!((norm_squared(&f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_phase_gives_unit_density() {
        let g = make_grid(8, 1.0).unwrap();
        let f = ComplexField::constant(g, Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        for v in density(&f).values() {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_wrong_length_and_non_finite() {
        let g = make_grid(8, 1.0).unwrap();
        assert!(matches!(
            ComplexField::new(g.clone(), vec![Complex64::default(); 7]),
            Err(Error::Shape(_))
        ));
        let mut v = vec![Complex64::default(); 8];
        v[3].im = f64::NAN;
        assert!(ComplexField::new(g.clone(), v).is_err());
        assert!(RealField::new(g, vec![f64::INFINITY; 8]).is_err());
    }

    #[test]
    fn canonical_phase_makes_peak_real_positive() {
        let g = make_grid(8, 1.0).unwrap();
        let vals: Vec<Complex64> = (0..8)
            .map(|j| Complex64::from_polar(1.0 + (j == 5) as u8 as f64, 0.3 * j as f64))
            .collect();
        let f = ComplexField::new(g, vals).unwrap().with_canonical_phase();
        let peak = f.values()[5];
        assert!(peak.im.abs() < 1e-15 && peak.re > 0.0);
        assert!((peak.re - 2.0).abs() < 1e-15);
    }
}
