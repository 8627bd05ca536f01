//! Uniform periodic grids and their discrete Fourier companion.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-length/2, length/2)`.
///
/// Points sit at `x_j = -length/2 + j * spacing`. Wavenumbers follow the
/// usual DFT ordering `0, 1, .., n/2 - 1, -n/2, .., -1` in units of
/// `2π / length`. The forward transform is unnormalised and the inverse
/// carries the `1/n` factor.
#[derive(Clone)]
pub struct Grid1D {
    n_points: usize,
    length: f64,
    spacing: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::Config {
                field: "n_points",
                reason: format!("must be a power of two >= 8, got {n_points}"),
            });
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Config {
                field: "length",
                reason: format!("must be positive and finite, got {length}"),
            });
        }
        let spacing = length / n_points as f64;
        let dk = TAU / length;
        let half = n_points / 2;
        let wavenumbers = (0..n_points)
            .map(|j| {
                if j < half {
                    dk * j as f64
                } else {
                    dk * (j as f64 - n_points as f64)
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n_points,
            length,
            spacing,
            wavenumbers,
            forward: planner.plan_fft_forward(n_points),
            inverse: planner.plan_fft_inverse(n_points),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Left edge of the box.
    pub fn origin(&self) -> f64 {
        -0.5 * self.length
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn position(&self, j: usize) -> f64 {
        self.origin() + j as f64 * self.spacing
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.position(j)).collect()
    }

    /// In-place unnormalised forward DFT.
    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n_points);
        self.forward.process(data);
    }

    /// In-place inverse DFT including the `1/n` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.n_points);
        self.inverse.process(data);
        let scale = 1.0 / self.n_points as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    /// Spectral first derivative of periodic samples. The Nyquist mode is
    /// zeroed so real input yields real output.
    pub fn derivative(&self, data: &[Complex64]) -> Vec<Complex64> {
        let mut buf = data.to_vec();
        self.forward(&mut buf);
        let nyquist = self.n_points / 2;
        for (j, (z, &k)) in buf.iter_mut().zip(&self.wavenumbers).enumerate() {
            *z = if j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                *z * Complex64::new(0.0, k)
            };
        }
        self.inverse(&mut buf);
        buf
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n_points == other.n_points && self.length == other.length
    }
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D")
            .field("n_points", &self.n_points)
            .field("length", &self.length)
            .field("spacing", &self.spacing)
            .finish()
    }
}

/// Builds a shared grid.
pub fn make_grid(n_points: usize, length: f64) -> Result<Arc<Grid1D>> {
    Grid1D::new(n_points, length).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wavenumbers_in_transform_order() {
        let g = make_grid(8, TAU).unwrap();
        assert_eq!(g.spacing(), PI / 4.0);
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (k, e) in g.wavenumbers().iter().zip(expected) {
            assert!((k - e).abs() < 1e-15, "{k} vs {e}");
        }
    }

    #[test]
    fn spacing_is_length_over_n() {
        let g = make_grid(1024, 100.0).unwrap();
        assert_eq!(g.spacing(), 0.09765625);
        assert!((g.spacing() * 1024.0 - g.length()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            make_grid(7, 1.0),
            Err(Error::Config {
                field: "n_points",
                ..
            })
        ));
        assert!(make_grid(4, 1.0).is_err());
        assert!(make_grid(12, 1.0).is_err());
        assert!(matches!(
            make_grid(16, 0.0),
            Err(Error::Config {
                field: "length",
                ..
            })
        ));
        assert!(make_grid(16, -2.0).is_err());
        assert!(make_grid(16, f64::NAN).is_err());
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = make_grid(64, TAU).unwrap();
        let f: Vec<Complex64> = g
            .positions()
            .iter()
            .map(|&x| Complex64::new((3.0 * x).sin(), 0.0))
            .collect();
        let df = g.derivative(&f);
        for (x, d) in g.positions().iter().zip(df) {
            assert!((d.re - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
            assert!(d.im.abs() < 1e-12);
        }
    }
}
