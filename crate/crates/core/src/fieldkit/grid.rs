use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::FieldError;

/// Uniform periodic grid with cached FFT plans.
///
/// Plans are immutable and shared through `Arc`; each transform call allocates
/// its own scratch, so a `Grid` can be used from many threads at once.
#[derive(Clone)]
pub struct Grid {
    length: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("length", &self.length).field("n", &self.n).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.n == other.n
    }
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Self, FieldError> {
        if !(length > 0.0) || !length.is_finite() || n < 16 || !n.is_power_of_two() {
            return Err(FieldError::InvalidGrid { length, n });
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            length,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    /// `L = 40`, `N = 256`.
    pub fn standard() -> Self {
        Self::new(40.0, 256).expect("valid default grid")
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Angular wavenumber of FFT bin `m`; the Nyquist bin maps to `+πN/L`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let signed = if m <= self.n / 2 { m as f64 } else { m as f64 - self.n as f64 };
        2.0 * PI * signed / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.wavenumber(m)).collect()
    }

    pub fn nyquist(&self) -> usize {
        self.n / 2
    }

    pub fn same_as(&self, other: &Grid) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::GridMismatch)
        }
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, data: &[Complex64]) -> Vec<Complex64> {
        let mut buf = data.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }

    /// Indices with `|x_j| <= fraction·L`.
    pub fn window(&self, fraction: f64) -> impl Iterator<Item = usize> + '_ {
        let half = fraction * self.length;
        (0..self.n).filter(move |&j| self.x(j).abs() <= half + 1e-12)
    }
}

/// C∞ cut-off: 1 on `|x| <= inner·L`, 0 on `|x| >= outer·L`.
pub fn smooth_taper(grid: &Grid, inner: f64, outer: f64) -> Vec<f64> {
    let s = |z: f64| if z > 0.0 { (-1.0 / z).exp() } else { 0.0 };
    let (a, b) = (inner * grid.length(), outer * grid.length());
    grid.coordinates()
        .iter()
        .map(|x| {
            let y = ((x.abs() - a) / (b - a)).clamp(0.0, 1.0);
            let (l, r) = (s(1.0 - y), s(y));
            l / (l + r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(40.0, 100).is_err());
        assert!(Grid::new(40.0, 8).is_err());
        assert!(Grid::new(0.0, 64).is_err());
        assert!(Grid::new(40.0, 64).is_ok());
    }

    #[test]
    fn coordinates_and_wavenumbers() {
        let g = Grid::new(40.0, 16).unwrap();
        assert_eq!(g.x(0), -20.0);
        assert_eq!(g.x(8), 0.0);
        assert!((g.wavenumber(15) + 2.0 * PI / 40.0).abs() < 1e-15);
        assert_eq!(g.window(0.25).count(), 9);
    }

    #[test]
    fn transform_round_trip() {
        let g = Grid::new(10.0, 32).unwrap();
        let data: Vec<Complex64> = (0..32).map(|j| Complex64::new((j as f64).sin(), 0.3 * j as f64)).collect();
        let back = g.inverse(&g.forward(&data));
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn taper_profile() {
        let g = Grid::standard();
        let w = smooth_taper(&g, 0.3, 0.45);
        assert_eq!(w[128], 1.0);
        assert_eq!(w[0], 0.0);
        assert!(w.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
