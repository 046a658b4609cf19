use num_complex::Complex64;
use rayon::prelude::*;

use super::{FieldError, Grid};

/// How the integration constant of `∂⁻¹` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchoring {
    /// Zero mode set to 0; the input must have zero mean.
    ZeroMean,
    /// `g(-L/2) = 0`; a nonzero mean contributes a linear ramp.
    LeftAnchored,
    /// Zero-mean when the input mean vanishes, left-anchored otherwise.
    Auto,
}

const MEAN_THRESHOLD: f64 = 1e-10;

/// Operations shared by real and complex grid fields.
pub trait GridFunction: Clone + Send + Sync + std::fmt::Debug + 'static {
    type Scalar: Copy + Send + Sync + std::fmt::Debug + 'static;

    fn grid(&self) -> &Grid;
    fn values(&self) -> &[Self::Scalar];
    fn with_values(grid: &Grid, values: Vec<Self::Scalar>) -> Self;
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self;
    /// `∂_x^k` by Fourier multiplication; Nyquist dropped for odd `k`.
    fn derivative(&self, k: usize) -> Self;
    /// Removes modes with `|k| > cutoff`.
    fn lowpass(&self, cutoff: f64) -> Self;
    /// Pointwise product with a real weight.
    fn weighted(&self, w: &[f64]) -> Self;
    fn antiderivative(&self, anchoring: Anchoring) -> Result<Self, FieldError>;
    fn abs_at(&self, j: usize) -> f64;
    /// Central-difference gradient of `f` with respect to each sample, divided by `dx`.
    fn coordinate_gradient(&self, f: &(dyn Fn(&Self) -> f64 + Sync), step: f64) -> Self;
    /// Derivative of a pointwise density with respect to jet component `k`
    /// (Wirtinger `∂/∂z̄` for complex scalars).
    fn density_partial(f: &(dyn Fn(&[Self::Scalar]) -> f64 + Sync), jet: &[Self::Scalar], k: usize) -> Self::Scalar;
    fn to_complex(&self) -> Vec<Complex64>;
    /// `∫ Re(f)`-style quadrature of a pointwise real function of the samples.
    fn integrate_density(grid: &Grid, values: &[f64]) -> f64 {
        grid.dx() * values.iter().sum::<f64>()
    }

    fn zeros(grid: &Grid) -> Self;

    fn n(&self) -> usize {
        self.values().len()
    }

    fn sup_norm(&self) -> f64 {
        (0..self.n()).map(|j| self.abs_at(j)).fold(0.0, f64::max)
    }

    /// Sup norm over `|x| <= fraction·L`.
    fn window_sup(&self, fraction: f64) -> f64 {
        self.grid().window(fraction).map(|j| self.abs_at(j)).fold(0.0, f64::max)
    }

    /// Largest sample magnitude outside `|x| <= fraction·L`.
    fn outside_sup(&self, fraction: f64) -> f64 {
        let half = fraction * self.grid().length();
        (0..self.n())
            .filter(|&j| self.grid().x(j).abs() > half)
            .map(|j| self.abs_at(j))
            .fold(0.0, f64::max)
    }

    fn is_finite(&self) -> bool {
        (0..self.n()).all(|j| self.abs_at(j).is_finite())
    }

    fn scaled(&self, a: f64) -> Self {
        Self::lincomb(a, self, 0.0, self)
    }

    fn add(&self, other: &Self) -> Self {
        Self::lincomb(1.0, self, 1.0, other)
    }

    fn sub(&self, other: &Self) -> Self {
        Self::lincomb(1.0, self, -1.0, other)
    }

    /// Samples of `∂_x^k f` for `k = 0..=order`.
    fn jets(&self, order: usize) -> Vec<Self> {
        let mut out = vec![self.clone()];
        for k in 1..=order {
            out.push(self.derivative(k));
        }
        out
    }
}

fn spectral_apply(
    grid: &Grid,
    data: &[Complex64],
    multiplier: impl Fn(usize, f64) -> Complex64,
) -> Vec<Complex64> {
    let mut spec = grid.forward(data);
    for (m, v) in spec.iter_mut().enumerate() {
        *v *= multiplier(m, grid.wavenumber(m));
    }
    grid.inverse(&spec)
}

fn derivative_multiplier(grid: &Grid, k: usize) -> impl Fn(usize, f64) -> Complex64 + '_ {
    move |m, wave| {
        if k % 2 == 1 && m == grid.nyquist() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, wave).powu(k as u32)
        }
    }
}

fn lowpass_multiplier(cutoff: f64) -> impl Fn(usize, f64) -> Complex64 {
    move |_, wave| {
        if wave.abs() > cutoff {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }
}

fn integrate_samples(
    grid: &Grid,
    data: &[Complex64],
    anchoring: Anchoring,
) -> Result<Vec<Complex64>, FieldError> {
    let mean = data.iter().sum::<Complex64>() / data.len() as f64;
    let anchoring = match anchoring {
        Anchoring::Auto if mean.norm() < MEAN_THRESHOLD => Anchoring::ZeroMean,
        Anchoring::Auto => Anchoring::LeftAnchored,
        other => other,
    };
    if anchoring == Anchoring::ZeroMean && mean.norm() >= MEAN_THRESHOLD {
        return Err(FieldError::NonZeroMean(mean.norm()));
    }
    let nyquist = grid.nyquist();
    let mut g = spectral_apply(grid, data, |m, wave| {
        if m == 0 || m == nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0 / wave)
        }
    });
    if anchoring == Anchoring::LeftAnchored {
        let g0 = g[0];
        let half = 0.5 * grid.length();
        for (j, v) in g.iter_mut().enumerate() {
            *v += mean * (grid.x(j) + half) - g0;
        }
    }
    Ok(g)
}

/// Real samples on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: &Grid, samples: Vec<f64>) -> Result<Self, FieldError> {
        if samples.len() != grid.n() {
            return Err(FieldError::Length { expected: grid.n(), got: samples.len() });
        }
        Ok(Self { grid: grid.clone(), samples })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: grid.clone(), samples: grid.coordinates().into_iter().map(f).collect() }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Pointwise map of the samples.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid.clone(), samples: self.samples.iter().map(|v| f(*v)).collect() }
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn integral(&self) -> f64 {
        quadrature(self)
    }
}

impl GridFunction for RealField {
    type Scalar = f64;

    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn values(&self) -> &[f64] {
        &self.samples
    }
    fn with_values(grid: &Grid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n());
        Self { grid: grid.clone(), samples: values }
    }
    fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), samples: vec![0.0; grid.n()] }
    }
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        Self {
            grid: x.grid.clone(),
            samples: x.samples.iter().zip(&y.samples).map(|(u, v)| a * u + b * v).collect(),
        }
    }
    fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let out = spectral_apply(&self.grid, &self.to_complex(), derivative_multiplier(&self.grid, k));
        Self { grid: self.grid.clone(), samples: out.iter().map(|c| c.re).collect() }
    }
    fn lowpass(&self, cutoff: f64) -> Self {
        let out = spectral_apply(&self.grid, &self.to_complex(), lowpass_multiplier(cutoff));
        Self { grid: self.grid.clone(), samples: out.iter().map(|c| c.re).collect() }
    }
    fn weighted(&self, w: &[f64]) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().zip(w).map(|(a, b)| a * b).collect(),
        }
    }
    fn antiderivative(&self, anchoring: Anchoring) -> Result<Self, FieldError> {
        let g = integrate_samples(&self.grid, &self.to_complex(), anchoring)?;
        Ok(Self { grid: self.grid.clone(), samples: g.iter().map(|c| c.re).collect() })
    }
    fn abs_at(&self, j: usize) -> f64 {
        self.samples[j].abs()
    }
    fn coordinate_gradient(&self, f: &(dyn Fn(&Self) -> f64 + Sync), step: f64) -> Self {
        let dx = self.grid.dx();
        let samples = (0..self.n())
            .into_par_iter()
            .map(|j| {
                let mut v = self.clone();
                let x0 = self.samples[j];
                let h = (x0 + step) - x0;
                v.samples[j] = x0 + h;
                let plus = f(&v);
                v.samples[j] = x0 - h;
                let minus = f(&v);
                (plus - minus) / (2.0 * h * dx)
            })
            .collect();
        Self { grid: self.grid.clone(), samples }
    }
    fn density_partial(f: &(dyn Fn(&[f64]) -> f64 + Sync), jet: &[f64], k: usize) -> f64 {
        let mut y = jet.to_vec();
        let h = f64::EPSILON.cbrt() * jet[k].abs().max(1.0);
        y[k] = jet[k] + h;
        let plus = f(&y);
        y[k] = jet[k] - h;
        let minus = f(&y);
        (plus - minus) / (2.0 * h)
    }
    fn to_complex(&self) -> Vec<Complex64> {
        self.samples.iter().map(|v| Complex64::new(*v, 0.0)).collect()
    }
}

/// Complex samples `ψ_j`; `ψ̄` is always the pointwise conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: &Grid, samples: Vec<Complex64>) -> Result<Self, FieldError> {
        if samples.len() != grid.n() {
            return Err(FieldError::Length { expected: grid.n(), got: samples.len() });
        }
        Ok(Self { grid: grid.clone(), samples })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self { grid: grid.clone(), samples: grid.coordinates().into_iter().map(f).collect() }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid.clone(), samples: self.samples.iter().map(|v| f(*v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// `|ψ|²` as a real field.
    pub fn modulus_squared(&self) -> RealField {
        RealField::with_values(&self.grid, self.samples.iter().map(|z| z.norm_sqr()).collect())
    }

    pub fn real_part(&self) -> RealField {
        RealField::with_values(&self.grid, self.samples.iter().map(|z| z.re).collect())
    }

    pub fn from_real(f: &RealField) -> Self {
        Self::with_values(f.grid(), f.to_complex())
    }

    /// Multiplies by `c`.
    pub fn times(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }
}

impl GridFunction for ComplexField {
    type Scalar = Complex64;

    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.samples
    }
    fn with_values(grid: &Grid, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.n());
        Self { grid: grid.clone(), samples: values }
    }
    fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), samples: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        Self {
            grid: x.grid.clone(),
            samples: x.samples.iter().zip(&y.samples).map(|(u, v)| u * a + v * b).collect(),
        }
    }
    fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let samples = spectral_apply(&self.grid, &self.samples, derivative_multiplier(&self.grid, k));
        Self { grid: self.grid.clone(), samples }
    }
    fn lowpass(&self, cutoff: f64) -> Self {
        let samples = spectral_apply(&self.grid, &self.samples, lowpass_multiplier(cutoff));
        Self { grid: self.grid.clone(), samples }
    }
    fn weighted(&self, w: &[f64]) -> Self {
        Self {
            grid: self.grid.clone(),
            samples: self.samples.iter().zip(w).map(|(a, b)| a * b).collect(),
        }
    }
    fn antiderivative(&self, anchoring: Anchoring) -> Result<Self, FieldError> {
        let samples = integrate_samples(&self.grid, &self.samples, anchoring)?;
        Ok(Self { grid: self.grid.clone(), samples })
    }
    fn abs_at(&self, j: usize) -> f64 {
        self.samples[j].norm()
    }
    fn coordinate_gradient(&self, f: &(dyn Fn(&Self) -> f64 + Sync), step: f64) -> Self {
        let dx = self.grid.dx();
        let samples = (0..self.n())
            .into_par_iter()
            .map(|j| {
                let mut v = self.clone();
                let z0 = self.samples[j];
                let mut diff = |dir: Complex64| {
                    v.samples[j] = z0 + dir * step;
                    let plus = f(&v);
                    v.samples[j] = z0 - dir * step;
                    let minus = f(&v);
                    (plus - minus) / (2.0 * step)
                };
                let da = diff(Complex64::new(1.0, 0.0));
                let db = diff(Complex64::new(0.0, 1.0));
                Complex64::new(da, db) * (0.5 / dx)
            })
            .collect();
        Self { grid: self.grid.clone(), samples }
    }
    fn density_partial(
        f: &(dyn Fn(&[Complex64]) -> f64 + Sync),
        jet: &[Complex64],
        k: usize,
    ) -> Complex64 {
        let mut y = jet.to_vec();
        let h = f64::EPSILON.cbrt() * jet[k].norm().max(1.0);
        let mut diff = |dir: Complex64| {
            y[k] = jet[k] + dir * h;
            let plus = f(&y);
            y[k] = jet[k] - dir * h;
            let minus = f(&y);
            (plus - minus) / (2.0 * h)
        };
        let da = diff(Complex64::new(1.0, 0.0));
        let db = diff(Complex64::new(0.0, 1.0));
        Complex64::new(da, db) * 0.5
    }
    fn to_complex(&self) -> Vec<Complex64> {
        self.samples.clone()
    }
}

pub fn spectral_derivative<F: GridFunction>(f: &F, k: usize) -> F {
    f.derivative(k)
}

pub fn antiderivative<F: GridFunction>(f: &F, anchoring: Anchoring) -> Result<F, FieldError> {
    f.antiderivative(anchoring)
}

/// Rectangle rule `L/N · Σ f_j`.
pub fn quadrature(f: &RealField) -> f64 {
    f.grid().dx() * f.samples().iter().sum::<f64>()
}

/// Rectangle rule for a density that should be real; rejects an imaginary
/// residue above `1e-10` (relative to `max(1, ∫|f|)`).
pub fn quadrature_complex(f: &ComplexField) -> Result<f64, FieldError> {
    let dx = f.grid().dx();
    let total: Complex64 = f.samples().iter().sum::<Complex64>() * dx;
    let scale = (dx * f.samples().iter().map(|z| z.norm()).sum::<f64>()).max(1.0);
    if total.im.abs() > 1e-10 * scale {
        return Err(FieldError::ConjugationSymmetry { real: total.re, imag: total.im });
    }
    Ok(total.re)
}
