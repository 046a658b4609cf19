//! Finite-dimensional exterior and Poisson calculus on `R^{2n}`.
//!
//! Coordinates are block ordered, `z = (q_1..q_n, p_1..p_n)`; every matrix in
//! this module is indexed against that ordering. The canonical bivector has
//! `W[n+i][i] = 1`, `W[i][n+i] = -1`, so that `{f, g} = ∇f · W · ∇g` gives
//! `df/dt = {h, f}` for Hamilton's equations.

mod brackets;
mod fd;
mod flow;
mod invariants;

pub use brackets::{
    exterior_derivative_two_form, lie_derivative_two_form, poisson_bracket, schouten_bb,
    schouten_vb, HamiltonianField, SchoutenField,
};
pub use fd::{Differencer, Stencil};
pub use flow::flow;
pub use invariants::{
    calibrate_conventions, elementary_symmetric, invert_bivector, newton_recurrence,
    spectral_invariants, spectral_invariants_at, Calibration, CalibrationError, CalibrationHooks, CalibrationRecord,
    CandidateResidual, InvariantLadder, Normalization, Pairing, RecurrenceVariant, Sign,
    SpectralInvariants,
};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("phase point needs an even, positive number of coordinates, got {0}")]
    BadDimension(usize),
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Mismatch { expected: usize, got: usize },
    #[error("flow diverged at step {step} (group parameter {a})")]
    Divergence { step: usize, a: f64 },
    #[error("bivector is degenerate (condition number {condition:e})")]
    Degenerate { condition: f64 },
    #[error("recursion spectrum does not pair: gap {gap:e} exceeds {tolerance:e}")]
    Pairing { gap: f64, tolerance: f64 },
    #[error("order {order} is outside 1..={max}")]
    Order { order: usize, max: usize },
}

/// A point `(q, p)` of a `2n`-dimensional phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    z: Vec<f64>,
}

impl PhasePoint {
    pub fn new(z: Vec<f64>) -> Result<Self, ExteriorError> {
        if z.is_empty() || z.len() % 2 != 0 {
            return Err(ExteriorError::BadDimension(z.len()));
        }
        if let Some(i) = z.iter().position(|v| !v.is_finite()) {
            return Err(ExteriorError::NonFinite(i));
        }
        Ok(Self { z })
    }

    pub fn from_qp(q: &[f64], p: &[f64]) -> Result<Self, ExteriorError> {
        if q.len() != p.len() {
            return Err(ExteriorError::Mismatch { expected: q.len(), got: p.len() });
        }
        Self::new(q.iter().chain(p).copied().collect())
    }

    /// Uniform draw from `[-1, 1]^{2n}`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let z = (0..2 * n.max(1)).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self { z }
    }

    /// `count` uniform draws from a ChaCha8 stream seeded with `seed`.
    pub fn random_batch(n: usize, count: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(n, &mut rng)).collect()
    }

    pub fn n(&self) -> usize {
        self.z.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.z[..self.n()]
    }

    pub fn p(&self) -> &[f64] {
        &self.z[self.n()..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.z
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.z
    }
}

/// Antisymmetric square matrix; antisymmetry is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymMatrix(DMatrix<f64>);

impl AntisymMatrix {
    /// Keeps the antisymmetric part `(m - mᵀ)/2`.
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "antisymmetric matrix must be square");
        let d = m.nrows();
        let mut out = DMatrix::zeros(d, d);
        for a in 0..d {
            for b in (a + 1)..d {
                let v = 0.5 * (m[(a, b)] - m[(b, a)]);
                out[(a, b)] = v;
                out[(b, a)] = -v;
            }
        }
        Self(out)
    }

    /// Builds from the strict upper triangle `f(a, b)`, `a < b`.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in (a + 1)..dim {
                let v = f(a, b);
                out[(a, b)] = v;
                out[(b, a)] = -v;
            }
        }
        Self(out)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.0[(a, b)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// Row-major flattening, used when differencing matrix-valued maps.
    pub fn flatten(&self) -> Vec<f64> {
        let d = self.dim();
        let mut v = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                v.push(self.0[(a, b)]);
            }
        }
        v
    }
}

/// Totally antisymmetric rank-3 array.
#[derive(Debug, Clone, PartialEq)]
pub struct Trivector {
    dim: usize,
    data: Vec<f64>,
}

impl Trivector {
    /// Fills every permutation from the ordered components `f(a, b, c)`, `a < b < c`.
    pub fn from_ordered(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim * dim];
        let idx = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
        for a in 0..dim {
            for b in (a + 1)..dim {
                for c in (b + 1)..dim {
                    let v = f(a, b, c);
                    data[idx(a, b, c)] = v;
                    data[idx(b, c, a)] = v;
                    data[idx(c, a, b)] = v;
                    data[idx(b, a, c)] = -v;
                    data[idx(a, c, b)] = -v;
                    data[idx(c, b, a)] = -v;
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Time-dependent vector field on phase space.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64, z: &[f64]) -> DVector<f64>;
    fn is_time_dependent(&self) -> bool {
        false
    }
}

pub trait BivectorField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[f64]) -> AntisymMatrix;
}

pub trait TwoFormField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[f64]) -> AntisymMatrix;
}

/// Vector field backed by a closure.
pub struct FnVectorField<F> {
    dim: usize,
    time_dependent: bool,
    f: F,
}

impl<F> FnVectorField<F>
where
    F: Fn(f64, &[f64]) -> DVector<f64> + Send + Sync,
{
    pub fn new(dim: usize, time_dependent: bool, f: F) -> Self {
        Self { dim, time_dependent, f }
    }
}

impl<F> VectorField for FnVectorField<F>
where
    F: Fn(f64, &[f64]) -> DVector<f64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, t: f64, z: &[f64]) -> DVector<f64> {
        (self.f)(t, z)
    }
    fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }
}

#[derive(Debug, Clone)]
pub struct ConstantVectorField(pub DVector<f64>);

impl VectorField for ConstantVectorField {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval(&self, _t: f64, _z: &[f64]) -> DVector<f64> {
        self.0.clone()
    }
}

#[derive(Debug, Clone)]
pub struct ConstantBivector(pub AntisymMatrix);

impl BivectorField for ConstantBivector {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, _z: &[f64]) -> AntisymMatrix {
        self.0.clone()
    }
}

#[derive(Debug, Clone)]
pub struct ConstantTwoForm(pub AntisymMatrix);

impl TwoFormField for ConstantTwoForm {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, _z: &[f64]) -> AntisymMatrix {
        self.0.clone()
    }
}

/// Two-form backed by a closure.
pub struct FnTwoForm<F> {
    dim: usize,
    f: F,
}

impl<F> FnTwoForm<F>
where
    F: Fn(&[f64]) -> AntisymMatrix + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> TwoFormField for FnTwoForm<F>
where
    F: Fn(&[f64]) -> AntisymMatrix + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[f64]) -> AntisymMatrix {
        (self.f)(z)
    }
}

/// Canonical bivector of `R^{2n}`: `W[n+i][i] = 1`.
pub fn canonical_bivector(n: usize) -> AntisymMatrix {
    AntisymMatrix::from_upper(2 * n, |a, b| if b == a + n { -1.0 } else { 0.0 })
}

/// Homogeneous cubic field `E^a = Σ C_{abcd} z_b z_c z_d` with seeded
/// coefficients in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct CubicField {
    dim: usize,
    coeffs: Vec<f64>,
}

impl CubicField {
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..dim.pow(4)).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self { dim, coeffs }
    }
}

impl VectorField for CubicField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, _t: f64, z: &[f64]) -> DVector<f64> {
        let d = self.dim;
        DVector::from_fn(d, |a, _| {
            let mut s = 0.0;
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        s += self.coeffs[((a * d + b) * d + c) * d + e] * z[b] * z[c] * z[e];
                    }
                }
            }
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_point_validation() {
        assert!(PhasePoint::new(vec![]).is_err());
        assert!(PhasePoint::new(vec![1.0, 2.0, 3.0]).is_err());
        assert_eq!(
            PhasePoint::new(vec![0.0, f64::NAN]),
            Err(ExteriorError::NonFinite(1))
        );
        let z = PhasePoint::from_qp(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(z.n(), 2);
        assert_eq!(z.p(), &[3.0, 4.0]);
    }

    #[test]
    fn antisymmetrization_is_exact() {
        let m = DMatrix::from_fn(5, 5, |a, b| (a as f64 + 0.3).sin() * (b as f64 * 1.7).exp());
        let w = AntisymMatrix::from_matrix(m);
        for a in 0..5 {
            assert_eq!(w.get(a, a), 0.0);
            for b in 0..5 {
                assert_eq!(w.get(a, b), -w.get(b, a));
            }
        }
    }

    #[test]
    fn trivector_permutations() {
        let t = Trivector::from_ordered(4, |a, b, c| (a + 10 * b + 100 * c) as f64);
        assert_eq!(t.get(0, 1, 2), 210.0);
        assert_eq!(t.get(2, 0, 1), 210.0);
        assert_eq!(t.get(1, 0, 2), -210.0);
        assert_eq!(t.get(1, 1, 3), 0.0);
    }

    #[test]
    fn canonical_bivector_layout() {
        let w = canonical_bivector(2);
        assert_eq!(w.get(2, 0), 1.0);
        assert_eq!(w.get(0, 2), -1.0);
        assert_eq!(w.get(3, 1), 1.0);
        assert_eq!(w.get(0, 1), 0.0);
    }
}
