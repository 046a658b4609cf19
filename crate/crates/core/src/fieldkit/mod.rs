//! Periodic-grid function spaces.
//!
//! The real line is modelled by a periodic box `[-L/2, L/2)` with `N` uniform
//! samples `x_j = -L/2 + jL/N`. Data is assumed to decay well inside the box;
//! nonlocal quantities (`∂⁻¹`) and `x`-weighted terms are only meaningful on an
//! interior window.

mod field;
mod forms;
mod functional;
mod grid;
mod snapshot;

pub use field::{antiderivative, quadrature, quadrature_complex, spectral_derivative, Anchoring, ComplexField, GridFunction, RealField};
pub use forms::{
    complex_two_form, field_poisson_bracket, hamiltonian_flow, lie_derivative_numeric,
    random_variation_complex, random_variation_real, real_two_form, ComplexTwoForm,
    PoissonField, PoissonStructure, RealTwoForm, StructureKind,
};
pub use functional::{
    euler_lagrange_gradient, functional_gradient, functional_gradient_checked, gateaux,
    gateaux_with_step, Density, Functional, Linear,
};
pub use grid::{smooth_taper, Grid};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotField};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("invalid grid: L = {length}, N = {n} (need L > 0 and N >= 16 a power of two)")]
    InvalidGrid { length: f64, n: usize },
    #[error("grids differ")]
    GridMismatch,
    #[error("sample count {got} does not match grid size {expected}")]
    Length { expected: usize, got: usize },
    #[error("zero-mean antiderivative requested for data with mean {0:e}")]
    NonZeroMean(f64),
    #[error("complex density has imaginary part {imag:e} (real part {real:e})")]
    ConjugationSymmetry { real: f64, imag: f64 },
    #[error("functional gradient routes disagree by {0:e}")]
    GradientConsistency(f64),
    #[error("Poisson structure '{0:?}' has no calibrated scale")]
    Uncalibrated(StructureKind),
    #[error("structure {0:?} does not act on this field type")]
    StructureMismatch(StructureKind),
    #[error("two-form is not antisymmetric: ω(a,b) + ω(b,a) = {0:e}")]
    Antisymmetry(f64),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for FieldError {
    fn from(e: std::io::Error) -> Self {
        FieldError::Io(e.to_string())
    }
}
