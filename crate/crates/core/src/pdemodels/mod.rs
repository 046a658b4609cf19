//! NLS, KdV and mKdV on the periodic grid.
//!
//! Each model supplies its right-hand side, the linearization used in the
//! symmetry condition, its explicitly `x`- and `t`-dependent symmetry
//! generator, the four displayed conserved functionals, its Hamiltonian and a
//! pair of 2-forms. The generic checks in [`analysis`] work on any
//! [`IntegrableModel`].

pub mod analysis;
mod gardner;
mod nse;

pub use analysis::{
    calibrate_structure, hamiltonian_flow_residual, integrate, involutivity_matrix,
    ladder_drift, le_omega_check, linearized_residual, linearized_residual_with,
    second_form_rank, DriftSeries, Involutivity, LeOmegaReport, PdeTrajectory, RankProbe,
    ResidualSeries, StructureCalibration, DISPLAY_FACTOR_CANDIDATES, SCALE_CANDIDATES,
};
pub use gardner::{Kdv, Mkdv, MkdvTimeSign};
pub use nse::Nse;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fieldkit::{
    ComplexField, FieldError, Functional, Grid, GridFunction, Linear, PoissonField, RealField,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PdeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("field not supported on the interior window: tail {tail:e} exceeds {limit:e}")]
    Boundary { tail: f64, limit: f64 },
    #[error("integration diverged at t = {time} (norm growth {growth:e})")]
    Divergence { time: f64, growth: f64 },
    #[error("invalid time step dt = {dt}, T = {t_end}")]
    InvalidStep { dt: f64, t_end: f64 },
    #[error("trajectory too short: {0} snapshots")]
    ShortTrajectory(usize),
    #[error("no unique {what}: candidate residuals {residuals:?}")]
    Calibration { what: &'static str, residuals: Vec<(f64, f64)> },
    #[error("preset {preset} does not apply to {kind:?}")]
    Preset { preset: &'static str, kind: ModelKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nse,
    Kdv,
    Mkdv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Strang splitting: exact linear phase, exact pointwise nonlinear phase.
    SplitStep,
    /// Fourth-order Runge-Kutta on the interaction picture `e^{-ik³t} û`.
    IntegratingFactorRk4,
}

/// Generator samples outside `|x| <= SUPPORT_FRACTION·L` must stay below this.
pub const SUPPORT_TAIL: f64 = 1e-8;
pub const SUPPORT_FRACTION: f64 = 0.4;

/// One time step `u(t) -> u(t + dt)`.
pub type Propagator<'a, U> = Box<dyn Fn(&U) -> U + Send + Sync + 'a>;

pub trait IntegrableModel: Send + Sync {
    type Field: PoissonField + Linear;

    fn kind(&self) -> ModelKind;
    fn grid(&self) -> &Grid;
    fn scheme(&self) -> Scheme;
    fn rhs(&self, u: &Self::Field) -> Self::Field;
    /// Linearization of the right-hand side at `u` applied to `e`.
    fn linearized_rhs(&self, u: &Self::Field, e: &Self::Field) -> Self::Field;
    /// Generator without the support check.
    fn generator_unchecked(&self, u: &Self::Field, t: f64) -> Result<Self::Field, PdeError>;
    /// `I_1..I_4`.
    fn ladder(&self) -> Vec<Functional<Self::Field>>;
    fn hamiltonian_functional(&self) -> Functional<Self::Field>;
    fn propagator(&self, dt: f64) -> Propagator<'_, Self::Field>;
    /// `ω(δ1, δ2)`.
    fn canonical_form(&self, base: &Self::Field, d1: &Self::Field, d2: &Self::Field) -> Result<f64, FieldError>;
    /// The displayed `L_E ω(δ1, δ2)`.
    fn second_form(&self, base: &Self::Field, d1: &Self::Field, d2: &Self::Field) -> Result<f64, FieldError>;
    fn random_variation(&self, rng: &mut ChaCha8Rng) -> Self::Field;
    /// A functional that is not conserved, for negative controls.
    fn probe(&self) -> Functional<Self::Field>;

    fn generator(&self, u: &Self::Field, t: f64) -> Result<Self::Field, PdeError> {
        check_support(u)?;
        self.generator_unchecked(u, t)
    }

    fn invariants(&self, u: &Self::Field) -> [f64; 4] {
        let ladder = self.ladder();
        [0, 1, 2, 3].map(|m| ladder[m].eval(u))
    }

    fn hamiltonian(&self, u: &Self::Field) -> f64 {
        self.hamiltonian_functional().eval(u)
    }
}

pub fn check_support<U: GridFunction>(u: &U) -> Result<(), PdeError> {
    let tail = u.outside_sup(SUPPORT_FRACTION);
    if tail > SUPPORT_TAIL {
        return Err(PdeError::Boundary { tail, limit: SUPPORT_TAIL });
    }
    Ok(())
}

/// Named initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase")]
pub enum FieldPreset {
    /// `A e^{-x²/2σ²} e^{ik₀x}` (the phase only for complex fields).
    Gaussian { amplitude: f64, width: f64, wavenumber: f64 },
    /// KdV soliton `12c sech²(√c x)`.
    Soliton { speed: f64 },
    /// `A e^{2πimx/L}`.
    Planewave { amplitude: f64, mode: i32 },
    Constant { value: f64 },
    Zero,
}

impl FieldPreset {
    pub fn name(&self) -> &'static str {
        match self {
            FieldPreset::Gaussian { .. } => "gaussian",
            FieldPreset::Soliton { .. } => "soliton",
            FieldPreset::Planewave { .. } => "planewave",
            FieldPreset::Constant { .. } => "constant",
            FieldPreset::Zero => "zero",
        }
    }

    /// Default data for each model's checks.
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Nse => FieldPreset::Gaussian { amplitude: 0.8, width: 1.5, wavenumber: 0.5 },
            ModelKind::Kdv => FieldPreset::Gaussian { amplitude: 1.0, width: 2.0, wavenumber: 0.0 },
            ModelKind::Mkdv => FieldPreset::Gaussian { amplitude: 0.5, width: 2.0, wavenumber: 0.0 },
        }
    }

    pub fn real(&self, grid: &Grid, kind: ModelKind) -> Result<RealField, PdeError> {
        match *self {
            FieldPreset::Gaussian { amplitude, width, .. } => {
                Ok(RealField::from_fn(grid, |x| amplitude * (-x * x / (2.0 * width * width)).exp()))
            }
            FieldPreset::Soliton { speed } => Ok(kdv_soliton(grid, speed, 0.0)),
            FieldPreset::Constant { value } => Ok(RealField::from_fn(grid, |_| value)),
            FieldPreset::Zero => Ok(RealField::zeros(grid)),
            FieldPreset::Planewave { .. } => Err(PdeError::Preset { preset: self.name(), kind }),
        }
    }

    pub fn complex(&self, grid: &Grid, kind: ModelKind) -> Result<ComplexField, PdeError> {
        match *self {
            FieldPreset::Gaussian { amplitude, width, wavenumber } => Ok(ComplexField::from_fn(grid, |x| {
                Complex64::from_polar(amplitude * (-x * x / (2.0 * width * width)).exp(), wavenumber * x)
            })),
            FieldPreset::Planewave { amplitude, mode } => {
                let k = plane_wavenumber(grid, mode);
                Ok(ComplexField::from_fn(grid, |x| Complex64::from_polar(amplitude, k * x)))
            }
            FieldPreset::Constant { value } => Ok(ComplexField::from_fn(grid, |_| Complex64::new(value, 0.0))),
            FieldPreset::Zero => Ok(ComplexField::zeros(grid)),
            FieldPreset::Soliton { .. } => Err(PdeError::Preset { preset: self.name(), kind }),
        }
    }
}

pub fn plane_wavenumber(grid: &Grid, mode: i32) -> f64 {
    2.0 * std::f64::consts::PI * mode as f64 / grid.length()
}

/// `12c sech²(√c (x - 4ct))`.
pub fn kdv_soliton(grid: &Grid, speed: f64, t: f64) -> RealField {
    let r = speed.sqrt();
    RealField::from_fn(grid, |x| {
        let s = 1.0 / (r * (x - 4.0 * speed * t)).cosh();
        12.0 * speed * s * s
    })
}
