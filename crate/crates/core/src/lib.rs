//! Non-Noether symmetries of integrable models, checked numerically.
//!
//! The crate is split along the objects it manipulates:
//!
//! * [`exterior`]: finite-dimensional Poisson/exterior calculus (Schouten
//!   brackets, Lie derivatives of 2-forms, recursion-operator invariants).
//! * [`toda`]: the open n-particle Toda chain and its master symmetry.
//! * [`fieldkit`]: periodic-grid function spaces: spectral derivatives,
//!   functional gradients, field Poisson brackets, 2-forms on variations.
//! * [`pdemodels`]: NLS, KdV and mKdV with their symmetry generators and
//!   conservation-law ladders.
//! * [`harness`]: experiment configuration, verification suites and reports.

pub mod exterior;
pub mod fieldkit;
pub mod harness;
pub mod pdemodels;
pub mod toda;
