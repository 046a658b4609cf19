//! Focusing nonlinear Schrödinger equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::{IntegrableModel, ModelKind, PdeError, Propagator, Scheme};
use crate::fieldkit::{
    complex_two_form, quadrature, random_variation_complex, Anchoring, ComplexField,
    ComplexTwoForm, FieldError, Functional, Grid, GridFunction, RealField,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `ψ_t = i(ψ_xx + 2ψ²ψ̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Nse {
    grid: Grid,
}

impl Nse {
    pub fn new(grid: Grid) -> Self {
        Self { grid }
    }
}

fn pointwise<const K: usize>(
    grid: &Grid,
    jets: [&[Complex64]; K],
    f: impl Fn(f64, [Complex64; K]) -> Complex64,
) -> ComplexField {
    let x = grid.coordinates();
    let samples = (0..grid.n()).map(|j| f(x[j], jets.map(|s| s[j]))).collect();
    ComplexField::with_values(grid, samples)
}

struct SplitStep {
    grid: Grid,
    dt: f64,
    half: Vec<Complex64>,
}

impl SplitStep {
    fn new(grid: &Grid, dt: f64) -> Self {
        let half = grid
            .wavenumbers()
            .iter()
            .map(|k| Complex64::from_polar(1.0, -k * k * dt / 2.0))
            .collect();
        Self { grid: grid.clone(), dt, half }
    }

    fn linear(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let spec: Vec<Complex64> = self.grid.forward(psi).iter().zip(&self.half).map(|(a, b)| a * b).collect();
        self.grid.inverse(&spec)
    }

    fn step(&self, psi: &ComplexField) -> ComplexField {
        let mut p = self.linear(psi.samples());
        for z in p.iter_mut() {
            *z *= Complex64::from_polar(1.0, 2.0 * z.norm_sqr() * self.dt);
        }
        ComplexField::with_values(&self.grid, self.linear(&p))
    }
}

impl IntegrableModel for Nse {
    type Field = ComplexField;

    fn kind(&self) -> ModelKind {
        ModelKind::Nse
    }
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn scheme(&self) -> Scheme {
        Scheme::SplitStep
    }

    fn rhs(&self, psi: &ComplexField) -> ComplexField {
        let p2 = psi.derivative(2);
        pointwise(&self.grid, [psi.samples(), p2.samples()], |_, [p, p2]| I * (p2 + 2.0 * p * p * p.conj()))
    }

    fn linearized_rhs(&self, psi: &ComplexField, e: &ComplexField) -> ComplexField {
        let e2 = e.derivative(2);
        pointwise(&self.grid, [psi.samples(), e.samples(), e2.samples()], |_, [p, e, e2]| {
            I * (e2 + 2.0 * p * p * e.conj() + 4.0 * p.norm_sqr() * e)
        })
    }

    fn generator_unchecked(&self, psi: &ComplexField, t: f64) -> Result<ComplexField, PdeError> {
        let d = psi.jets(3);
        let phi = psi.modulus_squared().antiderivative(Anchoring::LeftAnchored)?;
        let phi = ComplexField::from_real(&phi);
        Ok(pointwise(
            &self.grid,
            [d[0].samples(), d[1].samples(), d[2].samples(), d[3].samples(), phi.samples()],
            |x, [p, p1, p2, p3, phi]| {
                let pp = p * p.conj();
                I * (p1 + x / 2.0 * p2 + p * phi + x * p * pp) - t * (p3 + 6.0 * pp * p1)
            },
        ))
    }

    fn ladder(&self) -> Vec<Functional<ComplexField>> {
        vec![
            Functional::from_density("I1", 0, |j: &[Complex64]| 2.0 * j[0].norm_sqr()),
            Functional::from_density("I2", 1, |j: &[Complex64]| {
                (I * (j[1].conj() * j[0] - j[1] * j[0].conj())).re
            }),
            Functional::from_density("I3", 1, |j: &[Complex64]| {
                2.0 * (j[0].norm_sqr().powi(2) - j[1].norm_sqr())
            }),
            Functional::from_density("I4", 2, |j: &[Complex64]| {
                let (p, p1, p2) = (j[0], j[1], j[2]);
                let (pb, pb1, pb2) = (p.conj(), p1.conj(), p2.conj());
                (I * (pb1 * p2 - p1 * pb2) + 3.0 * I * (pb * p * p * pb1 - p * pb * pb * p1)).re
            }),
        ]
    }

    fn hamiltonian_functional(&self) -> Functional<ComplexField> {
        Functional::from_density("h", 1, |j: &[Complex64]| j[0].norm_sqr().powi(2) - j[1].norm_sqr())
    }

    fn propagator(&self, dt: f64) -> Propagator<'_, ComplexField> {
        let stepper = SplitStep::new(&self.grid, dt);
        Box::new(move |psi| stepper.step(psi))
    }

    fn canonical_form(&self, base: &ComplexField, d1: &ComplexField, d2: &ComplexField) -> Result<f64, FieldError> {
        complex_two_form(ComplexTwoForm::Canonical, base, d1, d2)
    }

    fn second_form(&self, base: &ComplexField, d1: &ComplexField, d2: &ComplexField) -> Result<f64, FieldError> {
        complex_two_form(ComplexTwoForm::NseSecond, base, d1, d2)
    }

    fn random_variation(&self, rng: &mut ChaCha8Rng) -> ComplexField {
        random_variation_complex(&self.grid, rng)
    }

    fn probe(&self) -> Functional<ComplexField> {
        let w = RealField::from_fn(&self.grid, |x| (2.0 * PI * x / self.grid.length()).cos());
        Functional::new("cos_probe", move |psi: &ComplexField| quadrature(&w.mul(&psi.modulus_squared())))
    }
}
