//! KdV and mKdV: real fields with the Gardner bracket.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{IntegrableModel, ModelKind, PdeError, Propagator, Scheme};
use crate::fieldkit::{
    quadrature, random_variation_real, real_two_form, Anchoring, FieldError, Functional, Grid, GridFunction,
    RealField, RealTwoForm,
};

/// `u_t = -(u_xxx + u u_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kdv {
    grid: Grid,
}

impl Kdv {
    pub fn new(grid: Grid) -> Self {
        Self { grid }
    }
}

/// Sign of the explicit-`t` term of the mKdV generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MkdvTimeSign {
    /// `+(3t/2)(...)`, the sign that satisfies the symmetry condition.
    #[default]
    Corrected,
    /// `-(3t/2)(...)`.
    AsPrinted,
}

/// `u_t = -(u_xxx - 6u² u_x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mkdv {
    grid: Grid,
    pub time_sign: MkdvTimeSign,
}

impl Mkdv {
    pub fn new(grid: Grid) -> Self {
        Self { grid, time_sign: MkdvTimeSign::Corrected }
    }

    pub fn with_time_sign(grid: Grid, time_sign: MkdvTimeSign) -> Self {
        Self { grid, time_sign }
    }
}

/// `û_t = ik³ û + c·ik·F(u^p)`, stepped with RK4 in the interaction picture.
struct IfRk4 {
    grid: Grid,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    nonlinear: Vec<Complex64>,
    power: i32,
}

impl IfRk4 {
    fn new(grid: &Grid, dt: f64, coefficient: f64, power: i32) -> Self {
        let nyquist = grid.nyquist();
        let odd_k: Vec<f64> = (0..grid.n())
            .map(|m| if m == nyquist { 0.0 } else { grid.wavenumber(m) })
            .collect();
        let half: Vec<Complex64> = odd_k
            .iter()
            .map(|k| Complex64::from_polar(1.0, k * k * k * dt / 2.0))
            .collect();
        Self {
            grid: grid.clone(),
            dt,
            full: half.iter().map(|e| e * e).collect(),
            half,
            nonlinear: odd_k.iter().map(|k| Complex64::new(0.0, coefficient * k)).collect(),
            power,
        }
    }

    fn n(&self, spec: &[Complex64]) -> Vec<Complex64> {
        let u = self.grid.inverse(spec);
        let g: Vec<Complex64> = u.iter().map(|z| Complex64::new(z.re.powi(self.power), 0.0)).collect();
        self.grid.forward(&g).iter().zip(&self.nonlinear).map(|(a, b)| a * b).collect()
    }

    fn step(&self, u: &RealField) -> RealField {
        let dt = self.dt;
        let u0 = self.grid.forward(&u.to_complex());
        let (e1, e2) = (&self.half, &self.full);
        let a = self.n(&u0);
        let sb: Vec<Complex64> = (0..u0.len()).map(|m| e1[m] * (u0[m] + 0.5 * dt * a[m])).collect();
        let b = self.n(&sb);
        let sc: Vec<Complex64> = (0..u0.len()).map(|m| e1[m] * u0[m] + 0.5 * dt * b[m]).collect();
        let c = self.n(&sc);
        let sd: Vec<Complex64> = (0..u0.len()).map(|m| e2[m] * u0[m] + dt * e1[m] * c[m]).collect();
        let d = self.n(&sd);
        let next: Vec<Complex64> = (0..u0.len())
            .map(|m| {
                e2[m] * u0[m] + dt / 6.0 * (e2[m] * a[m] + 2.0 * e1[m] * (b[m] + c[m]) + d[m])
            })
            .collect();
        let samples = self.grid.inverse(&next).iter().map(|z| z.re).collect();
        RealField::with_values(&self.grid, samples)
    }
}

fn cosine_probe(grid: &Grid) -> Functional<RealField> {
    let w = RealField::from_fn(grid, |x| (2.0 * PI * x / grid.length()).cos());
    Functional::new("cos_probe", move |u: &RealField| quadrature(&w.mul(u)))
}

fn pointwise<const K: usize>(
    grid: &Grid,
    jets: [&[f64]; K],
    f: impl Fn(f64, [f64; K]) -> f64,
) -> RealField {
    let x = grid.coordinates();
    let samples = (0..grid.n()).map(|j| f(x[j], jets.map(|s| s[j]))).collect();
    RealField::with_values(grid, samples)
}

impl IntegrableModel for Kdv {
    type Field = RealField;

    fn kind(&self) -> ModelKind {
        ModelKind::Kdv
    }
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn scheme(&self) -> Scheme {
        Scheme::IntegratingFactorRk4
    }

    fn rhs(&self, u: &RealField) -> RealField {
        let (u1, u3) = (u.derivative(1), u.derivative(3));
        pointwise(&self.grid, [u.samples(), u1.samples(), u3.samples()], |_, [u, u1, u3]| -(u3 + u * u1))
    }

    fn linearized_rhs(&self, u: &RealField, e: &RealField) -> RealField {
        let (u1, e1, e3) = (u.derivative(1), e.derivative(1), e.derivative(3));
        pointwise(
            &self.grid,
            [u.samples(), u1.samples(), e.samples(), e1.samples(), e3.samples()],
            |_, [u, u1, e, e1, e3]| -(e3 + u1 * e + u * e1),
        )
    }

    fn generator_unchecked(&self, u: &RealField, t: f64) -> Result<RealField, PdeError> {
        let d = u.jets(5);
        let v = u.antiderivative(Anchoring::LeftAnchored)?;
        Ok(pointwise(
            &self.grid,
            [
                d[0].samples(),
                d[1].samples(),
                d[2].samples(),
                d[3].samples(),
                d[5].samples(),
                v.samples(),
            ],
            |x, [u, u1, u2, u3, u5, v]| {
                0.5 * u2 + u * u / 6.0 + u1 * v / 24.0 + x / 8.0 * (u3 + u * u1)
                    - t / 16.0 * (6.0 * u5 + 20.0 * u1 * u2 + 10.0 * u * u3 + 5.0 * u * u * u1)
            },
        ))
    }

    fn ladder(&self) -> Vec<Functional<RealField>> {
        vec![
            Functional::from_density("I1", 0, |j: &[f64]| 2.0 / 3.0 * j[0]),
            Functional::from_density("I2", 0, |j: &[f64]| 4.0 / 9.0 * j[0] * j[0]),
            Functional::from_density("I3", 1, |j: &[f64]| 8.0 / 9.0 * (j[0].powi(3) / 3.0 - j[1] * j[1])),
            Functional::from_density("I4", 2, |j: &[f64]| {
                let (u, u1, u2) = (j[0], j[1], j[2]);
                64.0 / 45.0 * (5.0 / 36.0 * u.powi(4) - 5.0 / 3.0 * u * u1 * u1 + u2 * u2)
            }),
        ]
    }

    fn hamiltonian_functional(&self) -> Functional<RealField> {
        Functional::from_density("h", 1, |j: &[f64]| j[1] * j[1] - j[0].powi(3) / 3.0)
    }

    fn propagator(&self, dt: f64) -> Propagator<'_, RealField> {
        let stepper = IfRk4::new(&self.grid, dt, -0.5, 2);
        Box::new(move |u| stepper.step(u))
    }

    fn canonical_form(&self, base: &RealField, d1: &RealField, d2: &RealField) -> Result<f64, FieldError> {
        real_two_form(RealTwoForm::Canonical, base, d1, d2)
    }

    fn second_form(&self, base: &RealField, d1: &RealField, d2: &RealField) -> Result<f64, FieldError> {
        real_two_form(RealTwoForm::KdvSecond, base, d1, d2)
    }

    fn random_variation(&self, rng: &mut ChaCha8Rng) -> RealField {
        random_variation_real(&self.grid, rng)
    }

    fn probe(&self) -> Functional<RealField> {
        cosine_probe(&self.grid)
    }
}

impl IntegrableModel for Mkdv {
    type Field = RealField;

    fn kind(&self) -> ModelKind {
        ModelKind::Mkdv
    }
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn scheme(&self) -> Scheme {
        Scheme::IntegratingFactorRk4
    }

    fn rhs(&self, u: &RealField) -> RealField {
        let (u1, u3) = (u.derivative(1), u.derivative(3));
        pointwise(&self.grid, [u.samples(), u1.samples(), u3.samples()], |_, [u, u1, u3]| {
            -(u3 - 6.0 * u * u * u1)
        })
    }

    fn linearized_rhs(&self, u: &RealField, e: &RealField) -> RealField {
        let (u1, e1, e3) = (u.derivative(1), e.derivative(1), e.derivative(3));
        pointwise(
            &self.grid,
            [u.samples(), u1.samples(), e.samples(), e1.samples(), e3.samples()],
            |_, [u, u1, e, e1, e3]| -(e3 - 12.0 * u * u1 * e - 6.0 * u * u * e1),
        )
    }

    fn generator_unchecked(&self, u: &RealField, t: f64) -> Result<RealField, PdeError> {
        let d = u.jets(5);
        let w = u.mul(u).antiderivative(Anchoring::LeftAnchored)?;
        let sign = match self.time_sign {
            MkdvTimeSign::Corrected => 1.0,
            MkdvTimeSign::AsPrinted => -1.0,
        };
        Ok(pointwise(
            &self.grid,
            [
                d[0].samples(),
                d[1].samples(),
                d[2].samples(),
                d[3].samples(),
                d[5].samples(),
                w.samples(),
            ],
            |x, [u, u1, u2, u3, u5, w]| {
                let u_sq = u * u;
                -1.5 * u2 + 2.0 * u_sq * u + u1 * w - x / 2.0 * (u3 - 6.0 * u_sq * u1)
                    + sign
                        * 1.5
                        * t
                        * (u5 - 10.0 * u_sq * u3 - 40.0 * u * u1 * u2 - 10.0 * u1.powi(3)
                            + 30.0 * u_sq * u_sq * u1)
            },
        ))
    }

    fn ladder(&self) -> Vec<Functional<RealField>> {
        vec![
            Functional::from_density("I1", 0, |j: &[f64]| -4.0 * j[0] * j[0]),
            Functional::from_density("I2", 1, |j: &[f64]| 16.0 * (j[0].powi(4) + j[1] * j[1])),
            Functional::from_density("I3", 2, |j: &[f64]| {
                let (u, u1, u2) = (j[0], j[1], j[2]);
                -32.0 * (2.0 * u.powi(6) + 10.0 * u * u * u1 * u1 + u2 * u2)
            }),
            Functional::from_density("I4", 3, |j: &[f64]| {
                let (u, u1, u2, u3) = (j[0], j[1], j[2], j[3]);
                256.0 / 5.0
                    * (5.0 * u.powi(8) + 70.0 * u.powi(4) * u1 * u1 - 7.0 * u1.powi(4)
                        + 14.0 * u * u * u2 * u2
                        + u3 * u3)
            }),
        ]
    }

    fn hamiltonian_functional(&self) -> Functional<RealField> {
        Functional::from_density("h", 1, |j: &[f64]| j[1] * j[1] + j[0].powi(4))
    }

    fn propagator(&self, dt: f64) -> Propagator<'_, RealField> {
        let stepper = IfRk4::new(&self.grid, dt, 2.0, 3);
        Box::new(move |u| stepper.step(u))
    }

    fn canonical_form(&self, base: &RealField, d1: &RealField, d2: &RealField) -> Result<f64, FieldError> {
        real_two_form(RealTwoForm::Canonical, base, d1, d2)
    }

    fn second_form(&self, base: &RealField, d1: &RealField, d2: &RealField) -> Result<f64, FieldError> {
        real_two_form(RealTwoForm::MkdvSecond, base, d1, d2)
    }

    fn random_variation(&self, rng: &mut ChaCha8Rng) -> RealField {
        random_variation_real(&self.grid, rng)
    }

    fn probe(&self) -> Functional<RealField> {
        cosine_probe(&self.grid)
    }
}
