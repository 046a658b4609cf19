use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::functional::{functional_gradient, gateaux};
use super::{
    quadrature, quadrature_complex, Anchoring, ComplexField, FieldError, Functional, Grid,
    GridFunction, RealField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    /// `{F, G} = s ∫ δF/δu ∂_x δG/δu dx`.
    Gardner,
    /// `{F, G} = s i ∫ (δF/δψ δG/δψ̄ - δF/δψ̄ δG/δψ) dx`.
    Nse,
}

/// A field Poisson structure whose overall constant is fixed by calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonStructure {
    pub kind: StructureKind,
    pub scale: Option<f64>,
}

impl PoissonStructure {
    pub fn uncalibrated(kind: StructureKind) -> Self {
        Self { kind, scale: None }
    }

    pub fn calibrated(kind: StructureKind, scale: f64) -> Self {
        Self { kind, scale: Some(scale) }
    }

    pub fn scale(&self) -> Result<f64, FieldError> {
        self.scale.ok_or(FieldError::Uncalibrated(self.kind))
    }
}

/// Field types carrying a Poisson structure.
pub trait PoissonField: GridFunction {
    const KIND: StructureKind;
    /// Bracket from the two gradients.
    fn pair_gradients(scale: f64, gf: &Self, gg: &Self) -> Result<f64, FieldError>;
    /// `{h, ·}` evaluated on the coordinate functions, from `δh`.
    fn flow_from_gradient(scale: f64, gh: &Self) -> Self;
}

impl PoissonField for RealField {
    const KIND: StructureKind = StructureKind::Gardner;

    fn pair_gradients(scale: f64, gf: &Self, gg: &Self) -> Result<f64, FieldError> {
        Ok(scale * quadrature(&gf.mul(&gg.derivative(1))))
    }

    fn flow_from_gradient(scale: f64, gh: &Self) -> Self {
        gh.derivative(1).scaled(-scale)
    }
}

impl PoissonField for ComplexField {
    const KIND: StructureKind = StructureKind::Nse;

    fn pair_gradients(scale: f64, gf: &Self, gg: &Self) -> Result<f64, FieldError> {
        let i = Complex64::new(0.0, 1.0);
        let dens = gf.zip_map(gg, |a, b| i * (a.conj() * b - a * b.conj()) * scale);
        quadrature_complex(&dens)
    }

    fn flow_from_gradient(scale: f64, gh: &Self) -> Self {
        gh.times(Complex64::new(0.0, -scale))
    }
}

fn check_kind<U: PoissonField>(structure: &PoissonStructure) -> Result<f64, FieldError> {
    if structure.kind != U::KIND {
        return Err(FieldError::StructureMismatch(structure.kind));
    }
    structure.scale()
}

pub fn field_poisson_bracket<U: PoissonField>(
    f: &Functional<U>,
    g: &Functional<U>,
    u: &U,
    structure: &PoissonStructure,
) -> Result<f64, FieldError> {
    let s = check_kind::<U>(structure)?;
    U::pair_gradients(s, &functional_gradient(f, u), &functional_gradient(g, u))
}

/// `{h, u(x_j)}` at every grid point.
pub fn hamiltonian_flow<U: PoissonField>(
    h: &Functional<U>,
    u: &U,
    structure: &PoissonStructure,
) -> Result<U, FieldError> {
    let s = check_kind::<U>(structure)?;
    Ok(U::flow_from_gradient(s, &functional_gradient(h, u)))
}

/// Two-forms on real variations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealTwoForm {
    /// `∫ δu ∧ δv`, `v_x = u`.
    Canonical,
    /// `∫ (δu ∧ δu_x + (2/3) u δu ∧ δv)`.
    KdvSecond,
    /// `∫ (δu ∧ δu_x - 2u δu ∧ δw)`, `w_x = u²`.
    MkdvSecond,
}

/// Two-forms on complex variations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexTwoForm {
    /// `i ∫ δψ ∧ δψ̄`.
    Canonical,
    /// `∫ (δψ_x ∧ δψ̄ + ψ δφ ∧ δψ̄ + ψ̄ δφ ∧ δψ)`, `φ_x = ψψ̄`.
    NseSecond,
}

fn check_antisymmetry(v12: f64, v21: f64) -> Result<f64, FieldError> {
    let defect = v12 + v21;
    if defect.abs() > 1e-10 * v12.abs().max(1.0) {
        return Err(FieldError::Antisymmetry(defect));
    }
    Ok(v12)
}

pub fn real_two_form(
    kind: RealTwoForm,
    base: &RealField,
    d1: &RealField,
    d2: &RealField,
) -> Result<f64, FieldError> {
    base.grid().same_as(d1.grid())?;
    base.grid().same_as(d2.grid())?;
    let eval = |a: &RealField, b: &RealField| -> Result<f64, FieldError> {
        // Σ ∫ w (α(a) β(b) - α(b) β(a))
        let wedge = |w: &RealField, aa: &RealField, ab: &RealField, ba: &RealField, bb: &RealField| {
            quadrature(&w.mul(&aa.mul(bb).sub(&ba.mul(ab))))
        };
        let one = RealField::from_fn(base.grid(), |_| 1.0);
        match kind {
            RealTwoForm::Canonical => {
                let (va, vb) = (a.antiderivative(Anchoring::LeftAnchored)?, b.antiderivative(Anchoring::LeftAnchored)?);
                Ok(wedge(&one, a, b, &va, &vb))
            }
            RealTwoForm::KdvSecond => {
                let (va, vb) = (a.antiderivative(Anchoring::LeftAnchored)?, b.antiderivative(Anchoring::LeftAnchored)?);
                let first = wedge(&one, a, b, &a.derivative(1), &b.derivative(1));
                Ok(first + wedge(&base.scaled(2.0 / 3.0), a, b, &va, &vb))
            }
            RealTwoForm::MkdvSecond => {
                let wa = base.mul(a).scaled(2.0).antiderivative(Anchoring::LeftAnchored)?;
                let wb = base.mul(b).scaled(2.0).antiderivative(Anchoring::LeftAnchored)?;
                let first = wedge(&one, a, b, &a.derivative(1), &b.derivative(1));
                Ok(first + wedge(&base.scaled(-2.0), a, b, &wa, &wb))
            }
        }
    };
    check_antisymmetry(eval(d1, d2)?, eval(d2, d1)?)
}

pub fn complex_two_form(
    kind: ComplexTwoForm,
    base: &ComplexField,
    d1: &ComplexField,
    d2: &ComplexField,
) -> Result<f64, FieldError> {
    base.grid().same_as(d1.grid())?;
    base.grid().same_as(d2.grid())?;
    let i = Complex64::new(0.0, 1.0);
    let eval = |a: &ComplexField, b: &ComplexField| -> Result<f64, FieldError> {
        match kind {
            ComplexTwoForm::Canonical => {
                let dens = a.zip_map(b, |x, y| i * (x * y.conj() - y * x.conj()));
                quadrature_complex(&dens)
            }
            ComplexTwoForm::NseSecond => {
                let dphi = |d: &ComplexField| {
                    let rho = base.zip_map(d, |p, q| Complex64::new(2.0 * (p.conj() * q).re, 0.0));
                    rho.antiderivative(Anchoring::LeftAnchored)
                };
                let (pa, pb) = (dphi(a)?, dphi(b)?);
                let (ax, bx) = (a.derivative(1), b.derivative(1));
                let samples: Vec<Complex64> = (0..base.n())
                    .map(|j| {
                        let psi = base.samples()[j];
                        let (da, db) = (a.samples()[j], b.samples()[j]);
                        let (fa, fb) = (pa.samples()[j], pb.samples()[j]);
                        ax.samples()[j] * db.conj() - bx.samples()[j] * da.conj()
                            + psi * (fa * db.conj() - fb * da.conj())
                            + psi.conj() * (fa * db - fb * da)
                    })
                    .collect();
                quadrature_complex(&ComplexField::with_values(base.grid(), samples))
            }
        }
    };
    check_antisymmetry(eval(d1, d2)?, eval(d2, d1)?)
}

/// `(L_E ω)(δ1, δ2) = E[ω(δ1, δ2)] + ω(DE·δ1, δ2) + ω(δ1, DE·δ2)` with
/// Gateaux derivatives; the first term carries the base dependence of `ω`.
pub fn lie_derivative_numeric<U: GridFunction + super::Linear>(
    omega: &dyn Fn(&U, &U, &U) -> Result<f64, FieldError>,
    generator: &dyn Fn(&U) -> U,
    base: &U,
    d1: &U,
    d2: &U,
) -> Result<f64, FieldError> {
    let e = generator(base);
    let transport = gateaux(|v: &U| omega(v, d1, d2).unwrap_or(f64::NAN), base, &e);
    let e1 = gateaux(generator, base, d1);
    let e2 = gateaux(generator, base, d2);
    let value = transport + omega(base, &e1, d2)? + omega(base, d1, &e2)?;
    Ok(value)
}

fn windowed_series<R: Rng>(grid: &Grid, rng: &mut R) -> Vec<f64> {
    let coeffs: Vec<(f64, f64)> = (0..4)
        .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    let window = |x: f64| (-x * x / 4.0).exp();
    let raw: Vec<f64> = grid
        .coordinates()
        .iter()
        .map(|&x| {
            let s: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(m, (a, b))| {
                    let k = 0.4 * (m + 1) as f64;
                    a * (k * x).cos() + b * (k * x).sin()
                })
                .sum();
            s * window(x)
        })
        .collect();
    let g0: Vec<f64> = grid.coordinates().iter().map(|&x| window(x)).collect();
    let c = raw.iter().sum::<f64>() / g0.iter().sum::<f64>();
    raw.iter().zip(&g0).map(|(r, g)| r - c * g).collect()
}

/// Zero-mean, Gaussian-windowed random trigonometric variation.
pub fn random_variation_real<R: Rng>(grid: &Grid, rng: &mut R) -> RealField {
    RealField::with_values(grid, windowed_series(grid, rng))
}

pub fn random_variation_complex<R: Rng>(grid: &Grid, rng: &mut R) -> ComplexField {
    let re = windowed_series(grid, rng);
    let im = windowed_series(grid, rng);
    ComplexField::with_values(
        grid,
        re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect(),
    )
}
