use std::fmt;
use std::sync::Arc;

use super::{ComplexField, FieldError, GridFunction, RealField};

/// Values that can be linearly combined (scalars and fields).
pub trait Linear: Sized {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self;
}

impl Linear for f64 {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
}

impl Linear for RealField {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        <RealField as GridFunction>::lincomb(a, x, b, y)
    }
}

impl Linear for ComplexField {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        <ComplexField as GridFunction>::lincomb(a, x, b, y)
    }
}

/// Directional derivative `(F(u + hδ) - F(u - hδ)) / 2h` with `h = ε^{1/3}·scale`.
pub fn gateaux<U: GridFunction, R: Linear>(f: impl Fn(&U) -> R, u: &U, dir: &U) -> R {
    let scale = u.sup_norm().max(1.0) / dir.sup_norm().max(f64::MIN_POSITIVE);
    gateaux_with_step(f, u, dir, f64::EPSILON.cbrt() * scale)
}

pub fn gateaux_with_step<U: GridFunction, R: Linear>(
    f: impl Fn(&U) -> R,
    u: &U,
    dir: &U,
    h: f64,
) -> R {
    let plus = f(&U::lincomb(1.0, u, h, dir));
    let minus = f(&U::lincomb(1.0, u, -h, dir));
    R::lincomb(0.5 / h, &plus, -0.5 / h, &minus)
}

type DensityFn<S> = Arc<dyn Fn(&[S]) -> f64 + Send + Sync>;

/// Pointwise density `f(u, u_x, ..., u^{(order)})` of a local functional.
#[derive(Clone)]
pub struct Density<S> {
    pub order: usize,
    f: DensityFn<S>,
}

impl<S> Density<S> {
    pub fn eval(&self, jet: &[S]) -> f64 {
        (self.f)(jet)
    }
}

/// Real-valued functional on grid fields.
#[derive(Clone)]
pub struct Functional<U: GridFunction> {
    name: String,
    eval: Arc<dyn Fn(&U) -> f64 + Send + Sync>,
    density: Option<Density<U::Scalar>>,
}

impl<U: GridFunction> fmt::Debug for Functional<U> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functional")
            .field("name", &self.name)
            .field("density_order", &self.density.as_ref().map(|d| d.order))
            .finish()
    }
}

impl<U: GridFunction> Functional<U> {
    pub fn new(name: impl Into<String>, eval: impl Fn(&U) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(eval), density: None }
    }

    /// `F[u] = ∫ f(u, u_x, ..., u^{(order)}) dx`.
    pub fn from_density(
        name: impl Into<String>,
        order: usize,
        f: impl Fn(&[U::Scalar]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let f: DensityFn<U::Scalar> = Arc::new(f);
        let g = f.clone();
        let eval = move |u: &U| {
            let jets = u.jets(order);
            let mut jet = Vec::with_capacity(order + 1);
            let values: Vec<f64> = (0..u.n())
                .map(|j| {
                    jet.clear();
                    jet.extend(jets.iter().map(|d| d.values()[j]));
                    g(&jet)
                })
                .collect();
            U::integrate_density(u.grid(), &values)
        };
        Self { name: name.into(), eval: Arc::new(eval), density: Some(Density { order, f }) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, u: &U) -> f64 {
        (self.eval)(u)
    }

    pub fn density(&self) -> Option<&Density<U::Scalar>> {
        self.density.as_ref()
    }
}

/// Grid gradient `δF/δu(x_j) ≈ (∂F/∂u_j)/dx`; for complex fields `δF/δψ̄`.
pub fn functional_gradient<U: GridFunction>(f: &Functional<U>, u: &U) -> U {
    let h = f64::EPSILON.cbrt() * u.sup_norm().max(1.0);
    u.coordinate_gradient(&|v: &U| f.eval(v), h)
}

/// Euler-Lagrange gradient `Σ_k (-∂_x)^k ∂f/∂u^{(k)}` of a density functional.
pub fn euler_lagrange_gradient<U: GridFunction>(f: &Functional<U>, u: &U) -> Option<U> {
    let density = f.density()?;
    let jets = u.jets(density.order);
    let n = u.n();
    let mut total = U::zeros(u.grid());
    let func = |jet: &[U::Scalar]| density.eval(jet);
    for k in 0..=density.order {
        let mut jet = Vec::with_capacity(density.order + 1);
        let partial: Vec<U::Scalar> = (0..n)
            .map(|j| {
                jet.clear();
                jet.extend(jets.iter().map(|d| d.values()[j]));
                U::density_partial(&func, &jet, k)
            })
            .collect();
        let term = U::with_values(u.grid(), partial).derivative(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total = U::lincomb(1.0, &total, sign, &term);
    }
    Some(total)
}

/// Sample-difference gradient, cross-checked against the Euler-Lagrange route
/// when a density is available (relative disagreement above `1e-4` is an error).
pub fn functional_gradient_checked<U: GridFunction>(
    f: &Functional<U>,
    u: &U,
) -> Result<U, FieldError> {
    let g = functional_gradient(f, u);
    if let Some(el) = euler_lagrange_gradient(f, u) {
        let diff = g.sub(&el).sup_norm() / el.sup_norm().max(1.0);
        if diff > 1e-4 {
            return Err(FieldError::GradientConsistency(diff));
        }
    }
    Ok(g)
}
