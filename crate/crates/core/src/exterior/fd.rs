//! Central finite differences over phase-space coordinates.

/// Stencil used for first partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `(f(x+h) - f(x-h)) / 2h`
    Central2,
    /// `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`
    Central4,
}

/// First-derivative operator with a step scaled by the size of the point.
///
/// The step is `relative_step * max(1, |z|_inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Differencer {
    pub stencil: Stencil,
    pub relative_step: f64,
}

impl Default for Differencer {
    fn default() -> Self {
        Self {
            stencil: Stencil::Central2,
            relative_step: f64::EPSILON.cbrt(),
        }
    }
}

impl Differencer {
    /// Operator for brackets that are differentiated again (up to three levels).
    ///
    /// Round-off of a k-fold nested difference grows like `eps / h^k`, so the
    /// step is larger and the truncation error is pushed to fourth order.
    pub fn nested() -> Self {
        Self {
            stencil: Stencil::Central4,
            relative_step: f64::EPSILON.powf(1.0 / 7.0),
        }
    }

    /// Fourth-order operator for first derivatives that must reach ~1e-12.
    pub fn precise() -> Self {
        Self {
            stencil: Stencil::Central4,
            relative_step: f64::EPSILON.powf(0.2),
        }
    }

    pub fn step(&self, z: &[f64]) -> f64 {
        let scale = z.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        self.relative_step * scale
    }

    /// Partial derivative `∂_c f(z)` of a vector-valued map.
    pub fn partial<F>(&self, f: &F, z: &[f64], c: usize) -> Vec<f64>
    where
        F: Fn(&[f64]) -> Vec<f64> + ?Sized,
    {
        let h0 = self.step(z);
        let mut y = z.to_vec();
        // exactly representable step
        let h = (z[c] + h0) - z[c];
        let mut at = |offset: f64| {
            y[c] = z[c] + offset;
            f(&y)
        };
        match self.stencil {
            Stencil::Central2 => {
                let plus = at(h);
                let minus = at(-h);
                plus.iter()
                    .zip(&minus)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect()
            }
            Stencil::Central4 => {
                let p2 = at(2.0 * h);
                let p1 = at(h);
                let m1 = at(-h);
                let m2 = at(-2.0 * h);
                (0..p1.len())
                    .map(|i| (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h))
                    .collect()
            }
        }
    }

    /// All partials; entry `c` is `∂_c f(z)`.
    pub fn partials<F>(&self, f: &F, z: &[f64]) -> Vec<Vec<f64>>
    where
        F: Fn(&[f64]) -> Vec<f64> + ?Sized,
    {
        (0..z.len()).map(|c| self.partial(f, z, c)).collect()
    }

    /// Gradient of a scalar function.
    pub fn gradient<F>(&self, f: &F, z: &[f64]) -> Vec<f64>
    where
        F: Fn(&[f64]) -> f64 + ?Sized,
    {
        let wrapped = |y: &[f64]| vec![f(y)];
        (0..z.len())
            .map(|c| self.partial(&wrapped, z, c)[0])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central2_exact_on_quadratics_to_rounding() {
        let d = Differencer::default();
        let g = d.gradient(&|z: &[f64]| z[0] * z[0] + 3.0 * z[1], &[0.7, -0.2]);
        assert!((g[0] - 1.4).abs() < 1e-9);
        assert!((g[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn central4_is_more_accurate_on_exponentials() {
        let f = |z: &[f64]| z[0].exp();
        let c2 = Differencer { stencil: Stencil::Central2, relative_step: 1e-3 };
        let c4 = Differencer { stencil: Stencil::Central4, relative_step: 1e-3 };
        let exact = 0.3_f64.exp();
        let e2 = (c2.gradient(&f, &[0.3])[0] - exact).abs();
        let e4 = (c4.gradient(&f, &[0.3])[0] - exact).abs();
        assert!(e4 < e2 / 100.0, "e2={e2:e} e4={e4:e}");
    }
}
