use nalgebra::{DMatrix, DVector};

use super::{AntisymMatrix, BivectorField, Differencer, Trivector, TwoFormField, VectorField};

/// `[E, W]^{ab} = E^c ∂_c W^{ab} - W^{cb} ∂_c E^a - W^{ac} ∂_c E^b`.
pub fn schouten_vb(
    e: &dyn VectorField,
    w: &dyn BivectorField,
    t: f64,
    z: &[f64],
    fd: &Differencer,
) -> AntisymMatrix {
    let d = z.len();
    let ez = e.eval(t, z);
    let wz = w.eval(z);
    let de = fd.partials(&|y: &[f64]| e.eval(t, y).as_slice().to_vec(), z);
    let dw = fd.partials(&|y: &[f64]| w.eval(y).flatten(), z);
    AntisymMatrix::from_upper(d, |a, b| {
        let mut s = 0.0;
        for c in 0..d {
            s += ez[c] * dw[c][a * d + b] - wz.get(c, b) * de[c][a] - wz.get(a, c) * de[c][b];
        }
        s
    })
}

/// `[A, B]^{abc} = Σ_cyclic Σ_d (A^{da} ∂_d B^{bc} + B^{da} ∂_d A^{bc})`.
pub fn schouten_bb(
    a_field: &dyn BivectorField,
    b_field: &dyn BivectorField,
    z: &[f64],
    fd: &Differencer,
) -> Trivector {
    let d = z.len();
    let az = a_field.eval(z);
    let bz = b_field.eval(z);
    let da = fd.partials(&|y: &[f64]| a_field.eval(y).flatten(), z);
    let db = fd.partials(&|y: &[f64]| b_field.eval(y).flatten(), z);
    let term = |a: usize, b: usize, c: usize| {
        let mut s = 0.0;
        for k in 0..d {
            s += az.get(k, a) * db[k][b * d + c] + bz.get(k, a) * da[k][b * d + c];
        }
        s
    };
    Trivector::from_ordered(d, |a, b, c| term(a, b, c) + term(b, c, a) + term(c, a, b))
}

/// `(L_E σ)_{ab} = E^c ∂_c σ_{ab} + σ_{cb} ∂_a E^c + σ_{ac} ∂_b E^c`, explicit `t` frozen.
pub fn lie_derivative_two_form(
    e: &dyn VectorField,
    sigma: &dyn TwoFormField,
    t: f64,
    z: &[f64],
    fd: &Differencer,
) -> AntisymMatrix {
    let d = z.len();
    let ez = e.eval(t, z);
    let sz = sigma.eval(z);
    let de = fd.partials(&|y: &[f64]| e.eval(t, y).as_slice().to_vec(), z);
    let ds = fd.partials(&|y: &[f64]| sigma.eval(y).flatten(), z);
    AntisymMatrix::from_upper(d, |a, b| {
        let mut s = 0.0;
        for c in 0..d {
            s += ez[c] * ds[c][a * d + b] + sz.get(c, b) * de[a][c] + sz.get(a, c) * de[b][c];
        }
        s
    })
}

/// `(dσ)_{abc} = ∂_a σ_{bc} + ∂_b σ_{ca} + ∂_c σ_{ab}`.
pub fn exterior_derivative_two_form(
    sigma: &dyn TwoFormField,
    z: &[f64],
    fd: &Differencer,
) -> Trivector {
    let d = z.len();
    let ds = fd.partials(&|y: &[f64]| sigma.eval(y).flatten(), z);
    Trivector::from_ordered(d, |a, b, c| {
        ds[a][b * d + c] + ds[b][c * d + a] + ds[c][a * d + b]
    })
}

/// `{f, g} = ∇f · W(z) · ∇g`.
pub fn poisson_bracket(
    f: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    w: &dyn BivectorField,
    z: &[f64],
    fd: &Differencer,
) -> f64 {
    let gf = DVector::from_vec(fd.gradient(f, z));
    let gg = DVector::from_vec(fd.gradient(g, z));
    gf.dot(&(w.eval(z).matrix() * gg))
}

/// The bracket `[E, W]` viewed as a bivector field, so it can be bracketed again.
pub struct SchoutenField<'a> {
    pub e: &'a dyn VectorField,
    pub w: &'a dyn BivectorField,
    pub t: f64,
    pub fd: Differencer,
}

impl BivectorField for SchoutenField<'_> {
    fn dim(&self) -> usize {
        self.w.dim()
    }
    fn eval(&self, z: &[f64]) -> AntisymMatrix {
        schouten_vb(self.e, self.w, self.t, z, &self.fd)
    }
}

/// Hamiltonian vector field `X^b = ∂_a h W^{ab}`, so that `X(f) = {h, f}`.
pub struct HamiltonianField<'a> {
    pub h: &'a (dyn Fn(&[f64]) -> f64 + Sync),
    pub w: &'a dyn BivectorField,
    pub fd: Differencer,
}

impl VectorField for HamiltonianField<'_> {
    fn dim(&self) -> usize {
        self.w.dim()
    }
    fn eval(&self, _t: f64, z: &[f64]) -> DVector<f64> {
        let grad = DMatrix::from_row_slice(1, z.len(), &self.fd.gradient(self.h, z));
        let row = grad * self.w.eval(z).matrix();
        DVector::from_iterator(z.len(), row.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{
        canonical_bivector, ConstantBivector, ConstantTwoForm, ConstantVectorField, FnTwoForm,
        PhasePoint,
    };

    fn kinetic(z: &[f64]) -> f64 {
        let n = z.len() / 2;
        0.5 * z[n..].iter().map(|p| p * p).sum::<f64>()
    }

    #[test]
    fn hamiltonian_field_preserves_canonical_bivector() {
        let w = ConstantBivector(canonical_bivector(3));
        let x = HamiltonianField { h: &kinetic, w: &w, fd: Differencer::default() };
        for z in PhasePoint::random_batch(3, 5, 11) {
            let ew = schouten_vb(&x, &w, 0.0, z.as_slice(), &Differencer::default());
            assert!(ew.max_abs() < 1e-8, "{}", ew.max_abs());
        }
    }

    #[test]
    fn hamiltonian_field_of_kinetic_energy_moves_q() {
        let w = ConstantBivector(canonical_bivector(2));
        let x = HamiltonianField { h: &kinetic, w: &w, fd: Differencer::default() };
        let v = x.eval(0.0, &[0.1, 0.2, 0.3, -0.4]);
        let expect = [0.3, -0.4, 0.0, 0.0];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_fields_have_exactly_vanishing_brackets() {
        let w = ConstantBivector(canonical_bivector(2));
        let c = ConstantVectorField(DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]));
        let z = [0.3, 0.1, -0.2, 0.9];
        assert_eq!(schouten_vb(&c, &w, 0.0, &z, &Differencer::default()).max_abs(), 0.0);
        assert_eq!(schouten_bb(&w, &w, &z, &Differencer::nested()).max_abs(), 0.0);
    }

    #[test]
    fn lie_derivative_along_zero_field_vanishes() {
        let e = ConstantVectorField(DVector::zeros(4));
        let s = FnTwoForm::new(4, |z: &[f64]| AntisymMatrix::from_upper(4, |a, b| z[a] * z[b]));
        let l = lie_derivative_two_form(&e, &s, 0.0, &[0.1, 0.2, 0.3, 0.4], &Differencer::default());
        assert_eq!(l.max_abs(), 0.0);
    }

    #[test]
    fn canonical_bracket_of_q_and_p() {
        let w = ConstantBivector(canonical_bivector(2));
        for z in PhasePoint::random_batch(2, 4, 3) {
            let v = poisson_bracket(&|z| z[0], &|z| z[2], &w, z.as_slice(), &Differencer::default());
            assert!((v + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bracket_of_exact_constant_form_is_closed() {
        let s = ConstantTwoForm(canonical_bivector(2));
        let d = exterior_derivative_two_form(&s, &[0.0; 4], &Differencer::default());
        assert_eq!(d.max_abs(), 0.0);
    }
}
