use nalgebra::DVector;

use super::{ExteriorError, PhasePoint, VectorField};

/// Group action `g_a(z0)`: integrates `dz/da = E(t0, z)` with classical RK4.
pub fn flow(
    e: &dyn VectorField,
    z0: &PhasePoint,
    t0: f64,
    a: f64,
    steps: usize,
) -> Result<PhasePoint, ExteriorError> {
    let steps = steps.max(1);
    let h = a / steps as f64;
    let mut z = DVector::from_column_slice(z0.as_slice());
    for step in 0..steps {
        let k1 = e.eval(t0, z.as_slice());
        let k2 = e.eval(t0, (&z + &k1 * (0.5 * h)).as_slice());
        let k3 = e.eval(t0, (&z + &k2 * (0.5 * h)).as_slice());
        let k4 = e.eval(t0, (&z + &k3 * h).as_slice());
        z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if z.iter().any(|v| !v.is_finite()) {
            return Err(ExteriorError::Divergence { step: step + 1, a: h * (step + 1) as f64 });
        }
    }
    PhasePoint::new(z.as_slice().to_vec())
}
