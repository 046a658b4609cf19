use nalgebra::DMatrix;

use super::{bonds, toda_integrals, TodaError, TodaGenerator, TodaState};
use crate::exterior::{
    calibrate_conventions, canonical_bivector, lie_derivative_two_form, newton_recurrence,
    poisson_bracket, schouten_bb, schouten_vb, spectral_invariants, AntisymMatrix,
    BivectorField, CalibrationError, CalibrationHooks, CalibrationRecord, Calibration,
    ConstantBivector, ConstantTwoForm, Differencer, InvariantLadder, PhasePoint,
    RecurrenceVariant, SchoutenField, VectorField,
};

pub fn canonical_poisson(n: usize) -> ConstantBivector {
    ConstantBivector(canonical_bivector(n))
}

/// `ω = Σ dp_i ∧ dq_i`.
pub fn canonical_symplectic(n: usize) -> ConstantTwoForm {
    ConstantTwoForm(canonical_bivector(n))
}

/// `Σ p_i dp_i∧dq_i + Σ e^{q_i-q_{i+1}} dq_i∧dq_{i+1} + Σ_{i<j} dp_i∧dp_j`.
pub fn toda_le_omega(s: &TodaState) -> Result<AntisymMatrix, TodaError> {
    let n = s.n();
    let b = bonds(&s.q)?;
    Ok(AntisymMatrix::from_upper(2 * n, |a, c| {
        match (a < n, c < n) {
            (true, true) if c == a + 1 => b[a],
            (true, false) if c == a + n => -s.p[a],
            (false, false) => 1.0,
            _ => 0.0,
        }
    }))
}

/// `L_E ω` computed from the generator by finite differences.
fn lie_derivative_of_omega(z: &PhasePoint, t: f64) -> AntisymMatrix {
    let n = z.n();
    let e = TodaGenerator { n };
    lie_derivative_two_form(&e, &canonical_symplectic(n), t, z.as_slice(), &Differencer::precise())
}

/// `L_E ω` at `s` by finite differences of the generator.
pub fn toda_le_omega_numeric(s: &TodaState) -> AntisymMatrix {
    lie_derivative_of_omega(&s.to_phase_point(), s.t)
}

/// Fixes the conventions on `count` random states (`n` particles, seeded).
pub fn calibrate_toda(
    n: usize,
    count: usize,
    seed: u64,
    variant: RecurrenceVariant,
) -> Result<CalibrationRecord, CalibrationError> {
    let order = n.min(4);
    let poisson = canonical_poisson(n);
    let symplectic = canonical_symplectic(n);
    let second = |z: &PhasePoint| lie_derivative_of_omega(z, 0.0);
    let reference = |z: &PhasePoint, m: usize| {
        toda_integrals(&TodaState::from_phase_point(z, 0.0), m).unwrap_or_else(|_| vec![f64::NAN; m])
    };
    let hooks = CalibrationHooks {
        states: PhasePoint::random_batch(n, count, seed),
        poisson: &poisson,
        symplectic: &symplectic,
        second_form: &second,
        reference: &reference,
        order,
        variant,
        tolerance: 1e-9,
    };
    calibrate_conventions(&hooks)
}

/// `Y_k` from the recursion operator and `I_m` by the calibrated recurrence.
pub fn pipeline_ladder(
    s: &TodaState,
    calibration: &Calibration,
    order: usize,
) -> Result<InvariantLadder, TodaError> {
    let n = s.n();
    let z = s.to_phase_point();
    let sigma = crate::exterior::ConstantTwoForm(lie_derivative_of_omega(&z, s.t));
    let spec = spectral_invariants(&canonical_poisson(n), &sigma, z.as_slice(), order, calibration)?;
    let i = newton_recurrence(&spec.y, calibration.variant, calibration.recurrence_sign);
    Ok(InvariantLadder { y: spec.y, i, calibration: *calibration })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonNoetherReport {
    /// `max |[E, W]^{ab}|`.
    pub commutator_norm: f64,
    /// `max |[[E, [E, W]], W]^{abc}|`.
    pub yang_baxter_raw: f64,
    /// `max(1, max|[E,[E,W]]| · max|W|)`.
    pub yang_baxter_scale: f64,
    pub yang_baxter_scaled: f64,
    /// `[E, W]` vanishes to `1e-3`.
    pub noether: bool,
    /// Scaled Yang-Baxter bracket below `1e-6`.
    pub yang_baxter_holds: bool,
}

/// Non-Noether and Yang-Baxter diagnostics of `e` with respect to the canonical bivector.
pub fn verify_nonnoether(e: &dyn VectorField, z: &[f64], t: f64) -> NonNoetherReport {
    let n = z.len() / 2;
    let w = canonical_poisson(n);
    let nested = Differencer::nested();
    let commutator_norm = schouten_vb(e, &w, t, z, &Differencer::default()).max_abs();
    let ew = SchoutenField { e, w: &w, t, fd: nested };
    let eew = SchoutenField { e, w: &ew, t, fd: nested };
    let yb = schouten_bb(&eew, &w, z, &nested);
    let yang_baxter_raw = yb.max_abs();
    let yang_baxter_scale = (eew.eval(z).max_abs() * w.0.max_abs()).max(1.0);
    let yang_baxter_scaled = yang_baxter_raw / yang_baxter_scale;
    NonNoetherReport {
        commutator_norm,
        yang_baxter_raw,
        yang_baxter_scale,
        yang_baxter_scaled,
        noether: commutator_norm <= 1e-3,
        yang_baxter_holds: yang_baxter_scaled < 1e-6,
    }
}

pub fn toda_verify_nonnoether(s: &TodaState) -> NonNoetherReport {
    verify_nonnoether(&TodaGenerator { n: s.n() }, &s.to_vec(), s.t)
}

/// `{I_k, I_m}` for `k, m <= order`, finite-difference gradients.
pub fn involutivity_matrix(s: &TodaState, order: usize) -> Result<DMatrix<f64>, TodaError> {
    toda_integrals(s, order)?;
    let n = s.n();
    let w = canonical_poisson(n);
    let z = s.to_vec();
    let fd = Differencer::default();
    let t = s.t;
    let integral = |k: usize| {
        move |y: &[f64]| {
            toda_integrals(&TodaState::from_slice(y, t), k + 1).map_or(f64::NAN, |v| v[k])
        }
    };
    let mut out = DMatrix::zeros(order, order);
    for k in 0..order {
        for m in (k + 1)..order {
            let v = poisson_bracket(&integral(k), &integral(m), &w, &z, &fd);
            out[(k, m)] = v;
            out[(m, k)] = -v;
        }
    }
    Ok(out)
}

/// `order × 2n` Jacobian of `(I_1..I_order)`.
pub fn integrals_jacobian(s: &TodaState, order: usize) -> Result<DMatrix<f64>, TodaError> {
    toda_integrals(s, order)?;
    let fd = Differencer::default();
    let z = s.to_vec();
    let t = s.t;
    let f = |y: &[f64]| {
        toda_integrals(&TodaState::from_slice(y, t), order).unwrap_or_else(|_| vec![f64::NAN; order])
    };
    let cols = fd.partials(&f, &z);
    Ok(DMatrix::from_fn(order, z.len(), |r, c| cols[c][r]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Smallest over largest singular value.
    pub ratio: f64,
}

/// Numerical rank with relative threshold `1e-8`.
pub fn jacobian_rank(j: &DMatrix<f64>) -> JacobianRank {
    let mut sv: Vec<f64> = j.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let largest = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > 1e-8 * largest).count();
    let ratio = if largest > 0.0 { sv.last().copied().unwrap_or(0.0) / largest } else { 0.0 };
    JacobianRank { rank, singular_values: sv, ratio }
}
