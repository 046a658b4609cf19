//! The open (non-periodic) n-particle Toda chain
//!
//! `dq_i/dt = p_i`, `dp_i/dt = e^{q_{i-1}-q_i} - e^{q_i-q_{i+1}}` with the missing
//! neighbours of the end particles dropped, together with its time-dependent
//! master symmetry `E` and the integrals it produces.

mod geometry;
mod integrate;

pub use geometry::{
    calibrate_toda, canonical_poisson, canonical_symplectic, integrals_jacobian,
    involutivity_matrix, jacobian_rank, pipeline_ladder, toda_le_omega, toda_le_omega_numeric,
    toda_verify_nonnoether,
    verify_nonnoether, JacobianRank, NonNoetherReport,
};
pub use integrate::{
    integrate_toda, symmetry_residual_with, toda_symmetry_residual, Integrator, SymmetryResidual,
    TodaTrajectory,
};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{PhasePoint, VectorField};

/// Largest neighbour gap `|q_i - q_{i+1}|` accepted before `exp` is refused.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TodaError {
    #[error("state needs n >= 1 with equal q/p lengths (got {q} and {p})")]
    Shape { q: usize, p: usize },
    #[error("non-finite entry in state")]
    NonFinite,
    #[error("exponent overflow between particles {index} and {} (gap {gap})", .index + 1)]
    Overflow { index: usize, gap: f64 },
    #[error("integration diverged at t = {time}")]
    Divergence { time: f64 },
    #[error("invalid step: dt = {dt}, t_end = {t_end}")]
    InvalidStep { dt: f64, t_end: f64 },
    #[error("integral order {order} outside 1..={max}")]
    Order { order: usize, max: usize },
    #[error(transparent)]
    Exterior(#[from] crate::exterior::ExteriorError),
}

/// `ε(k)`: `+1` for `k >= 1`, `-1` for `k <= -1`, `0` at `k = 0`.
pub fn epsilon(k: i64) -> f64 {
    k.signum() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TodaState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
}

impl TodaState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, t: f64) -> Result<Self, TodaError> {
        if q.is_empty() || q.len() != p.len() {
            return Err(TodaError::Shape { q: q.len(), p: p.len() });
        }
        if q.iter().chain(&p).any(|v| !v.is_finite()) || !t.is_finite() {
            return Err(TodaError::NonFinite);
        }
        Ok(Self { q, p, t })
    }

    pub fn from_phase_point(z: &PhasePoint, t: f64) -> Self {
        Self { q: z.q().to_vec(), p: z.p().to_vec(), t }
    }

    pub fn from_slice(z: &[f64], t: f64) -> Self {
        let n = z.len() / 2;
        Self { q: z[..n].to_vec(), p: z[n..].to_vec(), t }
    }

    /// `q, p` uniform in `[-1, 1]^n`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let z = PhasePoint::random(n, rng);
        Self::from_phase_point(&z, 0.0)
    }

    pub fn random_batch(n: usize, count: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(n, &mut rng)).collect()
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }

    pub fn to_phase_point(&self) -> PhasePoint {
        PhasePoint::from_qp(&self.q, &self.p).expect("validated state")
    }
}

/// Bond factors `b_i = e^{q_i - q_{i+1}}`, `i = 0..n-1`.
pub(crate) fn bonds(q: &[f64]) -> Result<Vec<f64>, TodaError> {
    q.windows(2)
        .enumerate()
        .map(|(i, w)| {
            let gap = w[0] - w[1];
            if gap.abs() > MAX_EXPONENT || !gap.is_finite() {
                Err(TodaError::Overflow { index: i + 1, gap })
            } else {
                Ok(gap.exp())
            }
        })
        .collect()
}

/// Forces `dp/dt` from positions.
pub(crate) fn forces(q: &[f64]) -> Result<Vec<f64>, TodaError> {
    let b = bonds(q)?;
    let n = q.len();
    Ok((0..n)
        .map(|j| {
            let left = if j >= 1 { b[j - 1] } else { 0.0 };
            let right = if j + 1 < n { b[j] } else { 0.0 };
            left - right
        })
        .collect())
}

/// Equations of motion `(dq/dt, dp/dt)`.
pub fn toda_rhs(s: &TodaState) -> Result<(Vec<f64>, Vec<f64>), TodaError> {
    Ok((s.p.clone(), forces(&s.q)?))
}

/// `h = ½ Σ p_i² + Σ e^{q_i - q_{i+1}}`.
pub fn toda_hamiltonian(s: &TodaState) -> Result<f64, TodaError> {
    let b = bonds(&s.q)?;
    Ok(0.5 * s.p.iter().map(|p| p * p).sum::<f64>() + b.iter().sum::<f64>())
}

/// The master symmetry `(E(q), E(p))` at `(q, p, t)`.
pub fn toda_generator(s: &TodaState) -> Result<(Vec<f64>, Vec<f64>), TodaError> {
    let n = s.n();
    let nf = n as f64;
    let (q, p, t) = (&s.q, &s.p, s.t);
    let b = bonds(q)?;
    let left = |j: usize| if j >= 1 { b[j - 1] } else { 0.0 };
    let right = |j: usize| if j + 1 < n { b[j] } else { 0.0 };
    let pl = |j: usize| if j >= 1 { p[j - 1] } else { 0.0 };
    let pr = |j: usize| if j + 1 < n { p[j + 1] } else { 0.0 };

    let total: f64 = p.iter().sum();
    let mut below = 0.0;
    let mut eq = Vec::with_capacity(n);
    let mut ep = Vec::with_capacity(n);
    for j in 0..n {
        let jf = j as f64;
        let above = total - below - p[j];
        eq.push(
            (nf - jf) * p[j] - 0.5 * below + 0.5 * above
                + 0.5 * t * (p[j] * p[j] + left(j) + right(j)),
        );
        ep.push(
            0.5 * p[j] * p[j] + (nf - jf + 1.0) * left(j) - (nf - jf - 1.0) * right(j)
                + 0.5 * t * ((pl(j) + p[j]) * left(j) - (p[j] + pr(j)) * right(j)),
        );
        below += p[j];
    }
    Ok((eq, ep))
}

/// Closed-form integrals `I_1..I_M`, `M <= 4`.
pub fn toda_integrals_closed(s: &TodaState, m: usize) -> Result<Vec<f64>, TodaError> {
    if m == 0 || m > 4 {
        return Err(TodaError::Order { order: m, max: 4 });
    }
    let b = bonds(&s.q)?;
    let p = &s.p;
    let n = s.n();
    let pow_sum = |k: i32| p.iter().map(|v| v.powi(k)).sum::<f64>();
    let mut out = vec![pow_sum(1)];
    if m >= 2 {
        out.push(0.5 * pow_sum(2) + b.iter().sum::<f64>());
    }
    if m >= 3 {
        let cross: f64 = (0..n - 1).map(|i| (p[i] + p[i + 1]) * b[i]).sum();
        out.push(pow_sum(3) / 3.0 + cross);
    }
    if m >= 4 {
        let cross: f64 = (0..n - 1)
            .map(|i| (p[i] * p[i] + p[i] * p[i + 1] + p[i + 1] * p[i + 1]) * b[i])
            .sum();
        let squares: f64 = b.iter().map(|v| v * v).sum();
        let next: f64 = (0..n.saturating_sub(2)).map(|i| b[i] * b[i + 1]).sum();
        out.push(0.25 * pow_sum(4) + cross + 0.5 * squares + next);
    }
    Ok(out)
}

/// The fourth integral with the cross term `(p_i + p_{i+1})² e^{q_i - q_{i+1}}`.
///
/// This variant is not conserved; it is kept to show that the mixed
/// coefficient must be 1 rather than 2.
pub fn toda_i4_doubled_cross(s: &TodaState) -> Result<f64, TodaError> {
    let b = bonds(&s.q)?;
    let p = &s.p;
    let extra: f64 = (0..s.n() - 1).map(|i| p[i] * p[i + 1] * b[i]).sum();
    Ok(toda_integrals_closed(s, 4)?[3] + extra)
}

/// Symmetric tridiagonal Lax matrix: diagonal `p_i`, off-diagonal `e^{(q_i - q_{i+1})/2}`.
pub fn lax_matrix(s: &TodaState) -> Result<DMatrix<f64>, TodaError> {
    let n = s.n();
    bonds(&s.q)?;
    let mut l = DMatrix::from_diagonal(&DVector::from_column_slice(&s.p));
    for i in 0..n.saturating_sub(1) {
        let a = (0.5 * (s.q[i] - s.q[i + 1])).exp();
        l[(i, i + 1)] = a;
        l[(i + 1, i)] = a;
    }
    Ok(l)
}

/// `I_m = tr(L^m)/m`, `m = 1..M`.
pub fn lax_trace_oracle(s: &TodaState, m: usize) -> Result<Vec<f64>, TodaError> {
    let l = lax_matrix(s)?;
    let mut power = l.clone();
    let mut out = Vec::with_capacity(m);
    for k in 1..=m {
        out.push(power.trace() / k as f64);
        power = &power * &l;
    }
    Ok(out)
}

/// `I_1..I_M`: closed form up to order 4, Lax traces beyond.
pub fn toda_integrals(s: &TodaState, m: usize) -> Result<Vec<f64>, TodaError> {
    if m <= 4 {
        toda_integrals_closed(s, m)
    } else {
        let mut out = toda_integrals_closed(s, 4)?;
        out.extend_from_slice(&lax_trace_oracle(s, m)?[4..]);
        Ok(out)
    }
}

/// The master symmetry as a time-dependent vector field on `R^{2n}`.
#[derive(Debug, Clone, Copy)]
pub struct TodaGenerator {
    pub n: usize,
}

impl VectorField for TodaGenerator {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64, z: &[f64]) -> DVector<f64> {
        match toda_generator(&TodaState::from_slice(z, t)) {
            Ok((eq, ep)) => DVector::from_iterator(z.len(), eq.into_iter().chain(ep)),
            Err(_) => DVector::from_element(z.len(), f64::NAN),
        }
    }
    fn is_time_dependent(&self) -> bool {
        true
    }
}

/// Time evolution `(p, F(q))` as a vector field.
#[derive(Debug, Clone, Copy)]
pub struct TodaFlow {
    pub n: usize,
}

impl VectorField for TodaFlow {
    fn dim(&self) -> usize {
        2 * self.n
    }
    fn eval(&self, t: f64, z: &[f64]) -> DVector<f64> {
        match toda_rhs(&TodaState::from_slice(z, t)) {
            Ok((dq, dp)) => DVector::from_iterator(z.len(), dq.into_iter().chain(dp)),
            Err(_) => DVector::from_element(z.len(), f64::NAN),
        }
    }
}

#[cfg(test)]
mod tests;
