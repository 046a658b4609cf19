use serde::{Deserialize, Serialize};

use super::{bonds, forces, toda_generator, TodaError, TodaState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Kick-drift-kick Störmer-Verlet; `h` is separable.
    Leapfrog,
    Rk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TodaTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<TodaState>,
    pub method: Integrator,
    pub dt: f64,
}

impl TodaTrajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &TodaState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Integrates from `s0` to `s0.t + t_end` with `round(t_end/dt)` uniform steps.
pub fn integrate_toda(
    s0: &TodaState,
    dt: f64,
    t_end: f64,
    method: Integrator,
) -> Result<TodaTrajectory, TodaError> {
    if !(dt > 0.0) || !dt.is_finite() || !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(TodaError::InvalidStep { dt, t_end });
    }
    let steps = (t_end / dt).round() as usize;
    let n = s0.n();
    let t0 = s0.t;
    let mut q = s0.q.clone();
    let mut p = s0.p.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(t0);
    states.push(s0.clone());

    let diverged = |k: usize| TodaError::Divergence { time: t0 + k as f64 * dt };
    let mut force = forces(&q).map_err(|_| diverged(0))?;
    for k in 1..=steps {
        match method {
            Integrator::Leapfrog => {
                for i in 0..n {
                    p[i] += 0.5 * dt * force[i];
                    q[i] += dt * p[i];
                }
                force = forces(&q).map_err(|_| diverged(k))?;
                for i in 0..n {
                    p[i] += 0.5 * dt * force[i];
                }
            }
            Integrator::Rk4 => {
                let deriv = |q: &[f64], p: &[f64]| -> Result<(Vec<f64>, Vec<f64>), TodaError> {
                    Ok((p.to_vec(), forces(q)?))
                };
                let shift = |x: &[f64], d: &[f64], h: f64| -> Vec<f64> {
                    x.iter().zip(d).map(|(a, b)| a + h * b).collect()
                };
                let (k1q, k1p) = deriv(&q, &p).map_err(|_| diverged(k))?;
                let (k2q, k2p) = deriv(&shift(&q, &k1q, 0.5 * dt), &shift(&p, &k1p, 0.5 * dt))
                    .map_err(|_| diverged(k))?;
                let (k3q, k3p) = deriv(&shift(&q, &k2q, 0.5 * dt), &shift(&p, &k2p, 0.5 * dt))
                    .map_err(|_| diverged(k))?;
                let (k4q, k4p) =
                    deriv(&shift(&q, &k3q, dt), &shift(&p, &k3p, dt)).map_err(|_| diverged(k))?;
                for i in 0..n {
                    q[i] += dt / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
                    p[i] += dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
                }
                bonds(&q).map_err(|_| diverged(k))?;
            }
        }
        if q.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(diverged(k));
        }
        let t = t0 + k as f64 * dt;
        times.push(t);
        states.push(TodaState { q: q.clone(), p: p.clone(), t });
    }
    Ok(TodaTrajectory { times, states, method, dt })
}

/// Residuals of the linearized equations along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryResidual {
    pub times: Vec<f64>,
    /// `max_i |d/dt E(q_i) - E(p_i)|` per interior time.
    pub position: Vec<f64>,
    /// `max_i |d/dt E(p_i) - (linearized force)_i|` per interior time.
    pub momentum: Vec<f64>,
    pub max: f64,
    pub warning: Option<String>,
}

/// Residual of the master symmetry along `traj`.
pub fn toda_symmetry_residual(traj: &TodaTrajectory) -> Result<SymmetryResidual, TodaError> {
    symmetry_residual_with(traj, &toda_generator)
}

/// Residual of an arbitrary generator `(E(q), E(p))` along `traj`.
///
/// Total time derivatives are fourth-order central differences across the
/// neighbouring snapshots (second order when fewer than five exist), so
/// explicit `t` dependence of the generator is included.
pub fn symmetry_residual_with(
    traj: &TodaTrajectory,
    generator: &dyn Fn(&TodaState) -> Result<(Vec<f64>, Vec<f64>), TodaError>,
) -> Result<SymmetryResidual, TodaError> {
    let warning = (traj.dt > 1e-2 || traj.len() < 3).then(|| {
        format!(
            "trajectory too coarse for a time-difference residual (dt = {}, {} samples)",
            traj.dt,
            traj.len()
        )
    });
    let values: Vec<(Vec<f64>, Vec<f64>)> =
        traj.states.iter().map(generator).collect::<Result<_, _>>()?;
    let n = traj.states.first().map_or(0, TodaState::n);
    let mut times = Vec::new();
    let mut position = Vec::new();
    let mut momentum = Vec::new();
    let reach = if traj.len() >= 5 { 2 } else { 1 };
    let rate = |k: usize, f: &dyn Fn(usize) -> f64| {
        if reach == 2 {
            (8.0 * (f(k + 1) - f(k - 1)) - (f(k + 2) - f(k - 2))) / (6.0 * (traj.times[k + 1] - traj.times[k - 1]))
        } else {
            (f(k + 1) - f(k - 1)) / (traj.times[k + 1] - traj.times[k - 1])
        }
    };
    for k in reach..traj.len().saturating_sub(reach) {
        let (eq, ep) = &values[k];
        let b = bonds(&traj.states[k].q)?;
        let mut r1 = 0.0_f64;
        let mut r2 = 0.0_f64;
        for i in 0..n {
            let dq = rate(k, &|j| values[j].0[i]);
            let dp = rate(k, &|j| values[j].1[i]);
            let left = if i >= 1 { b[i - 1] * (eq[i - 1] - eq[i]) } else { 0.0 };
            let right = if i + 1 < n { b[i] * (eq[i] - eq[i + 1]) } else { 0.0 };
            r1 = r1.max((dq - ep[i]).abs());
            r2 = r2.max((dp - (left - right)).abs());
        }
        times.push(traj.times[k]);
        position.push(r1);
        momentum.push(r2);
    }
    let max = position.iter().chain(&momentum).fold(0.0_f64, |m, v| m.max(*v));
    Ok(SymmetryResidual { times, position, momentum, max, warning })
}
