//! Model-independent checks: integration, symmetry residuals, conservation,
//! bracket calibration, involutivity and the second 2-form.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{IntegrableModel, PdeError, Scheme};
use crate::fieldkit::{
    functional_gradient, hamiltonian_flow, lie_derivative_numeric, smooth_taper, FieldError,
    GridFunction, PoissonField, PoissonStructure,
};

/// Candidate overall constants `s` of the field Poisson bracket.
pub const SCALE_CANDIDATES: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
/// Candidate constants `κ` relating the displayed `L_E ω` to the numerical one.
pub const DISPLAY_FACTOR_CANDIDATES: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

const SCALE_TOLERANCE: f64 = 1e-4;
const DISPLAY_TOLERANCE: f64 = 1e-3;
const GROWTH_LIMIT: f64 = 1e6;
const COARSE_DT: f64 = 2e-3;
/// Residual evaluation spacing in time units.
const RESIDUAL_SPACING: f64 = 0.01;
/// Residual low-pass cutoff: two thirds of the Nyquist wavenumber at `dx = 40/256`.
const RESIDUAL_CUTOFF: f64 = 2.0 / 3.0 * PI * 256.0 / 40.0;

#[derive(Debug, Clone)]
pub struct PdeTrajectory<U> {
    pub times: Vec<f64>,
    pub snapshots: Vec<U>,
    pub dt: f64,
    pub scheme: Scheme,
}

impl<U> PdeTrajectory<U> {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> &U {
        self.snapshots.last().expect("trajectory holds the initial state")
    }

    /// Snapshot indices about `spacing` time units apart, plus the last one.
    pub fn sample_indices(&self, spacing: f64) -> Vec<usize> {
        let stride = ((spacing / self.dt).round() as usize).max(1);
        let mut idx: Vec<usize> = (0..self.len()).step_by(stride).collect();
        if idx.last() != Some(&(self.len() - 1)) {
            idx.push(self.len() - 1);
        }
        idx
    }
}

/// Integrates from `u0` to `t_end` with `round(t_end/dt)` uniform steps.
pub fn integrate<M: IntegrableModel>(
    model: &M,
    u0: &M::Field,
    dt: f64,
    t_end: f64,
) -> Result<PdeTrajectory<M::Field>, PdeError> {
    if !(dt.is_finite() && dt > 0.0 && t_end.is_finite() && t_end > 0.0) {
        return Err(PdeError::InvalidStep { dt, t_end });
    }
    let steps = (t_end / dt).round() as usize;
    if steps == 0 {
        return Err(PdeError::InvalidStep { dt, t_end });
    }
    model.grid().same_as(u0.grid())?;
    let propagate = model.propagator(dt);
    let reference = match u0.sup_norm() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::with_capacity(steps + 1);
    times.push(0.0);
    snapshots.push(u0.clone());
    for step in 1..=steps {
        let next = propagate(snapshots.last().unwrap());
        let time = step as f64 * dt;
        let growth = next.sup_norm() / reference;
        if !next.is_finite() || !(growth <= GROWTH_LIMIT) {
            return Err(PdeError::Divergence { time, growth });
        }
        times.push(time);
        snapshots.push(next);
    }
    Ok(PdeTrajectory { times, snapshots, dt, scheme: model.scheme() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub max: f64,
    pub warning: Option<String>,
}

/// Symmetry-condition residual of the model's own generator.
pub fn linearized_residual<M: IntegrableModel>(
    model: &M,
    traj: &PdeTrajectory<M::Field>,
) -> Result<ResidualSeries, PdeError> {
    check_initial_support(traj)?;
    linearized_residual_with(model, traj, &|u, t| model.generator_unchecked(u, t))
}

fn check_initial_support<U: GridFunction>(traj: &PdeTrajectory<U>) -> Result<(), PdeError> {
    match traj.snapshots.first() {
        Some(u0) => super::check_support(u0),
        None => Err(PdeError::ShortTrajectory(0)),
    }
}

/// `d/dt E(u(t), t) - L_u(E)` on snapshots about 0.01 apart, where the time
/// derivative is a central difference across neighbouring snapshots and
/// `L_u` is the linearized right-hand side.
///
/// `E` is multiplied by a smooth taper (1 on `|x| <= 0.3L`, 0 beyond `0.45L`)
/// so the `x`-weighted and nonlocal terms do not wrap around the periodic
/// seam; the difference is projected on `|k| <= k_c` and measured in sup norm
/// on `|x| <= L/4`.
pub fn linearized_residual_with<M: IntegrableModel>(
    model: &M,
    traj: &PdeTrajectory<M::Field>,
    generator: &(dyn Fn(&M::Field, f64) -> Result<M::Field, PdeError> + Sync),
) -> Result<ResidualSeries, PdeError> {
    if traj.len() < 3 {
        return Err(PdeError::ShortTrajectory(traj.len()));
    }
    let grid = model.grid();
    let chi = smooth_taper(grid, 0.3, 0.45);
    let nyquist_k = PI / grid.dx();
    let cutoff = RESIDUAL_CUTOFF.min(2.0 / 3.0 * nyquist_k);
    let dt = traj.dt;
    let stride = ((RESIDUAL_SPACING / dt).round() as usize).max(1);
    let tapered = |j: usize| -> Result<M::Field, PdeError> {
        Ok(generator(&traj.snapshots[j], traj.times[j])?.weighted(&chi))
    };
    let indices: Vec<usize> = (1..traj.len() - 1).step_by(stride).collect();
    let values = indices
        .par_iter()
        .map(|&j| {
            let (ep, em, e0) = (tapered(j + 1)?, tapered(j - 1)?, tapered(j)?);
            let dedt = M::Field::lincomb(0.5 / dt, &ep, -0.5 / dt, &em);
            let r = dedt.sub(&model.linearized_rhs(&traj.snapshots[j], &e0));
            Ok(r.lowpass(cutoff).window_sup(0.25))
        })
        .collect::<Result<Vec<f64>, PdeError>>()?;
    let max = values.iter().cloned().fold(0.0, f64::max);
    let warning = (dt > COARSE_DT).then(|| {
        format!("dt = {dt} is coarse; the O(dt²) snapshot difference may dominate the residual")
    });
    Ok(ResidualSeries { times: indices.iter().map(|&j| traj.times[j]).collect(), values, max, warning })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftSeries {
    pub times: Vec<f64>,
    pub ladder: Vec<[f64; 4]>,
    pub hamiltonian: Vec<f64>,
    /// `max_t |I_m(t) - I_m(0)| / (1 + |I_m(0)|)`.
    pub max_relative: [f64; 4],
    pub hamiltonian_relative: f64,
}

impl DriftSeries {
    pub fn worst(&self) -> f64 {
        self.max_relative.iter().cloned().fold(0.0, f64::max)
    }
}

/// Ladder and Hamiltonian along the trajectory, sampled about every 0.01.
pub fn ladder_drift<M: IntegrableModel>(model: &M, traj: &PdeTrajectory<M::Field>) -> DriftSeries {
    let ladder = model.ladder();
    let h = model.hamiltonian_functional();
    let idx = traj.sample_indices(RESIDUAL_SPACING);
    let rows: Vec<([f64; 4], f64)> = idx
        .par_iter()
        .map(|&j| {
            let u = &traj.snapshots[j];
            ([0, 1, 2, 3].map(|m| ladder[m].eval(u)), h.eval(u))
        })
        .collect();
    let (first, h0) = rows[0];
    let mut max_relative = [0.0; 4];
    let mut hamiltonian_relative: f64 = 0.0;
    for (values, hv) in &rows {
        for m in 0..4 {
            let d = (values[m] - first[m]).abs() / (1.0 + first[m].abs());
            max_relative[m] = f64::max(max_relative[m], d);
        }
        hamiltonian_relative = hamiltonian_relative.max((hv - h0).abs() / (1.0 + h0.abs()));
    }
    DriftSeries {
        times: idx.iter().map(|&j| traj.times[j]).collect(),
        ladder: rows.iter().map(|r| r.0).collect(),
        hamiltonian: rows.iter().map(|r| r.1).collect(),
        max_relative,
        hamiltonian_relative,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureCalibration {
    pub structure: PoissonStructure,
    /// Relative sup deviation of `{h, u}` from the right-hand side.
    pub residual: f64,
    /// `(s, residual)` for every candidate.
    pub candidates: Vec<(f64, f64)>,
}

fn relative_sup<U: GridFunction>(a: &U, b: &U) -> f64 {
    a.sub(b).sup_norm() / b.sup_norm().max(f64::MIN_POSITIVE)
}

/// Picks the bracket constant `s` for which `{h, u}` reproduces `u_t`.
pub fn calibrate_structure<M: IntegrableModel>(
    model: &M,
    u: &M::Field,
) -> Result<StructureCalibration, PdeError> {
    let kind = <M::Field as PoissonField>::KIND;
    let unit = hamiltonian_flow(&model.hamiltonian_functional(), u, &PoissonStructure::calibrated(kind, 1.0))?;
    let rhs = model.rhs(u);
    let candidates: Vec<(f64, f64)> =
        SCALE_CANDIDATES.iter().map(|&s| (s, relative_sup(&unit.scaled(s), &rhs))).collect();
    let accepted: Vec<&(f64, f64)> = candidates.iter().filter(|c| c.1 < SCALE_TOLERANCE).collect();
    match accepted.as_slice() {
        [(s, r)] => Ok(StructureCalibration {
            structure: PoissonStructure::calibrated(kind, *s),
            residual: *r,
            candidates: candidates.clone(),
        }),
        _ => Err(PdeError::Calibration { what: "bracket constant", residuals: candidates }),
    }
}

/// `|{h, u} - u_t|∞ / |u_t|∞` under a calibrated structure.
pub fn hamiltonian_flow_residual<M: IntegrableModel>(
    model: &M,
    u: &M::Field,
    structure: &PoissonStructure,
) -> Result<f64, PdeError> {
    let flow = hamiltonian_flow(&model.hamiltonian_functional(), u, structure)?;
    Ok(relative_sup(&flow, &model.rhs(u)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Involutivity {
    /// Antisymmetrized `{I_k, I_m}`; the diagonal is exactly zero.
    pub matrix: Vec<Vec<f64>>,
    pub max_off_diagonal: f64,
    /// `{I_3, G}` for the model's non-conserved probe `G`.
    pub probe: f64,
}

pub fn involutivity_matrix<M: IntegrableModel>(
    model: &M,
    u: &M::Field,
    structure: &PoissonStructure,
) -> Result<Involutivity, PdeError> {
    let s = structure.scale()?;
    if structure.kind != <M::Field as PoissonField>::KIND {
        return Err(FieldError::StructureMismatch(structure.kind).into());
    }
    let mut functionals = model.ladder();
    functionals.push(model.probe());
    let grads: Vec<M::Field> = functionals.iter().map(|f| functional_gradient(f, u)).collect();
    let pair = |a: usize, b: usize| -> Result<f64, PdeError> {
        let ab = M::Field::pair_gradients(s, &grads[a], &grads[b])?;
        let ba = M::Field::pair_gradients(s, &grads[b], &grads[a])?;
        Ok(0.5 * (ab - ba))
    };
    let m = functionals.len() - 1;
    let mut matrix = vec![vec![0.0; m]; m];
    let mut max_off_diagonal: f64 = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            let v = pair(a, b)?;
            matrix[a][b] = v;
            matrix[b][a] = -v;
            max_off_diagonal = max_off_diagonal.max(v.abs());
        }
    }
    Ok(Involutivity { matrix, max_off_diagonal, probe: pair(2, m)? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeOmegaReport {
    /// Calibrated `κ` with `L_E ω (numerical) = κ · display`.
    pub factor: f64,
    /// `(κ, worst relative deviation on the calibration pairs)`.
    pub candidates: Vec<(f64, f64)>,
    /// Relative deviations on the fresh pairs.
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    /// Largest of `|numerical|`, `|display|` at `δ1 = δ2`.
    pub diagonal: f64,
}

/// Compares the displayed second 2-form with the Lie derivative of the
/// canonical one along the generator at time `t`. `κ` is fixed on
/// `calibration_pairs` variation pairs, then checked on `check_pairs` fresh
/// ones.
pub fn le_omega_check<M: IntegrableModel>(
    model: &M,
    u: &M::Field,
    t: f64,
    seed: u64,
    calibration_pairs: usize,
    check_pairs: usize,
) -> Result<LeOmegaReport, PdeError> {
    super::check_support(u)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nan = M::Field::zeros(model.grid()).scaled(f64::NAN);
    let generator = |v: &M::Field| model.generator_unchecked(v, t).unwrap_or_else(|_| nan.clone());
    let omega = |b: &M::Field, d1: &M::Field, d2: &M::Field| model.canonical_form(b, d1, d2);
    let both = |d1: &M::Field, d2: &M::Field| -> Result<(f64, f64), PdeError> {
        let numeric = lie_derivative_numeric(&omega, &generator, u, d1, d2)?;
        Ok((numeric, model.second_form(u, d1, d2)?))
    };
    let deviation = |numeric: f64, display: f64| {
        (numeric - display).abs() / numeric.abs().max(display.abs()).max(f64::MIN_POSITIVE)
    };
    let mut draw = |count: usize| -> Vec<(M::Field, M::Field)> {
        (0..count).map(|_| (model.random_variation(&mut rng), model.random_variation(&mut rng))).collect()
    };
    let calibration = draw(calibration_pairs.max(1))
        .iter()
        .map(|(a, b)| both(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let candidates: Vec<(f64, f64)> = DISPLAY_FACTOR_CANDIDATES
        .iter()
        .map(|&k| {
            let worst = calibration.iter().map(|&(n, d)| deviation(n, k * d)).fold(0.0, f64::max);
            (k, worst)
        })
        .collect();
    let accepted: Vec<f64> = candidates.iter().filter(|c| c.1 < DISPLAY_TOLERANCE).map(|c| c.0).collect();
    let factor = match accepted.as_slice() {
        [k] => *k,
        _ => return Err(PdeError::Calibration { what: "display factor", residuals: candidates }),
    };
    let fresh = draw(check_pairs + 1);
    let deviations = fresh[..check_pairs]
        .iter()
        .map(|(a, b)| both(a, b).map(|(n, d)| deviation(n, factor * d)))
        .collect::<Result<Vec<f64>, PdeError>>()?;
    let same = &fresh[check_pairs].0;
    let (n, d) = both(same, same)?;
    Ok(LeOmegaReport {
        factor,
        candidates,
        max_deviation: deviations.iter().cloned().fold(0.0, f64::max),
        deviations,
        diagonal: n.abs().max(d.abs()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankProbe {
    pub samples: usize,
    pub singular_values: Vec<f64>,
    /// Singular values above `1e-8·σ_max`.
    pub rank: usize,
}

/// Numerical rank of the Gram matrix of the second 2-form on random variations.
pub fn second_form_rank<M: IntegrableModel>(
    model: &M,
    u: &M::Field,
    samples: usize,
    seed: u64,
) -> Result<RankProbe, PdeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<M::Field> = (0..samples).map(|_| model.random_variation(&mut rng)).collect();
    let mut gram = DMatrix::<f64>::zeros(samples, samples);
    for a in 0..samples {
        for b in (a + 1)..samples {
            let v = model.second_form(u, &vars[a], &vars[b])?;
            gram[(a, b)] = v;
            gram[(b, a)] = -v;
        }
    }
    let mut singular_values: Vec<f64> = gram.singular_values().iter().cloned().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let top = singular_values.first().cloned().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > 1e-8 * top && s > 0.0).count();
    Ok(RankProbe { samples, singular_values, rank })
}
