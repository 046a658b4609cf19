use nalgebra::{DMatrix, DVector};

use super::*;
use crate::exterior::{
    exterior_derivative_two_form, flow, invert_bivector, lie_derivative_two_form, poisson_bracket,
    schouten_vb, BivectorField, CubicField, Differencer, FnTwoForm, HamiltonianField,
    RecurrenceVariant, Sign,
};

fn state(q: &[f64], p: &[f64], t: f64) -> TodaState {
    TodaState::new(q.to_vec(), p.to_vec(), t).unwrap()
}

/// Term-by-term transcription with 1-based indices, kept apart from `toda_generator`.
fn generator_by_hand(s: &TodaState) -> (Vec<f64>, Vec<f64>) {
    let n = s.n() as i64;
    let q = |i: i64| s.q[(i - 1) as usize];
    let p = |i: i64| if i >= 1 && i <= n { s.p[(i - 1) as usize] } else { 0.0 };
    let ex = |i: i64, j: i64| {
        if i >= 1 && j <= n {
            (q(i) - q(j)).exp()
        } else {
            0.0
        }
    };
    let t = s.t;
    let mut eq = vec![];
    let mut ep = vec![];
    for i in 1..=n {
        let e_l = epsilon(i - 1);
        let e_r = epsilon(n - i);
        ep.push(
            0.5 * p(i).powi(2) + e_l * (n - i + 2) as f64 * ex(i - 1, i)
                - e_r * (n - i) as f64 * ex(i, i + 1)
                + t / 2.0
                    * (e_l * (p(i - 1) + p(i)) * ex(i - 1, i)
                        - e_r * (p(i) + p(i + 1)) * ex(i, i + 1)),
        );
        let below: f64 = (1..i).map(p).sum();
        let above: f64 = (i + 1..=n).map(p).sum();
        eq.push(
            (n - i + 1) as f64 * p(i) - 0.5 * below
                + 0.5 * above
                + t / 2.0 * (p(i).powi(2) + e_l * ex(i - 1, i) + e_r * ex(i, i + 1)),
        );
    }
    (eq, ep)
}

/// Hand-derived `∂_c E^a`.
fn generator_jacobian(s: &TodaState) -> DMatrix<f64> {
    let n = s.n();
    let t = s.t;
    let (q, p) = (&s.q, &s.p);
    let b = |j: isize| {
        if j >= 0 && (j as usize) + 1 < n {
            (q[j as usize] - q[j as usize + 1]).exp()
        } else {
            0.0
        }
    };
    let pp = |j: isize| if j >= 0 && (j as usize) < n { p[j as usize] } else { 0.0 };
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let ji = j as isize;
        let (bl, br) = (b(ji - 1), b(ji));
        let lc = (n - j + 1) as f64;
        let rc = n as f64 - j as f64 - 1.0;
        // E(q_j)
        for k in 0..n {
            jac[(j, n + k)] = match k.cmp(&j) {
                std::cmp::Ordering::Less => -0.5,
                std::cmp::Ordering::Greater => 0.5,
                std::cmp::Ordering::Equal => (n - j) as f64 + t * p[j],
            };
        }
        if j >= 1 {
            jac[(j, j - 1)] = 0.5 * t * bl;
        }
        jac[(j, j)] = 0.5 * t * (br - bl);
        if j + 1 < n {
            jac[(j, j + 1)] = -0.5 * t * br;
        }
        // E(p_j)
        let r = n + j;
        jac[(r, n + j)] = p[j] + 0.5 * t * (bl - br);
        if j >= 1 {
            jac[(r, n + j - 1)] = 0.5 * t * bl;
            jac[(r, j - 1)] = lc * bl + 0.5 * t * (pp(ji - 1) + p[j]) * bl;
        }
        if j + 1 < n {
            jac[(r, n + j + 1)] = -0.5 * t * br;
            jac[(r, j + 1)] = rc * br + 0.5 * t * (p[j] + pp(ji + 1)) * br;
        }
        jac[(r, j)] = -lc * bl - rc * br
            - 0.5 * t * (pp(ji - 1) + p[j]) * bl
            - 0.5 * t * (p[j] + pp(ji + 1)) * br;
    }
    jac
}

#[test]
fn epsilon_values() {
    assert_eq!(epsilon(3), 1.0);
    assert_eq!(epsilon(-2), -1.0);
    assert_eq!(epsilon(0), 0.0);
}

#[test]
fn rhs_examples() {
    let (dq, dp) = toda_rhs(&state(&[0.4], &[1.3], 0.0)).unwrap();
    assert_eq!((dq, dp), (vec![1.3], vec![0.0]));
    let (dq, dp) = toda_rhs(&state(&[0.0, 0.0], &[0.0, 0.0], 0.0)).unwrap();
    assert_eq!(dq, vec![0.0, 0.0]);
    assert_eq!(dp, vec![-1.0, 1.0]);
    for s in TodaState::random_batch(5, 10, 1) {
        let (_, dp) = toda_rhs(&s).unwrap();
        assert!(dp.iter().sum::<f64>().abs() < 1e-14);
    }
}

#[test]
fn overflow_is_reported() {
    let s = state(&[0.0, 800.0], &[0.0, 0.0], 0.0);
    assert!(matches!(toda_rhs(&s), Err(TodaError::Overflow { index: 1, .. })));
    assert!(toda_generator(&s).is_err());
}

#[test]
fn hamiltonian_examples() {
    assert_eq!(toda_hamiltonian(&state(&[0.0], &[3.0], 0.0)).unwrap(), 4.5);
    assert_eq!(toda_hamiltonian(&state(&[0.0, 0.0], &[0.0, 0.0], 0.0)).unwrap(), 1.0);
}

#[test]
fn hamiltonian_field_is_the_equation_of_motion() {
    let w = canonical_poisson(3);
    let h = |z: &[f64]| toda_hamiltonian(&TodaState::from_slice(z, 0.0)).unwrap();
    let x = HamiltonianField { h: &h, w: &w, fd: Differencer::default() };
    for s in TodaState::random_batch(3, 5, 2) {
        let v = x.eval(0.0, &s.to_vec());
        let (dq, dp) = toda_rhs(&s).unwrap();
        let expect: Vec<f64> = dq.into_iter().chain(dp).collect();
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}

#[test]
fn generator_single_particle() {
    let (eq, ep) = toda_generator(&state(&[0.0], &[1.7], 0.0)).unwrap();
    assert_eq!(eq, vec![1.7]);
    assert!((ep[0] - 0.5 * 1.7 * 1.7).abs() < 1e-15);
}

#[test]
fn generator_matches_hand_transcription() {
    let (eq, ep) = toda_generator(&state(&[0.0, 0.0], &[0.0, 0.0], 0.0)).unwrap();
    assert_eq!(eq, vec![0.0, 0.0]);
    assert_eq!(ep, vec![-1.0, 2.0]);
    for (k, mut s) in TodaState::random_batch(4, 6, 3).into_iter().enumerate() {
        s.t = 0.7 * k as f64;
        let (a, b) = toda_generator(&s).unwrap();
        let (c, d) = generator_by_hand(&s);
        for (x, y) in a.iter().chain(&b).zip(c.iter().chain(&d)) {
            assert!((x - y).abs() < 1e-13, "{x} vs {y}");
        }
    }
}

#[test]
fn analytic_jacobian_oracle_matches_differences() {
    let fd = Differencer::default();
    for mut s in TodaState::random_batch(3, 4, 4) {
        s.t = 1.3;
        let e = TodaGenerator { n: 3 };
        let cols = fd.partials(&|z: &[f64]| e.eval(s.t, z).as_slice().to_vec(), &s.to_vec());
        let jac = generator_jacobian(&s);
        for a in 0..6 {
            for c in 0..6 {
                assert!((cols[c][a] - jac[(a, c)]).abs() < 1e-8, "({a},{c})");
            }
        }
    }
}

#[test]
fn schouten_vb_against_analytic_oracle() {
    let n = 2;
    let w = canonical_poisson(n);
    let wm = w.0.matrix().clone();
    for mut s in TodaState::random_batch(n, 5, 5) {
        s.t = 0.4;
        let got = schouten_vb(&TodaGenerator { n }, &w, s.t, &s.to_vec(), &Differencer::default());
        let j = generator_jacobian(&s);
        let oracle = DMatrix::from_fn(2 * n, 2 * n, |a, b| {
            (0..2 * n).map(|c| -wm[(c, b)] * j[(a, c)] - wm[(a, c)] * j[(b, c)]).sum::<f64>()
        });
        let scale = oracle.amax();
        assert!(scale > 1e-3);
        assert!((got.matrix() - &oracle).amax() < 1e-6 * scale);
    }
}

#[test]
fn flow_is_first_order_accurate_in_group_parameter() {
    let s = TodaState::random_batch(2, 1, 6).remove(0);
    let z0 = s.to_phase_point();
    let e = TodaGenerator { n: 2 };
    let e0 = e.eval(0.0, z0.as_slice());
    let defect = |a: f64| {
        let z = flow(&e, &z0, 0.0, a, 4).unwrap();
        z.as_slice()
            .iter()
            .zip(z0.as_slice())
            .zip(e0.iter())
            .map(|((z, z0), e)| (z - z0 - a * e).abs())
            .fold(0.0, f64::max)
    };
    let ratio = defect(1e-3) / defect(5e-4);
    assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn le_omega_display_matches_lie_derivative() {
    let n = 3;
    let omega = canonical_symplectic(n);
    for s in TodaState::random_batch(n, 10, 7) {
        let display = toda_le_omega(&s).unwrap();
        for t in [0.0, 1.0, 10.0] {
            let num = lie_derivative_two_form(
                &TodaGenerator { n },
                &omega,
                t,
                &s.to_vec(),
                &Differencer::default(),
            );
            assert!(display.sub(&num).max_abs() < 1e-6, "t = {t}");
        }
    }
}

#[test]
fn le_omega_single_particle() {
    let s = state(&[0.2], &[std::f64::consts::PI], 0.0);
    let m = toda_le_omega(&s).unwrap();
    assert_eq!(m.get(1, 0), std::f64::consts::PI);
}

#[test]
fn le_omega_is_closed() {
    let form = FnTwoForm::new(6, |z: &[f64]| toda_le_omega(&TodaState::from_slice(z, 0.0)).unwrap());
    for s in TodaState::random_batch(3, 5, 8) {
        let d = exterior_derivative_two_form(&form, &s.to_vec(), &Differencer::default());
        assert!(d.max_abs() < 1e-8);
    }
}

#[test]
fn lie_derivative_matches_flow_pullback() {
    let n = 2;
    let e = TodaGenerator { n };
    let omega = canonical_symplectic(n).0;
    let a = 1e-4;
    for s in TodaState::random_batch(n, 3, 9) {
        let z0 = s.to_vec();
        let map = |z: &[f64]| {
            flow(&e, &crate::exterior::PhasePoint::new(z.to_vec()).unwrap(), 0.0, a, 2)
                .unwrap()
                .into_vec()
        };
        let fd = Differencer { stencil: crate::exterior::Stencil::Central4, relative_step: 1e-3 };
        let cols = fd.partials(&map, &z0);
        let jac = DMatrix::from_fn(2 * n, 2 * n, |r, c| cols[c][r]);
        let pulled = jac.transpose() * omega.matrix() * &jac;
        let estimate = (pulled - omega.matrix()) / a;
        let exact = toda_le_omega(&s).unwrap();
        let err = (estimate - exact.matrix()).amax();
        assert!(err < 100.0 * a, "err {err:e}");
    }
}

#[test]
fn integrals_examples() {
    let s = state(&[0.3], &[1.5], 0.0);
    let i = toda_integrals_closed(&s, 4).unwrap();
    for (m, v) in i.iter().enumerate() {
        let k = (m + 1) as i32;
        assert!((v - 1.5_f64.powi(k) / k as f64).abs() < 1e-14);
    }
    for s in TodaState::random_batch(5, 10, 10) {
        let closed = toda_integrals_closed(&s, 4).unwrap();
        let lax = lax_trace_oracle(&s, 4).unwrap();
        assert_eq!(closed[1], toda_hamiltonian(&s).unwrap());
        for (a, b) in closed.iter().zip(&lax) {
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }
    assert!(toda_integrals_closed(&s, 5).is_err());
}

#[test]
fn leapfrog_free_particle_is_exact() {
    let s = state(&[0.5], &[-0.25], 0.0);
    let traj = integrate_toda(&s, 1e-2, 3.0, Integrator::Leapfrog).unwrap();
    for (t, st) in traj.times.iter().zip(&traj.states) {
        assert!((st.q[0] - (0.5 - 0.25 * t)).abs() < 1e-13);
        assert_eq!(st.p[0], -0.25);
    }
}

fn energy_error(s: &TodaState, dt: f64) -> f64 {
    let traj = integrate_toda(s, dt, 10.0, Integrator::Leapfrog).unwrap();
    let h0 = toda_hamiltonian(s).unwrap();
    traj.states
        .iter()
        .map(|st| (toda_hamiltonian(st).unwrap() - h0).abs() / h0.abs())
        .fold(0.0, f64::max)
}

#[test]
fn leapfrog_energy_error_is_bounded_and_second_order() {
    let s = TodaState::random_batch(4, 1, 11).remove(0);
    let coarse = energy_error(&s, 1e-3);
    let fine = energy_error(&s, 5e-4);
    assert!(coarse < 1e-6, "{coarse:e}");
    assert!((coarse / fine - 4.0).abs() < 0.5, "{coarse:e} {fine:e}");
    assert!(energy_error(&s, 2.5e-4) < 1e-8);
}

#[test]
fn doubled_cross_term_is_not_conserved() {
    let s = TodaState::random_batch(3, 1, 23).remove(0);
    let traj = integrate_toda(&s, 1e-3, 5.0, Integrator::Rk4).unwrap();
    let a0 = toda_i4_doubled_cross(&s).unwrap();
    let drift = traj
        .states
        .iter()
        .map(|st| (toda_i4_doubled_cross(st).unwrap() - a0).abs())
        .fold(0.0, f64::max);
    assert!(drift > 1e-2, "{drift:e}");
}

#[test]
fn two_particle_scattering_exchanges_momenta() {
    let s = state(&[-12.0, 12.0], &[1.0, -0.5], 0.0);
    let traj = integrate_toda(&s, 1e-2, 60.0, Integrator::Rk4).unwrap();
    let end = traj.last();
    assert!((end.p[0] + 0.5).abs() < 1e-6, "{:?}", end.p);
    assert!((end.p[1] - 1.0).abs() < 1e-6);
}

#[test]
fn invalid_step_rejected() {
    let s = state(&[0.0], &[0.0], 0.0);
    assert!(integrate_toda(&s, 0.0, 1.0, Integrator::Rk4).is_err());
    assert!(integrate_toda(&s, -1e-3, 1.0, Integrator::Leapfrog).is_err());
}

#[test]
fn symmetry_residual_vanishes_for_master_symmetry() {
    let s = TodaState::random_batch(3, 1, 12).remove(0);
    let traj = integrate_toda(&s, 1e-3, 5.0, Integrator::Leapfrog).unwrap();
    let r = toda_symmetry_residual(&traj).unwrap();
    assert!(r.max < 1e-5, "{:e}", r.max);
    assert!(r.warning.is_none());
}

#[test]
fn time_evolution_is_a_symmetry() {
    let s = TodaState::random_batch(3, 1, 13).remove(0);
    let traj = integrate_toda(&s, 1e-3, 2.0, Integrator::Rk4).unwrap();
    let r = symmetry_residual_with(&traj, &toda_rhs).unwrap();
    assert!(r.max < 1e-5, "{:e}", r.max);
}

#[test]
fn perturbed_generator_residual_is_linear_in_perturbation() {
    let s = TodaState::random_batch(3, 1, 14).remove(0);
    let traj = integrate_toda(&s, 1e-3, 2.0, Integrator::Rk4).unwrap();
    let residual = |delta: f64| {
        let g = move |st: &TodaState| {
            let (mut eq, ep) = toda_generator(st)?;
            for (e, q) in eq.iter_mut().zip(&st.q) {
                *e += delta * q;
            }
            Ok((eq, ep))
        };
        symmetry_residual_with(&traj, &g).unwrap().max
    };
    let r1 = residual(1e-2);
    let r2 = residual(2e-2);
    assert!(r1 > 1e-4);
    assert!((r2 / r1 - 2.0).abs() < 0.05, "{r1:e} {r2:e}");
}

#[test]
fn coarse_trajectory_warns() {
    let s = TodaState::random_batch(2, 1, 15).remove(0);
    let traj = integrate_toda(&s, 0.05, 1.0, Integrator::Rk4).unwrap();
    assert!(toda_symmetry_residual(&traj).unwrap().warning.is_some());
}

#[test]
fn master_symmetry_is_non_noether_and_yang_baxter() {
    for s in TodaState::random_batch(3, 5, 16) {
        let r = toda_verify_nonnoether(&s);
        assert!(!r.noether && r.commutator_norm > 1e-3);
        assert!(r.yang_baxter_holds, "{:e}", r.yang_baxter_scaled);
    }
}

#[test]
fn hamiltonian_field_is_noether() {
    let w = canonical_poisson(2);
    let h = |z: &[f64]| toda_hamiltonian(&TodaState::from_slice(z, 0.0)).unwrap();
    let x = HamiltonianField { h: &h, w: &w, fd: Differencer::default() };
    let s = TodaState::random_batch(2, 1, 17).remove(0);
    let r = verify_nonnoether(&x, &s.to_vec(), 0.0);
    assert!(r.noether, "{:e}", r.commutator_norm);
}

#[test]
fn cubic_field_breaks_yang_baxter() {
    let e = CubicField::random(4, 3);
    let z = TodaState::random_batch(2, 1, 18).remove(0).to_vec();
    let r = verify_nonnoether(&e, &z, 0.0);
    assert!(!r.yang_baxter_holds, "{:e}", r.yang_baxter_scaled);
}

#[test]
fn calibration_is_unique_and_deterministic() {
    let a = calibrate_toda(3, 10, 0, RecurrenceVariant::TodaWeighted).unwrap();
    let b = calibrate_toda(3, 10, 99, RecurrenceVariant::TodaWeighted).unwrap();
    assert_eq!(a.calibration, b.calibration);
    assert_eq!(a.calibration.inverse_sign, Sign::Minus);
    assert_eq!(a.calibration.recurrence_sign, Sign::Minus);
    assert!(a.max_residual < 1e-9);
}

#[test]
fn printed_and_field_recurrences_fail_calibration() {
    assert!(calibrate_toda(3, 10, 0, RecurrenceVariant::Toda).is_err());
    assert!(calibrate_toda(3, 10, 0, RecurrenceVariant::Field).is_err());
}

#[test]
fn pipeline_reproduces_lax_traces() {
    let cal = calibrate_toda(3, 10, 0, RecurrenceVariant::TodaWeighted).unwrap().calibration;
    for n in [3, 4] {
        for s in TodaState::random_batch(n, 5, 19) {
            let ladder = pipeline_ladder(&s, &cal, n).unwrap();
            let lax = lax_trace_oracle(&s, n).unwrap();
            for (a, b) in ladder.i.iter().zip(&lax) {
                assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{a} vs {b}");
            }
            // I_2 is the energy
            assert!((ladder.i[1] - toda_hamiltonian(&s).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn canonical_pair_are_mutual_inverses() {
    let w = canonical_poisson(1);
    let s = invert_bivector(&w, &[0.0, 0.0], Sign::Minus).unwrap();
    assert_eq!(s, canonical_symplectic(1).0);
    let prod = w.eval(&[0.0, 0.0]).matrix() * s.matrix();
    assert_eq!(prod, -DMatrix::<f64>::identity(2, 2));
}

#[test]
fn brackets_of_integrals() {
    let w = canonical_poisson(3);
    for s in TodaState::random_batch(3, 5, 20) {
        let z = s.to_vec();
        let v = poisson_bracket(&|z| z[0], &|z| z[3], &w, &z, &Differencer::default());
        assert!((v + 1.0).abs() < 1e-10);
        let m = involutivity_matrix(&s, 3).unwrap();
        assert!(m.amax() < 1e-6, "{}", m.amax());
        assert_eq!(m[(1, 1)], 0.0);
    }
}

#[test]
fn integrals_are_independent() {
    for n in [2, 3, 5] {
        for s in TodaState::random_batch(n, 4, 21) {
            let j = integrals_jacobian(&s, n).unwrap();
            let r = jacobian_rank(&j);
            assert_eq!(r.rank, n);
        }
    }
}

#[test]
fn lax_first_two_traces() {
    let s = TodaState::random_batch(4, 1, 22).remove(0);
    let lax = lax_trace_oracle(&s, 2).unwrap();
    assert!((lax[0] - s.p.iter().sum::<f64>()).abs() < 1e-14);
    assert!((lax[1] - toda_hamiltonian(&s).unwrap()).abs() < 1e-13);
    let _ = DVector::<f64>::zeros(1);
}

