use std::sync::OnceLock;

use binoether_core::exterior::{newton_recurrence, AntisymMatrix, PhasePoint, Trivector, VectorField};
use binoether_core::fieldkit::{ComplexField, Grid, GridFunction, RealField};
use binoether_core::harness::{
    emit, read_series_csv, run, CheckResult, Direction, ExperimentConfig, Model, OutputFormat, Report,
};
use binoether_core::pdemodels::{integrate, FieldPreset, IntegrableModel, Kdv, ModelKind, Nse};
use binoether_core::toda::{
    calibrate_toda, epsilon, integrate_toda, lax_trace_oracle, pipeline_ladder, toda_integrals_closed,
    Integrator, TodaGenerator, TodaState,
};
use binoether_core::exterior::RecurrenceVariant;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn toda_state(max_n: usize) -> impl Strategy<Value = TodaState> {
    (1..=max_n).prop_flat_map(|n| {
        (prop::collection::vec(-1.0..1.0f64, n), prop::collection::vec(-1.0..1.0f64, n))
            .prop_map(|(q, p)| TodaState::new(q, p, 0.0).unwrap())
    })
}

fn kdv_report() -> &'static Report {
    static REPORT: OnceLock<Report> = OnceLock::new();
    REPORT.get_or_init(|| {
        run(&ExperimentConfig::from_toml_str("model = \"kdv\"\ndt = 1e-3\nt_end = 0.05\n").unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phase_points_need_even_finite_coordinates(z in prop::collection::vec(-5.0..5.0f64, 0..12), bad in any::<bool>()) {
        let mut z = z;
        if bad && !z.is_empty() {
            z[0] = f64::NAN;
        }
        let ok = !z.is_empty() && z.len() % 2 == 0 && !(bad && !z.is_empty());
        let p = PhasePoint::new(z.clone());
        prop_assert_eq!(p.is_ok(), ok);
        if let Ok(p) = p {
            prop_assert_eq!(p.dim(), 2 * p.n());
        }
    }

    #[test]
    fn generator_is_deterministic_with_length_2n(s in toda_state(6), t in -3.0..3.0f64) {
        let e = TodaGenerator { n: s.n() };
        let a = e.eval(t, &s.to_vec());
        let b = e.eval(t, &s.to_vec());
        prop_assert_eq!(a.len(), 2 * s.n());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn antisymmetric_matrices_are_exact(d in 1usize..8, seed in prop::collection::vec(-10.0..10.0f64, 64)) {
        let m = DMatrix::from_fn(d, d, |a, b| seed[(a * 8 + b) % 64]);
        let w = AntisymMatrix::from_matrix(m);
        for a in 0..d {
            for b in 0..d {
                prop_assert_eq!(w.get(a, b), -w.get(b, a));
            }
        }
    }

    #[test]
    fn trivectors_are_totally_antisymmetric(d in 3usize..6, seed in prop::collection::vec(-1.0..1.0f64, 125)) {
        let t = Trivector::from_ordered(d, |a, b, c| seed[(a * 25 + b * 5 + c) % 125]);
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = t.get(a, b, c);
                    prop_assert_eq!(v, -t.get(b, a, c));
                    prop_assert_eq!(v, -t.get(a, c, b));
                    prop_assert_eq!(v, -t.get(c, b, a));
                }
            }
        }
    }

    #[test]
    fn epsilon_is_odd(k in -1000i64..1000) {
        prop_assert_eq!(epsilon(k), -epsilon(-k));
        prop_assert_eq!(epsilon(k).abs(), if k == 0 { 0.0 } else { 1.0 });
    }

    #[test]
    fn toda_states_reject_non_finite(s in toda_state(4), which in 0usize..3) {
        let (mut q, mut p, mut t) = (s.q.clone(), s.p.clone(), 0.0);
        match which {
            0 => q[0] = f64::INFINITY,
            1 => p[0] = f64::NAN,
            _ => t = f64::NAN,
        }
        prop_assert!(TodaState::new(q, p, t).is_err());
    }

    #[test]
    fn closed_form_integrals_are_lax_traces(s in toda_state(6)) {
        let m = s.n().min(4);
        let closed = toda_integrals_closed(&s, m).unwrap();
        let lax = lax_trace_oracle(&s, m).unwrap();
        for (a, b) in closed.iter().zip(&lax) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn grids_need_power_of_two_and_positive_length(n in 1usize..2048, length in -10.0..100.0f64) {
        let ok = n >= 16 && n.is_power_of_two() && length > 0.0;
        prop_assert_eq!(Grid::new(length, n).is_ok(), ok);
    }

    #[test]
    fn spectral_transform_round_trips(values in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 64)) {
        let g = Grid::new(10.0, 64).unwrap();
        let data: Vec<Complex64> = values.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
        let back = g.inverse(&g.forward(&data));
        let scale = data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (a, b) in data.iter().zip(&back) {
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn check_pass_matches_direction(value in -1e3..1e3f64, tol in 1e-12..1e3f64) {
        let most = CheckResult::at_most("x", value, tol, "");
        prop_assert_eq!(most.pass, value.abs() <= tol);
        prop_assert_eq!(most.direction, Direction::AtMost);
        let least = CheckResult::at_least("x", value, tol, "");
        prop_assert_eq!(least.pass, value.abs() >= tol);
    }

    #[test]
    fn tolerances_must_be_positive(tol in -1.0..1.0f64) {
        let text = format!("model = \"kdv\"\ndt = 1e-3\ntolerances.residual = {tol:e}\n");
        prop_assert_eq!(ExperimentConfig::from_toml_str(&text).is_ok(), tol > 0.0);
    }

    #[test]
    fn reports_round_trip_through_json(values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 1..40)) {
        let mut r = kdv_report().clone();
        let rows: Vec<[f64; 2]> = values.iter().enumerate().map(|(k, v)| [k as f64 * 0.01, *v]).collect();
        r.series.insert("probe".into(), rows);
        r.checks.push(CheckResult::at_most("synthetic", values[0], 1.0, "property"));
        prop_assert_eq!(Report::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn csv_series_are_lossless(values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..40)) {
        let mut r = kdv_report().clone();
        r.series.clear();
        r.series.insert("x".into(), values.iter().enumerate().map(|(k, v)| [k as f64, *v]).collect());
        let dir = tempfile::tempdir().unwrap();
        emit(&r, OutputFormat::Csv, dir.path()).unwrap();
        let back = read_series_csv(&dir.path().join("series_x.csv")).unwrap();
        prop_assert_eq!(&back, &r.series["x"]);
    }

    #[test]
    fn pipeline_ladder_follows_recurrence(s in toda_state(5)) {
        static CAL: OnceLock<binoether_core::exterior::Calibration> = OnceLock::new();
        let cal = CAL.get_or_init(|| calibrate_toda(3, 10, 0, RecurrenceVariant::TodaWeighted).unwrap().calibration);
        let ladder = pipeline_ladder(&s, cal, s.n()).unwrap();
        prop_assert!(ladder.order() >= 1 && ladder.order() <= s.n());
        prop_assert_eq!(newton_recurrence(&ladder.y, cal.variant, cal.recurrence_sign), ladder.i.clone());
    }

    #[test]
    fn toda_trajectories_have_uniform_increasing_times(s in toda_state(4), dt in 1e-3..2e-2f64, steps in 1usize..200) {
        let traj = integrate_toda(&s, dt, dt * steps as f64, Integrator::Leapfrog).unwrap();
        prop_assert_eq!(traj.len(), steps + 1);
        for w in traj.times.windows(2) {
            prop_assert!(w[1] > w[0]);
            prop_assert!(((w[1] - w[0]) - dt).abs() <= 1e-12 * (1.0 + w[1].abs()));
        }
        for (t, st) in traj.times.iter().zip(&traj.states) {
            prop_assert_eq!(*t, st.t);
        }
    }

    #[test]
    fn pde_trajectories_share_one_grid(amplitude in 0.1..1.0f64, width in 1.0..3.0f64, steps in 1usize..30) {
        let g = Grid::standard();
        let model = Kdv::new(g.clone());
        let u0 = FieldPreset::Gaussian { amplitude, width, wavenumber: 0.0 }.real(&g, ModelKind::Kdv).unwrap();
        let traj = integrate(&model, &u0, 1e-3, 1e-3 * steps as f64).unwrap();
        prop_assert_eq!(traj.len(), steps + 1);
        for u in &traj.snapshots {
            prop_assert_eq!(u.grid(), &g);
        }
        for w in traj.times.windows(2) {
            prop_assert!(((w[1] - w[0]) - 1e-3).abs() < 1e-12);
        }
    }

    #[test]
    fn functionals_are_deterministic(amplitude in 0.1..1.0f64, k in -1.0..1.0f64) {
        let g = Grid::standard();
        let nse = Nse::new(g.clone());
        let psi = FieldPreset::Gaussian { amplitude, width: 1.5, wavenumber: k }.complex(&g, ModelKind::Nse).unwrap();
        prop_assert_eq!(nse.invariants(&psi), nse.invariants(&psi));
        let u = RealField::from_fn(&g, |x| amplitude * (-x * x).exp());
        let kdv = Kdv::new(g.clone());
        prop_assert_eq!(kdv.hamiltonian(&u), kdv.hamiltonian(&u));
        prop_assert!(ComplexField::zeros(&g).sup_norm() == 0.0);
    }

    #[test]
    fn same_seed_gives_same_report(seed in 0u64..1000) {
        let text = format!("model = \"toda\"\nn = 2\ndt = 1e-3\nt_end = 0.2\nseed = {seed}\n");
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        prop_assert_eq!(cfg.model, Model::Toda);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        prop_assert_eq!(a.without_runtime(), b.without_runtime());
    }
}
