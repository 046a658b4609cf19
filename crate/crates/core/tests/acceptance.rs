//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

use std::time::Instant;

use binoether_core::exterior::CubicField;
use binoether_core::harness::{toda_calibration, verify_all, Report, VerifyOptions, VerifySummary};
use binoether_core::toda::{
    integrate_toda, lax_trace_oracle, pipeline_ladder, toda_integrals_closed, toda_symmetry_residual,
    toda_verify_nonnoether, verify_nonnoether, Integrator, TodaState,
};

struct Line {
    pass: bool,
    text: String,
}

fn line(pass: bool, id: u32, text: String) -> Line {
    Line { pass, text: format!("{} criterion {id}: {text}", if pass { "PASS" } else { "FAIL" }) }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn report<'a>(summary: &'a VerifySummary, label: &str) -> &'a Report {
    summary
        .runs
        .iter()
        .find(|r| r.label == label)
        .and_then(|r| r.report.as_ref())
        .unwrap_or_else(|| panic!("{label} did not produce a report"))
}

/// Whether every named check in `label` passed, plus `name=value` pairs.
fn checks(summary: &VerifySummary, label: &str, names: &[&str]) -> (bool, String) {
    let r = report(summary, label);
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match r.check(name) {
            Some(c) => {
                ok &= c.pass;
                parts.push(format!("{name}={:.2e}", c.value));
            }
            None => {
                ok = false;
                parts.push(format!("{name}=missing"));
            }
        }
    }
    (ok, format!("{label} [{}]", parts.join(", ")))
}

fn all(summary: &VerifySummary, groups: &[(&str, &[&str])]) -> (bool, String) {
    let mut ok = true;
    let mut text = Vec::new();
    for (label, names) in groups {
        let (pass, t) = checks(summary, label, names);
        ok &= pass;
        text.push(t);
    }
    (ok, text.join("; "))
}

fn toda_conservation() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [2, 3, 4, 6] {
        let start = Instant::now();
        let s0 = TodaState::random_batch(n, 1, 0).remove(0);
        let traj = integrate_toda(&s0, 1e-3, 10.0, Integrator::Leapfrog).unwrap();
        let order = n.min(4);
        let reference = toda_integrals_closed(&s0, order).unwrap();
        let mut drift = 0.0_f64;
        for s in &traj.states {
            let v = toda_integrals_closed(s, order).unwrap();
            for m in 0..order {
                drift = drift.max(relative(v[m], reference[m]));
            }
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= drift < 1e-6 && secs < 5.0;
        parts.push(format!("n={n} drift {drift:.2e} in {secs:.2}s"));
    }
    line(ok, 1, format!("Toda leapfrog conservation, dt 1e-3, T 10: {}", parts.join(", ")))
}

fn pipeline_equivalence() -> Line {
    let record = toda_calibration().expect("Toda calibration");
    let start = Instant::now();
    let mut worst_lax = 0.0_f64;
    let mut worst_closed = 0.0_f64;
    for n in [3, 4] {
        for s in TodaState::random_batch(n, 20, 7) {
            let order = n.min(4);
            let ladder = pipeline_ladder(&s, &record.calibration, order).unwrap();
            let lax = lax_trace_oracle(&s, order).unwrap();
            let closed = toda_integrals_closed(&s, order).unwrap();
            for m in 0..order {
                worst_lax = worst_lax.max(relative(ladder.i[m], lax[m]));
                worst_closed = worst_closed.max(relative(ladder.i[m], closed[m]));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst_lax < 1e-9 && worst_closed < 1e-9 && secs < 1.0;
    line(
        ok,
        2,
        format!("pipeline vs tr(L^m)/m {worst_lax:.2e}, vs closed form {worst_closed:.2e}, 40 states in {secs:.3}s"),
    )
}

fn non_noether_and_yang_baxter() -> Line {
    let start = Instant::now();
    let states = TodaState::random_batch(3, 10, 11);
    let mut commutator = f64::INFINITY;
    let mut yb = 0.0_f64;
    for s in &states {
        let r = toda_verify_nonnoether(s);
        commutator = commutator.min(r.commutator_norm);
        yb = yb.max(r.yang_baxter_scaled);
    }
    let control = verify_nonnoether(&CubicField::random(6, 11), &states[0].to_vec(), 0.0);
    let secs = start.elapsed().as_secs_f64();
    let ok = commutator > 1e-3 && yb < 1e-6 && !control.yang_baxter_holds && secs < 5.0;
    line(
        ok,
        3,
        format!(
            "min |[E,W]| {commutator:.2e}, max scaled Yang-Baxter {yb:.2e}, cubic control {:.2e}, {secs:.2}s",
            control.yang_baxter_scaled
        ),
    )
}

fn symmetry_condition(summary: &VerifySummary) -> Line {
    let s0 = TodaState::random_batch(3, 1, 0).remove(0);
    let coarse = toda_symmetry_residual(&integrate_toda(&s0, 1e-3, 5.0, Integrator::Leapfrog).unwrap()).unwrap().max;
    let fine = toda_symmetry_residual(&integrate_toda(&s0, 5e-4, 5.0, Integrator::Leapfrog).unwrap()).unwrap().max;
    let ratio = coarse / fine;
    let ok = coarse < 1e-5 && ratio >= 3.0;
    let others: Vec<String> = ["toda-n2", "toda-n4", "toda-n6"]
        .iter()
        .map(|label| {
            let r = report(summary, label);
            let c = r.check("symmetry_residual").unwrap();
            let q = r.check("refinement_ratio").unwrap();
            format!("{label} {:.2e} {} ratio {:.2}", c.value, if c.pass { "ok" } else { "above 1e-5" }, q.value)
        })
        .collect();
    line(
        ok,
        4,
        format!("n=3 T=5 residual {coarse:.2e}, halving ratio {ratio:.2}; T=10 runs: {}", others.join(", ")),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let summary = verify_all(&VerifyOptions::default()).expect("verify-all runs");
    let verify_secs = start.elapsed().as_secs_f64();
    for run in &summary.runs {
        assert!(run.error.is_none(), "{}: {:?}", run.label, run.error);
    }

    let toda_labels = ["toda-n2", "toda-n3", "toda-n4", "toda-n6"];
    let mut lines = vec![
        toda_conservation(),
        pipeline_equivalence(),
        non_noether_and_yang_baxter(),
        symmetry_condition(&summary),
    ];

    let groups: Vec<(&str, &[&str])> = toda_labels.iter().map(|l| (*l, &["involutivity", "rank"][..])).collect();
    let (ok, text) = all(&summary, &groups);
    lines.push(line(ok, 5, format!("Toda involutivity and Jacobian rank: {text}")));

    let (ok, text) = all(
        &summary,
        &[
            ("nse-planewave", &["dispersion", "amplitude"]),
            (
                "nse-gaussian",
                &[
                    "conservation.I1",
                    "conservation.I2",
                    "conservation.I3",
                    "conservation.I4",
                    "symmetry_residual",
                    "refinement",
                    "hamiltonian_flow",
                ],
            ),
        ],
    );
    lines.push(line(ok, 6, format!("NSE: {text}")));

    let (ok, text) = all(
        &summary,
        &[
            ("kdv-soliton", &["soliton_shape"]),
            (
                "kdv-gaussian",
                &[
                    "conservation.I1",
                    "conservation.I2",
                    "conservation.I3",
                    "conservation.I4",
                    "symmetry_residual",
                    "refinement",
                    "involutivity",
                    "probe",
                ],
            ),
        ],
    );
    lines.push(line(ok, 7, format!("KdV: {text}")));

    let (ok, text) = all(
        &summary,
        &[
            ("mkdv-zero", &["stationarity"]),
            ("mkdv-constant", &["stationarity"]),
            (
                "mkdv-gaussian",
                &[
                    "conservation.I1",
                    "conservation.I2",
                    "conservation.I3",
                    "conservation.I4",
                    "symmetry_residual",
                    "perturbation.linearity",
                    "perturbation.detection",
                ],
            ),
        ],
    );
    lines.push(line(ok, 8, format!("mKdV: {text}")));

    let mut groups: Vec<(&str, &[&str])> =
        ["nse-gaussian", "kdv-gaussian", "mkdv-gaussian"].iter().map(|l| (*l, &["le_omega"][..])).collect();
    groups.extend(toda_labels.iter().map(|l| (*l, &["le_omega"][..])));
    let (ok, text) = all(&summary, &groups);
    lines.push(line(
        ok && verify_secs < 120.0,
        9,
        format!("L_E omega display vs Lie derivative: {text}; verify-all {verify_secs:.1}s"),
    ));

    for l in &lines {
        println!("{}", l.text);
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.text.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
