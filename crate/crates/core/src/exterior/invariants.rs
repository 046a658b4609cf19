use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AntisymMatrix, BivectorField, ExteriorError, PhasePoint, TwoFormField};

/// A sign choice, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Which eigenvalues enter the elementary symmetric polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// One representative per coincident pair (`n` values).
    Paired,
    /// All `2n` eigenvalues.
    Full,
}

/// Constants `c_k` multiplying `e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Unit,
    Factorial,
}

impl Normalization {
    fn coefficient(self, k: usize) -> f64 {
        match self {
            Normalization::Unit => 1.0,
            Normalization::Factorial => (1..=k).map(|j| j as f64).product(),
        }
    }
}

/// Recurrence turning `Y_k` into `I_m`; `s` is applied to the whole right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceVariant {
    /// `I_m = s[(-1)^m Y_m + m⁻¹ Σ_k (-1)^k I_{m-k} Y_k]`, as printed for Toda.
    Toda,
    /// `I_m = s[(-1)^m Y_m + m⁻¹ Σ_k (-1)^k (m-k) I_{m-k} Y_k]`, Newton's identity for `p_m/m`.
    TodaWeighted,
    /// `I_m = s[(-1)^m m Y_m + Σ_k (-1)^k I_{m-k} Y_k]`.
    Field,
}

/// All sign and normalization conventions of the geometry-to-integrals pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Calibration {
    /// `ζ` with `W·ω = ζ·1` for the canonical pair; recursion operator is `R = ζ·W·σ`.
    pub inverse_sign: Sign,
    pub pairing: Pairing,
    pub normalization: Normalization,
    pub recurrence_sign: Sign,
    pub variant: RecurrenceVariant,
}

impl Calibration {
    fn label(&self) -> String {
        format!(
            "zeta={:+} pairing={:?} norm={:?} s={:+} variant={:?}",
            self.inverse_sign.value(),
            self.pairing,
            self.normalization,
            self.recurrence_sign.value(),
            self.variant
        )
    }
}

/// `Y_1..Y_M` and `I_1..I_M` with the calibration that links them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantLadder {
    pub y: Vec<f64>,
    pub i: Vec<f64>,
    pub calibration: Calibration,
}

impl InvariantLadder {
    pub fn from_y(y: Vec<f64>, calibration: Calibration) -> Self {
        let i = newton_recurrence(&y, calibration.variant, calibration.recurrence_sign);
        Self { y, i, calibration }
    }

    pub fn order(&self) -> usize {
        self.y.len()
    }
}

/// Output of [`spectral_invariants`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInvariants {
    pub y: Vec<f64>,
    /// Eigenvalues of `R`, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Largest distance inside a coincident pair.
    pub pair_gap: f64,
    /// `½ tr R`, a direct contraction equal to `e_1` of the paired spectrum.
    pub contraction_e1: f64,
    /// `Q/8` with `Q = Σ W'^{ab}W'^{cd}(σ_ab σ_cd - σ_ac σ_bd + σ_ad σ_bc)`, equal to `e_2`.
    pub contraction_e2: Option<f64>,
    /// Unnormalized `e_k` of the paired spectrum.
    pub paired_elementary: Vec<f64>,
}

/// Elementary symmetric polynomials `e_1..e_m` of `values`.
pub fn elementary_symmetric(values: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); m + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (count, &v) in values.iter().enumerate() {
        let top = (count + 1).min(m);
        for k in (1..=top).rev() {
            let prev = e[k - 1];
            e[k] += prev * v;
        }
    }
    e.split_off(1)
}

/// `σ = ζ·W(z)⁻¹`, so that the canonical pair are mutual inverses when `ζ` is
/// the canonical inverse sign.
pub fn invert_bivector(
    w: &dyn BivectorField,
    z: &[f64],
    inverse_sign: Sign,
) -> Result<AntisymMatrix, ExteriorError> {
    let m = w.eval(z).into_matrix();
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if smax == 0.0 || smin <= 1e-12 * smax {
        let condition = if smin == 0.0 { f64::INFINITY } else { smax / smin };
        return Err(ExteriorError::Degenerate { condition });
    }
    let inv = m.try_inverse().ok_or(ExteriorError::Degenerate { condition: smax / smin })?;
    Ok(AntisymMatrix::from_matrix(inv * inverse_sign.value()))
}

/// `Y_1..Y_M` from the eigenvalues of `R = ζ·W·σ` at `z`.
pub fn spectral_invariants(
    w: &dyn BivectorField,
    sigma: &dyn TwoFormField,
    z: &[f64],
    order: usize,
    calibration: &Calibration,
) -> Result<SpectralInvariants, ExteriorError> {
    spectral_invariants_at(&w.eval(z), &sigma.eval(z), order, calibration)
}

/// Matrix-level form of [`spectral_invariants`].
pub fn spectral_invariants_at(
    w: &AntisymMatrix,
    sigma: &AntisymMatrix,
    order: usize,
    calibration: &Calibration,
) -> Result<SpectralInvariants, ExteriorError> {
    let d = w.dim();
    let n = d / 2;
    if order == 0 || order > n {
        return Err(ExteriorError::Order { order, max: n });
    }
    let zeta = calibration.inverse_sign.value();
    let r: DMatrix<f64> = w.matrix() * sigma.matrix() * zeta;
    let mut eig: Vec<Complex64> = r.clone().complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let radius = eig.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
    let pair_gap = eig
        .chunks(2)
        .fold(0.0_f64, |m, c| m.max((c[0] - c[1]).norm()));
    let tolerance = 1e-8 * radius;
    if pair_gap > tolerance {
        return Err(ExteriorError::Pairing { gap: pair_gap, tolerance });
    }
    let paired: Vec<Complex64> = eig.chunks(2).map(|c| (c[0] + c[1]) * 0.5).collect();

    let source: Vec<Complex64> = match calibration.pairing {
        Pairing::Paired => paired.clone(),
        Pairing::Full => eig.clone(),
    };
    let y = elementary_symmetric(&source, order)
        .iter()
        .enumerate()
        .map(|(k, e)| calibration.normalization.coefficient(k + 1) * e.re)
        .collect();

    let contraction_e1 = 0.5 * r.trace();
    let contraction_e2 = (d <= 32).then(|| pair_contraction(w, sigma, zeta) / 8.0);

    Ok(SpectralInvariants {
        y,
        eigenvalues: eig,
        pair_gap,
        contraction_e1,
        contraction_e2,
        paired_elementary: elementary_symmetric(&paired, n.min(2))
            .iter()
            .map(|e| e.re)
            .collect(),
    })
}

fn pair_contraction(w: &AntisymMatrix, s: &AntisymMatrix, zeta: f64) -> f64 {
    let d = w.dim();
    let mut q = 0.0;
    for a in 0..d {
        for b in 0..d {
            let wab = w.get(a, b);
            if wab == 0.0 {
                continue;
            }
            for c in 0..d {
                for e in 0..d {
                    let wce = w.get(c, e);
                    if wce == 0.0 {
                        continue;
                    }
                    let sig = s.get(a, b) * s.get(c, e) - s.get(a, c) * s.get(b, e)
                        + s.get(a, e) * s.get(b, c);
                    q += wab * wce * sig;
                }
            }
        }
    }
    q * zeta * zeta
}

/// `I_1..I_M` from `Y_1..Y_M`.
pub fn newton_recurrence(y: &[f64], variant: RecurrenceVariant, sign: Sign) -> Vec<f64> {
    let s = sign.value();
    let mut out: Vec<f64> = Vec::with_capacity(y.len());
    for m in 1..=y.len() {
        let alt = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        let mf = m as f64;
        let sum: f64 = (1..m)
            .map(|k| {
                let weight = match variant {
                    RecurrenceVariant::TodaWeighted => (m - k) as f64,
                    _ => 1.0,
                };
                alt(k) * weight * out[m - k - 1] * y[k - 1]
            })
            .sum();
        let v = match variant {
            RecurrenceVariant::Toda | RecurrenceVariant::TodaWeighted => {
                alt(m) * y[m - 1] + sum / mf
            }
            RecurrenceVariant::Field => alt(m) * mf * y[m - 1] + sum,
        };
        out.push(s * v);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResidual {
    pub candidate: String,
    pub residual: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("no convention reproduces the reference integrals; residuals: {}", fmt_residuals(.0))]
    NoConsistentConvention(Vec<CandidateResidual>),
    #[error("several conventions reproduce the reference integrals: {}", fmt_residuals(.0))]
    Ambiguous(Vec<CandidateResidual>),
    #[error("canonical pair fixes inverse sign {anchor:?} but the integrals select {found:?}")]
    InverseSignMismatch { anchor: Sign, found: Sign },
    #[error("canonical pair is not inverse up to sign (|W·ω ∓ 1| = {0:e})")]
    NotInverse(f64),
    #[error("calibration needs at least one state")]
    NoStates,
    #[error("{0}")]
    Other(String),
}

fn fmt_residuals(r: &[CandidateResidual]) -> String {
    r.iter()
        .map(|c| format!("[{}: {:.3e}]", c.candidate, c.residual))
        .collect::<Vec<_>>()
        .join(" ")
}

/// What the calibration search needs from a model.
pub struct CalibrationHooks<'a> {
    pub states: Vec<PhasePoint>,
    pub poisson: &'a dyn BivectorField,
    pub symplectic: &'a dyn TwoFormField,
    /// `L_E ω` at a state.
    pub second_form: &'a (dyn Fn(&PhasePoint) -> AntisymMatrix + Sync),
    /// Reference `I_1..I_M` at a state.
    pub reference: &'a (dyn Fn(&PhasePoint, usize) -> Vec<f64> + Sync),
    pub order: usize,
    pub variant: RecurrenceVariant,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub calibration: Calibration,
    pub max_residual: f64,
    pub candidates: Vec<CandidateResidual>,
}

/// Searches inverse sign × pairing × normalization × recurrence sign for the
/// unique convention that reproduces the reference integrals.
pub fn calibrate_conventions(
    hooks: &CalibrationHooks<'_>,
) -> Result<CalibrationRecord, CalibrationError> {
    let first = hooks.states.first().ok_or(CalibrationError::NoStates)?;
    let d = first.dim();
    let prod = hooks.poisson.eval(first.as_slice()).matrix() * hooks.symplectic.eval(first.as_slice()).matrix();
    let anchor = Sign::of(prod[(0, 0)]);
    let dev = (prod - DMatrix::identity(d, d) * anchor.value()).amax();
    if dev > 1e-12 {
        return Err(CalibrationError::NotInverse(dev));
    }

    let frames: Vec<(AntisymMatrix, AntisymMatrix, Vec<f64>)> = hooks
        .states
        .iter()
        .map(|s| {
            (
                hooks.poisson.eval(s.as_slice()),
                (hooks.second_form)(s),
                (hooks.reference)(s, hooks.order),
            )
        })
        .collect();

    let mut candidates = Vec::new();
    let mut winners = Vec::new();
    for inverse_sign in [Sign::Plus, Sign::Minus] {
        for pairing in [Pairing::Paired, Pairing::Full] {
            for normalization in [Normalization::Unit, Normalization::Factorial] {
                for recurrence_sign in [Sign::Plus, Sign::Minus] {
                    let cal = Calibration {
                        inverse_sign,
                        pairing,
                        normalization,
                        recurrence_sign,
                        variant: hooks.variant,
                    };
                    let residual = frames
                        .iter()
                        .map(|(w, s, reference)| candidate_residual(w, s, reference, &cal))
                        .fold(0.0_f64, f64::max);
                    let entry = CandidateResidual { candidate: cal.label(), residual };
                    if residual <= hooks.tolerance {
                        winners.push((cal, entry.clone()));
                    }
                    candidates.push(entry);
                }
            }
        }
    }

    match winners.len() {
        0 => Err(CalibrationError::NoConsistentConvention(candidates)),
        1 => {
            let (calibration, entry) = winners.remove(0);
            if calibration.inverse_sign != anchor {
                return Err(CalibrationError::InverseSignMismatch {
                    anchor,
                    found: calibration.inverse_sign,
                });
            }
            Ok(CalibrationRecord { calibration, max_residual: entry.residual, candidates })
        }
        _ => Err(CalibrationError::Ambiguous(winners.into_iter().map(|w| w.1).collect())),
    }
}

fn candidate_residual(
    w: &AntisymMatrix,
    sigma: &AntisymMatrix,
    reference: &[f64],
    cal: &Calibration,
) -> f64 {
    let Ok(spec) = spectral_invariants_at(w, sigma, reference.len(), cal) else {
        return f64::INFINITY;
    };
    let i = newton_recurrence(&spec.y, cal.variant, cal.recurrence_sign);
    i.iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{canonical_bivector, ConstantBivector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference_calibration() -> Calibration {
        Calibration {
            inverse_sign: Sign::Minus,
            pairing: Pairing::Paired,
            normalization: Normalization::Unit,
            recurrence_sign: Sign::Minus,
            variant: RecurrenceVariant::TodaWeighted,
        }
    }

    #[test]
    fn zero_y_gives_zero_i() {
        for v in [RecurrenceVariant::Toda, RecurrenceVariant::TodaWeighted, RecurrenceVariant::Field] {
            assert!(newton_recurrence(&[0.0; 5], v, Sign::Minus).iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn field_recurrence_first_order_sign() {
        assert_eq!(newton_recurrence(&[2.5], RecurrenceVariant::Field, Sign::Minus), vec![2.5]);
        assert_eq!(newton_recurrence(&[2.5], RecurrenceVariant::Field, Sign::Plus), vec![-2.5]);
    }

    #[test]
    fn recurrences_produce_power_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let cx: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let e: Vec<f64> = elementary_symmetric(&cx, 6).iter().map(|c| c.re).collect();
        let weighted = newton_recurrence(&e, RecurrenceVariant::TodaWeighted, Sign::Minus);
        let field = newton_recurrence(&e, RecurrenceVariant::Field, Sign::Minus);
        for m in 1..=6 {
            let pm: f64 = xs.iter().map(|x| x.powi(m as i32)).sum();
            assert!((weighted[m - 1] - pm / m as f64).abs() < 1e-10 * pm.abs().max(1.0));
            assert!((field[m - 1] - pm).abs() < 1e-10 * pm.abs().max(1.0));
        }
    }

    #[test]
    fn elementary_symmetric_small_case() {
        let v: Vec<Complex64> = [1.0, 2.0, 3.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let e = elementary_symmetric(&v, 3);
        assert_eq!(e[0].re, 6.0);
        assert_eq!(e[1].re, 11.0);
        assert_eq!(e[2].re, 6.0);
    }

    #[test]
    fn free_particle_first_invariant_is_momentum() {
        let p = 1.7;
        let w = canonical_bivector(1);
        let omega = canonical_bivector(1);
        let sigma = omega.scaled(p);
        let spec = spectral_invariants_at(&w, &sigma, 1, &reference_calibration()).unwrap();
        assert!((spec.y[0] - p).abs() < 1e-14);
        assert!((spec.contraction_e1 - p).abs() < 1e-14);
    }

    #[test]
    fn zero_form_gives_zero_invariants() {
        let spec = spectral_invariants_at(
            &canonical_bivector(3),
            &AntisymMatrix::zeros(6),
            3,
            &reference_calibration(),
        )
        .unwrap();
        assert!(spec.y.iter().all(|y| *y == 0.0));
    }

    #[test]
    fn order_above_particle_count_rejected() {
        let err = spectral_invariants_at(
            &canonical_bivector(2),
            &canonical_bivector(2),
            3,
            &reference_calibration(),
        );
        assert!(matches!(err, Err(ExteriorError::Order { .. })));
    }

    #[test]
    fn inverse_of_canonical_bivector() {
        let w = ConstantBivector(canonical_bivector(1));
        let s = invert_bivector(&w, &[0.0, 0.0], Sign::Minus).unwrap();
        assert_eq!(s, canonical_bivector(1));
        let s2 = invert_bivector(&ConstantBivector(canonical_bivector(1).scaled(2.0)), &[0.0, 0.0], Sign::Minus)
            .unwrap();
        assert_eq!(s2, canonical_bivector(1).scaled(0.5));
    }

    #[test]
    fn inverse_of_random_bivector() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = AntisymMatrix::from_upper(6, |_, _| rng.gen_range(-1.0..1.0));
        let s = invert_bivector(&ConstantBivector(w.clone()), &[0.0; 6], Sign::Plus).unwrap();
        let prod = w.matrix() * s.matrix();
        assert!((prod - DMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn singular_bivector_reports_condition() {
        let w = AntisymMatrix::from_upper(4, |a, b| if (a, b) == (0, 1) { 1.0 } else { 0.0 });
        match invert_bivector(&ConstantBivector(w), &[0.0; 4], Sign::Plus) {
            Err(ExteriorError::Degenerate { condition }) => assert!(condition.is_infinite()),
            other => panic!("{other:?}"),
        }
    }
}
