use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::pdemodels::{FieldPreset, MkdvTimeSign, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Toda,
    Nse,
    Kdv,
    Mkdv,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Toda, Model::Nse, Model::Kdv, Model::Mkdv];

    pub fn name(&self) -> &'static str {
        match self {
            Model::Toda => "toda",
            Model::Nse => "nse",
            Model::Kdv => "kdv",
            Model::Mkdv => "mkdv",
        }
    }

    pub fn field_kind(&self) -> Option<ModelKind> {
        match self {
            Model::Toda => None,
            Model::Nse => Some(ModelKind::Nse),
            Model::Kdv => Some(ModelKind::Kdv),
            Model::Mkdv => Some(ModelKind::Mkdv),
        }
    }

    fn tolerance_names(&self) -> &'static [&'static str] {
        match self {
            Model::Toda => TODA_TOLERANCES,
            _ => FIELD_TOLERANCES,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| HarnessError::Validation(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Validation(format!("unknown format '{other}'"))),
        }
    }
}

/// Default tolerances of the Toda suite.
pub const TODA_TOLERANCES: &[&str] = &[
    "calibration",
    "conservation",
    "closed_form",
    "pipeline",
    "non_noether",
    "yang_baxter",
    "yang_baxter_control",
    "symmetry_residual",
    "refinement_ratio",
    "le_omega",
    "involutivity",
    "printed_i4_control",
];

/// Default tolerances of the field-model suites.
pub const FIELD_TOLERANCES: &[&str] = &[
    "conservation",
    "hamiltonian_conservation",
    "hamiltonian_flow",
    "residual",
    "refinement",
    "perturbation_linearity",
    "perturbation_detection",
    "involutivity",
    "probe",
    "le_omega",
    "structural",
    "dispersion",
    "amplitude",
    "soliton_shape",
    "printed_sign_control",
];

pub fn default_tolerance(model: Model, name: &str) -> Option<f64> {
    let v = match (model, name) {
        (Model::Toda, "calibration") => 1e-9,
        (Model::Toda, "conservation") => 1e-6,
        (Model::Toda, "closed_form") => 1e-12,
        (Model::Toda, "pipeline") => 1e-9,
        (Model::Toda, "non_noether") => 1e-3,
        (Model::Toda, "yang_baxter") => 1e-6,
        (Model::Toda, "yang_baxter_control") => 1e-6,
        (Model::Toda, "symmetry_residual") => 1e-5,
        (Model::Toda, "refinement_ratio") => 3.0,
        (Model::Toda, "le_omega") => 1e-6,
        (Model::Toda, "involutivity") => 1e-6,
        (Model::Toda, "printed_i4_control") => 1e-3,
        (_, "conservation") => 1e-6,
        (_, "hamiltonian_conservation") => 1e-6,
        (_, "hamiltonian_flow") => 1e-4,
        (_, "residual") => 1e-3,
        (_, "refinement") => 1.0,
        (_, "perturbation_linearity") => 0.1,
        (_, "perturbation_detection") => 10.0,
        (_, "involutivity") => 1e-4,
        (_, "probe") => 1e-3,
        (_, "le_omega") => 1e-3,
        (_, "structural") => 1e-12,
        (_, "dispersion") => 1e-8,
        (_, "amplitude") => 1e-10,
        (_, "soliton_shape") => 1e-4,
        (_, "printed_sign_control") => 1e-2,
        _ => return None,
    };
    Some(v)
}

/// One experiment, as read from a flat TOML file.
///
/// ```toml
/// model = "kdv"
/// preset = "gaussian"
/// amplitude = 1.0
/// width = 2.0
/// dt = 1e-3
/// t_end = 1.0
/// seed = 0
/// tolerances.residual = 1e-3
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    /// Toda particle count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// `random` (Toda), `gaussian`, `soliton`, `planewave`, `constant`, `zero`, `snapshot`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mkdv_time_sign: Option<MkdvTimeSign>,
}

/// Initial data after defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Random,
    Field(FieldPreset),
    Snapshot(PathBuf),
}

impl ExperimentConfig {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            n: None,
            length: None,
            grid_n: None,
            preset: None,
            amplitude: None,
            width: None,
            wavenumber: None,
            speed: None,
            mode: None,
            value: None,
            snapshot: None,
            dt: None,
            t_end: None,
            tolerances: BTreeMap::new(),
            seed: 0,
            output: None,
            format: None,
            mkdv_time_sign: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Validation(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Validation(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Validation(msg));
        match self.dt {
            None => return bad("missing required field 'dt'".into()),
            Some(dt) if !(dt.is_finite() && dt > 0.0) => return bad(format!("dt must be positive, got {dt}")),
            _ => {}
        }
        if let Some(t) = self.t_end {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("t_end must be positive, got {t}"));
            }
        }
        for (name, tol) in &self.tolerances {
            if !self.model.tolerance_names().contains(&name.as_str()) {
                return bad(format!("unknown tolerance '{name}' for model {}", self.model));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return bad(format!("tolerance '{name}' must be positive, got {tol}"));
            }
        }
        match self.model {
            Model::Toda => {
                if self.n == Some(0) {
                    return bad("n must be at least 1".into());
                }
                if self.grid_n.is_some() || self.length.is_some() {
                    return bad("grid parameters do not apply to toda".into());
                }
            }
            _ => {
                if self.n.is_some() {
                    return bad(format!("n does not apply to {}", self.model));
                }
                if let Some(n) = self.grid_n {
                    if n < 16 || !n.is_power_of_two() {
                        return bad(format!("grid_n must be a power of two >= 16, got {n}"));
                    }
                }
                if let Some(l) = self.length {
                    if !(l.is_finite() && l > 0.0) {
                        return bad(format!("length must be positive, got {l}"));
                    }
                }
            }
        }
        if self.mkdv_time_sign.is_some() && self.model != Model::Mkdv {
            return bad("mkdv_time_sign applies to mkdv only".into());
        }
        self.initial_data().map(|_| ())
    }

    pub fn dt(&self) -> f64 {
        self.dt.unwrap_or(f64::NAN)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(match self.model {
            Model::Toda => 10.0,
            Model::Mkdv => 0.5,
            Model::Nse | Model::Kdv => 1.0,
        })
    }

    pub fn particles(&self) -> usize {
        self.n.unwrap_or(3)
    }

    pub fn length(&self) -> f64 {
        self.length.unwrap_or(40.0)
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n.unwrap_or(256)
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| default_tolerance(self.model, name))
            .unwrap_or_else(|| panic!("no tolerance named {name}"))
    }

    pub fn initial_data(&self) -> Result<InitialData, HarnessError> {
        let preset = self.preset.as_deref().unwrap_or(match self.model {
            Model::Toda => "random",
            _ => "gaussian",
        });
        let bad = || Err(HarnessError::Validation(format!("preset '{preset}' does not apply to {}", self.model)));
        let kind = match self.model.field_kind() {
            None if preset == "random" => return Ok(InitialData::Random),
            None => return bad(),
            Some(kind) => kind,
        };
        let field = match (preset, kind) {
            ("gaussian", _) => {
                let (a, w, k) = match FieldPreset::default_for(kind) {
                    FieldPreset::Gaussian { amplitude, width, wavenumber } => (amplitude, width, wavenumber),
                    _ => unreachable!("gaussian defaults"),
                };
                FieldPreset::Gaussian {
                    amplitude: self.amplitude.unwrap_or(a),
                    width: self.width.unwrap_or(w),
                    wavenumber: self.wavenumber.unwrap_or(if kind == ModelKind::Nse { k } else { 0.0 }),
                }
            }
            ("soliton", ModelKind::Kdv) => FieldPreset::Soliton { speed: self.speed.unwrap_or(0.25) },
            ("planewave", ModelKind::Nse) => FieldPreset::Planewave {
                amplitude: self.amplitude.unwrap_or(0.7),
                mode: self.mode.unwrap_or(3),
            },
            ("constant", _) => FieldPreset::Constant { value: self.value.unwrap_or(0.7) },
            ("zero", _) => FieldPreset::Zero,
            ("snapshot", _) => {
                return match &self.snapshot {
                    Some(p) => Ok(InitialData::Snapshot(p.clone())),
                    None => Err(HarnessError::Validation("preset 'snapshot' needs 'snapshot = <path>'".into())),
                };
            }
            _ => return bad(),
        };
        if let FieldPreset::Gaussian { width, .. } = field {
            if !(width > 0.0) {
                return Err(HarnessError::Validation(format!("width must be positive, got {width}")));
            }
        }
        if let FieldPreset::Soliton { speed } = field {
            if !(speed > 0.0) {
                return Err(HarnessError::Validation(format!("speed must be positive, got {speed}")));
            }
        }
        Ok(InitialData::Field(field))
    }
}
