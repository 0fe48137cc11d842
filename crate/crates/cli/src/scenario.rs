//! Scenario files (TOML). See `docs/scenario.md` for the schema.

use std::path::{Path, PathBuf};

use cliffwave::cwt::{ConstantMode, CwtQuadrature, WaveletKind};
use cliffwave::field::GridSpec;
use cliffwave::testfn::TestFunction;
use cliffwave::Multivector;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCENARIO_SCHEMA: &str = "cliffwave-scenario/1";

pub const STAGES: [&str; 5] = ["algebra", "fourier", "admissibility", "cwt_roundtrip", "uncertainty"];

pub const THEOREMS: [&str; 6] = [
    "commutator_bound",
    "heisenberg_fourier",
    "banouh_bound",
    "sharp_bound",
    "base_inequality_probe",
    "proof_identities_check",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    #[serde(default = "default_name")]
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridConfig,
    #[serde(default)]
    pub wavelet: WaveletConfig,
    #[serde(default = "CwtQuadrature::documented")]
    pub quadrature: CwtQuadrature,
    /// Quadrature used to calibrate `C_ψ`; defaults to `quadrature`.
    #[serde(default)]
    pub calibration: Option<CwtQuadrature>,
    #[serde(default = "default_stages")]
    pub stages: Vec<String>,
    #[serde(default = "default_theorems")]
    pub theorems: Vec<String>,
    #[serde(default = "default_axes")]
    pub axes: Vec<usize>,
    #[serde(default = "default_mode")]
    pub constant_mode: ConstantMode,
    /// Fields analysed by the uncertainty stage.
    #[serde(default = "default_suite")]
    pub suite: Vec<FunctionSpec>,
    /// Fields used by the isometry / reconstruction checks; when absent, a
    /// modulated Gaussian and two random band-pass fields.
    #[serde(default)]
    pub roundtrip: Option<Vec<FunctionSpec>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletConfig {
    pub name: String,
}

impl Default for WaveletConfig {
    fn default() -> Self {
        Self {
            name: WaveletKind::MexicanHat.name().into(),
        }
    }
}

/// A named test-function generator. Random generators take an explicit
/// `seed`, or derive `count` seeds from the scenario seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub generator: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub count: Option<usize>,
    /// Multivector coefficient in text form, e.g. `"1 + 1 e1"`.
    #[serde(default)]
    pub coefficient: Option<String>,
    #[serde(default)]
    pub width: Option<f64>,
    #[serde(default)]
    pub wavevector: Option<Vec<f64>>,
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default)]
    pub dilation: Option<f64>,
}

impl FunctionSpec {
    pub fn named(generator: &str) -> Self {
        Self {
            generator: generator.into(),
            seed: None,
            count: None,
            coefficient: None,
            width: None,
            wavevector: None,
            center: None,
            dilation: None,
        }
    }

    pub fn seeded(generator: &str, seed: u64) -> Self {
        Self {
            seed: Some(seed),
            ..Self::named(generator)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Involution identities on random multivectors.
    pub algebra: f64,
    pub algebra_samples: usize,
    pub fourier_fixed_point: f64,
    pub fourier_roundtrip: f64,
    pub plancherel: f64,
    pub derivative: f64,
    pub scalarness: f64,
    /// Relative deviation of `A_ψ` from its closed form, when one is known.
    pub a_psi: f64,
    pub oracle: f64,
    pub oracle_samples: usize,
    pub isometry: f64,
    pub reconstruction: f64,
    /// Slack below 1 allowed for the commutator and Fourier inequalities.
    pub heisenberg: f64,
    pub banouh_min_ratio: f64,
    pub proof_identities: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebra: 1e-12,
            algebra_samples: 1000,
            fourier_fixed_point: 1e-6,
            fourier_roundtrip: 1e-10,
            plancherel: 1e-6,
            derivative: 1e-8,
            scalarness: 1e-10,
            a_psi: 0.01,
            oracle: 1e-8,
            oracle_samples: 20,
            isometry: 0.05,
            reconstruction: 0.02,
            heisenberg: 1e-6,
            banouh_min_ratio: 0.95,
            proof_identities: 0.05,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Directory for per-(scale, spin) coefficient magnitude tables.
    #[serde(default)]
    pub atlas_dir: Option<PathBuf>,
}

fn default_name() -> String {
    "scenario".into()
}

fn default_stages() -> Vec<String> {
    STAGES.iter().map(|s| s.to_string()).collect()
}

fn default_theorems() -> Vec<String> {
    THEOREMS.iter().map(|s| s.to_string()).collect()
}

fn default_axes() -> Vec<usize> {
    vec![1]
}

fn default_mode() -> ConstantMode {
    ConstantMode::Calibrated
}

fn default_suite() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::named("gaussian"),
        FunctionSpec {
            count: Some(2),
            ..FunctionSpec::named("random_band_limited")
        },
    ]
}

/// A modulated Gaussian with carrier `|κ| ≈ 1.13` along the diagonal, and
/// two random band-pass fields.
fn default_roundtrip(dim: usize) -> Vec<FunctionSpec> {
    let component = 0.8 * (2.0 / dim as f64).sqrt();
    vec![
        FunctionSpec {
            width: Some(3.0),
            wavevector: Some(vec![component; dim]),
            ..FunctionSpec::named("modulated_gaussian")
        },
        FunctionSpec {
            count: Some(2),
            ..FunctionSpec::named("random_band_pass")
        },
    ]
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Scenario {
    /// Full pipeline on the desk grid (`n = 2`, `N = 128`, `L = 8`).
    pub fn default_for(dim: usize) -> Self {
        Self {
            schema: SCENARIO_SCHEMA.into(),
            name: default_name(),
            dim,
            seed: 0,
            grid: GridConfig {
                points: 128,
                half_width: 8.0,
            },
            wavelet: WaveletConfig::default(),
            quadrature: CwtQuadrature::documented(),
            calibration: None,
            stages: default_stages(),
            theorems: default_theorems(),
            axes: default_axes(),
            constant_mode: default_mode(),
            suite: default_suite(),
            roundtrip: None,
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| config(format!("scenario: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        GridSpec::new(self.dim, self.grid.points, self.grid.half_width).map_err(|e| config(e.to_string()))
    }

    pub fn calibration_quadrature(&self) -> &CwtQuadrature {
        self.calibration.as_ref().unwrap_or(&self.quadrature)
    }

    pub fn roundtrip_functions(&self) -> Vec<FunctionSpec> {
        self.roundtrip.clone().unwrap_or_else(|| default_roundtrip(self.dim))
    }

    pub fn has_stage(&self, stage: &str) -> bool {
        self.stages.iter().any(|s| s == stage)
    }

    /// Checks everything that can be checked without running a stage.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(config(format!(
                "unsupported schema {:?}, expected {SCENARIO_SCHEMA:?}",
                self.schema
            )));
        }
        self.grid_spec()?;
        WaveletKind::from_name(&self.wavelet.name).map_err(|e| config(e.to_string()))?;
        self.quadrature.validate().map_err(|e| config(e.to_string()))?;
        if let Some(c) = &self.calibration {
            c.validate().map_err(|e| config(format!("calibration: {e}")))?;
        }
        for s in &self.stages {
            if !STAGES.contains(&s.as_str()) {
                return Err(config(format!("unknown stage {s:?}")));
            }
        }
        for t in &self.theorems {
            if !THEOREMS.contains(&t.as_str()) {
                return Err(config(format!("unknown theorem {t:?}")));
            }
        }
        for &k in &self.axes {
            if k == 0 || k > self.dim {
                return Err(config(format!("axis {k} out of range for dimension {}", self.dim)));
            }
        }
        let needs_spin = self.has_stage("cwt_roundtrip")
            || (self.has_stage("uncertainty") && self.theorems.iter().any(|t| wavelet_theorem(t)));
        if needs_spin && !(1..=3).contains(&self.dim) {
            return Err(config(format!(
                "wavelet stages support dimensions 1 to 3, got {}",
                self.dim
            )));
        }
        let t = &self.tolerances;
        let positive = [
            ("algebra", t.algebra),
            ("fourier_fixed_point", t.fourier_fixed_point),
            ("fourier_roundtrip", t.fourier_roundtrip),
            ("plancherel", t.plancherel),
            ("derivative", t.derivative),
            ("scalarness", t.scalarness),
            ("a_psi", t.a_psi),
            ("oracle", t.oracle),
            ("reconstruction", t.reconstruction),
            ("proof_identities", t.proof_identities),
        ];
        // the isometry tolerance may be 0 to force a failure
        for (name, v) in positive
            .into_iter()
            .chain([("isometry", t.isometry + f64::MIN_POSITIVE)])
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if !(t.heisenberg.is_finite() && t.heisenberg >= 0.0) || !t.banouh_min_ratio.is_finite() {
            return Err(config(
                "heisenberg slack and banouh_min_ratio must be finite".to_string(),
            ));
        }
        for spec in self.suite.iter().chain(&self.roundtrip_functions()) {
            self.expand(spec)?;
        }
        Ok(())
    }

    /// Resolves a generator entry to concrete test functions.
    pub fn expand(&self, spec: &FunctionSpec) -> Result<Vec<TestFunction>, CliError> {
        let n = self.dim;
        let lib = |e: cliffwave::Error| config(format!("generator {:?}: {e}", spec.generator));
        let coefficient = match &spec.coefficient {
            Some(text) => Multivector::parse(n, text).map_err(lib)?,
            None => Multivector::one(n).map_err(lib)?,
        };
        let vector = |v: &Option<Vec<f64>>, what: &str| -> Result<Vec<f64>, CliError> {
            match v {
                Some(v) if v.len() == n => Ok(v.clone()),
                Some(v) => Err(config(format!("{what} has {} components, expected {n}", v.len()))),
                None => Ok(vec![0.0; n]),
            }
        };
        let seeds: Vec<u64> = match (spec.seed, spec.count) {
            (Some(s), None) => vec![s],
            (Some(s), Some(c)) => (0..c as u64).map(|i| s + i).collect(),
            (None, c) => (0..c.unwrap_or(1) as u64).map(|i| self.seed * 1000 + i + 1).collect(),
        };
        let mut out = match spec.generator.as_str() {
            "gaussian" => {
                let mut f = TestFunction::anisotropic_gaussian(
                    n,
                    &coefficient,
                    &vec![spec.width.unwrap_or(1.0); n],
                    &vector(&spec.center, "center")?,
                );
                f.name = "gaussian".into();
                vec![f]
            }
            "modulated_gaussian" => {
                let mut f = TestFunction::modulated_gaussian(
                    n,
                    &coefficient,
                    spec.width.unwrap_or(3.0),
                    &vector(&spec.wavevector, "wavevector")?,
                );
                if spec.center.is_some() {
                    f = f.translated(&vector(&spec.center, "center")?);
                }
                vec![f]
            }
            "random_band_limited" => seeds
                .iter()
                .map(|&s| TestFunction::random_band_limited(n, s))
                .collect::<Result<_, _>>()
                .map_err(lib)?,
            "random_band_pass" => seeds
                .iter()
                .map(|&s| TestFunction::random_band_pass(n, s))
                .collect::<Result<_, _>>()
                .map_err(lib)?,
            "random_real" => seeds
                .iter()
                .map(|&s| TestFunction::random_real(n, s))
                .collect::<Result<_, _>>()
                .map_err(lib)?,
            other => return Err(config(format!("unknown generator {other:?}"))),
        };
        if let Some(a) = spec.dilation {
            if !(a > 0.0 && a.is_finite()) {
                return Err(config(format!("dilation must be positive, got {a}")));
            }
            out = out.into_iter().map(|f| f.dilated(a)).collect();
        }
        Ok(out)
    }
}

pub fn wavelet_theorem(name: &str) -> bool {
    matches!(name, "banouh_bound" | "sharp_bound" | "proof_identities_check")
}
