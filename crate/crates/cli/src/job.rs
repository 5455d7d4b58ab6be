//! Job files: the versioned envelope and per-command parameter schemas.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::ValueEnum;
use deloc_core::quad::QuadConfig;
use deloc_core::suite::SuiteConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convert::{AlgElemRepr, AngleRepr, ComplexRepr, ElementRepr, GroupDesc};
use crate::report::{Failure, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GroupInfo,
    Trace,
    Tau,
    Eta,
    Theorem43,
    Lefschetz,
    Recognize,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GroupInfo => "group-info",
            Command::Trace => "trace",
            Command::Tau => "tau",
            Command::Eta => "eta",
            Command::Theorem43 => "theorem43",
            Command::Lefschetz => "lefschetz",
            Command::Recognize => "recognize",
            Command::Suite => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Exact,
    #[default]
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub quad: QuadConfig,
    /// Smallest admissible `|λ|` for operators fed to spectral calculus.
    pub spectral_gap: f64,
    /// Pass threshold for `|τ + ½η|`.
    pub rho_eta: f64,
    pub recognition_height: u64,
    pub recognition_residual: f64,
    /// Modulus below which an infinite-order value counts as vanishing.
    pub vanishing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: QuadConfig::default(),
            spectral_gap: 1e-6,
            rho_eta: 1e-6,
            recognition_height: 10_000,
            recognition_residual: 1e-9,
            vanishing: 1e-9,
        }
    }
}

/// The envelope of a job file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub backend: Option<Backend>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub parameters: Value,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl JobFile {
    pub fn empty() -> Self {
        JobFile {
            schema_version: SCHEMA_VERSION,
            command: None,
            backend: None,
            workers: None,
            output: None,
            tolerances: Tolerances::default(),
            parameters: Value::Null,
        }
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let job: JobFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Failure::Validation { pointer: (path != ".").then_some(path), message: e.inner().to_string() }
        })?;
        if job.schema_version != SCHEMA_VERSION {
            return Err(Failure::at(
                "schema_version",
                format!("unsupported schema version {}; this build reads {SCHEMA_VERSION}", job.schema_version),
            ));
        }
        Ok(job)
    }
}

/// Deserializes `parameters`, reporting the path of the offending field.
pub fn parameters<T: DeserializeOwned>(value: &Value) -> Result<T, Failure> {
    let value = if value.is_null() { Value::Object(Default::default()) } else { value.clone() };
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let pointer = if path == "." { "parameters".to_string() } else { format!("parameters.{path}") };
        Failure::at(&pointer, e.inner().to_string())
    })
}

/// A conjugacy class: the whole class for finite groups, the ball of the
/// given radius otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub representative: ElementRepr,
    #[serde(default)]
    pub radius: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInfoParams {
    pub group: GroupDesc,
    pub radius: u32,
    /// Defaults to the non-identity class representatives of a finite group,
    /// or one generator from each inverse pair of an infinite group.
    #[serde(default)]
    pub classes: Option<Vec<ElementRepr>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeminormParams {
    pub order: u32,
    /// Radius of the trace constant; defaults to `max(10, propagation)`.
    #[serde(default)]
    pub radius: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceParams {
    pub group: GroupDesc,
    pub element: AlgElemRepr,
    pub class: ClassSpec,
    #[serde(default)]
    pub seminorm: Option<SeminormParams>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRepr {
    pub t: f64,
    pub value: AlgElemRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PathDesc {
    Boundary { idempotent: AlgElemRepr },
    Winding { idempotent: AlgElemRepr },
    Rho {
        operator: AlgElemRepr,
        #[serde(default)]
        horizon: Option<f64>,
    },
    Samples {
        samples: Vec<SampleRepr>,
        /// `F(T)` of a commuting-family tail.
        #[serde(default)]
        tail: Option<AlgElemRepr>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauParams {
    pub group: GroupDesc,
    pub path: PathDesc,
    pub class: ClassSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaModeName {
    SignSum,
    HeatIntegral,
    #[default]
    Both,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumEntryRepr {
    pub eigenvalue: f64,
    pub multiplicity: ComplexRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EtaSource {
    Operator { group: GroupDesc, operator: AlgElemRepr, class: ClassSpec },
    Spectrum { class_label: String, entries: Vec<SpectrumEntryRepr> },
    CircleDeck { n: i64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaParams {
    pub source: EtaSource,
    #[serde(default)]
    pub mode: EtaModeName,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoEtaParams {
    pub group: GroupDesc,
    pub operator: AlgElemRepr,
    /// Defaults to every non-identity class.
    #[serde(default)]
    pub classes: Option<Vec<ElementRepr>>,
    #[serde(default)]
    pub horizon: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalRepr {
    pub angle: AngleRepr,
    pub roots: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ERootRepr {
    pub root: String,
    pub angle: AngleRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionRepr {
    pub monomial: std::collections::BTreeMap<String, u32>,
    pub value: ComplexRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRepr {
    pub dimension: u32,
    pub ambient_dimension: u32,
    #[serde(default)]
    pub normal: Vec<NormalRepr>,
    #[serde(default)]
    pub tangent_roots: Vec<String>,
    #[serde(default)]
    pub beta: Option<AngleRepr>,
    #[serde(default)]
    pub c1_root: Option<String>,
    #[serde(default)]
    pub e_roots: Vec<ERootRepr>,
    pub integration: Vec<IntersectionRepr>,
    #[serde(default = "plus_one")]
    pub sign: i8,
}

fn plus_one() -> i8 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LefschetzParams {
    pub components: Vec<ComponentRepr>,
    /// Order of the acting element; enables recognition in `ℚ_⟨n⟩`.
    #[serde(default)]
    pub order: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecognizeParams {
    pub value: ComplexRepr,
    /// Element orders generating the field; alternatively `group`.
    #[serde(default)]
    pub orders: Option<BTreeSet<u64>>,
    #[serde(default)]
    pub group: Option<GroupDesc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteParams {
    /// Criterion ids; defaults to 1 through 10.
    #[serde(default)]
    pub criteria: Option<Vec<u8>>,
    #[serde(default)]
    pub config: SuiteConfig,
}
