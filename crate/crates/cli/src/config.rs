//! JSON run configurations. Every block rejects unknown keys, and every
//! structure is validated before any computation starts.

use std::fmt;
use std::path::Path;

use cloakforge::designer::{DesignProblem, RadiiSpec};
use cloakforge::layered::{Core, LayeredStructure, Material};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Malformed or inconsistent configuration (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(field: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError(format!("field `{field}`: {msg}"))
}

pub fn load<C: DeserializeOwned>(path: &Path) -> Result<C, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
}

pub fn parse<C: DeserializeOwned>(text: &str) -> Result<C, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub mu: f64,
    pub eps: f64,
}

impl From<MaterialSpec> for Material<f64> {
    fn from(m: MaterialSpec) -> Self {
        Material::new(m.mu, m.eps)
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoreSpec {
    Neumann,
    Penetrable { mu: f64, eps: f64 },
}

fn vacuum() -> MaterialSpec {
    MaterialSpec { mu: 1.0, eps: 1.0 }
}

fn neumann() -> CoreSpec {
    CoreSpec::Neumann
}

/// `radii` outermost first; `layers[j]` fills `radii[j+1] < r < radii[j]`.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub radii: Vec<f64>,
    #[serde(default)]
    pub layers: Vec<MaterialSpec>,
    #[serde(default = "neumann")]
    pub core: CoreSpec,
    #[serde(default = "vacuum")]
    pub background: MaterialSpec,
}

impl StructureSpec {
    pub fn build(&self, field: &str) -> Result<LayeredStructure<f64>, ConfigError> {
        let core = match self.core {
            CoreSpec::Neumann => Core::Neumann,
            CoreSpec::Penetrable { mu, eps } => Core::Penetrable(Material::new(mu, eps)),
        };
        LayeredStructure::new(
            self.radii.clone(),
            self.layers.iter().map(|m| (*m).into()).collect(),
            core,
            self.background.into(),
        )
        .map_err(|e| invalid(field, e))
    }

    pub fn from_structure(s: &LayeredStructure<f64>) -> Self {
        let m = |m: Material<f64>| MaterialSpec { mu: m.mu, eps: m.eps };
        Self {
            radii: s.radii().to_vec(),
            layers: s.layers().iter().map(|l| m(*l)).collect(),
            core: match s.core() {
                Core::Neumann => CoreSpec::Neumann,
                Core::Penetrable(c) => CoreSpec::Penetrable { mu: c.mu, eps: c.eps },
            },
            background: m(s.background()),
        }
    }
}

/// A structure given inline (`structure`) or by path to a structure file
/// (`structure_file`, relative to the config file).
pub trait StructureSource {
    fn inline(&self) -> Option<&StructureSpec>;
    fn file(&self) -> Option<&str>;

    fn resolve(&self, base: &Path) -> Result<LayeredStructure<f64>, ConfigError> {
        match (self.inline(), self.file()) {
            (Some(s), None) => s.build("structure"),
            (None, Some(p)) => {
                let path = base.join(p);
                let spec: StructureSpec = load(&path)?;
                spec.build("structure_file")
            }
            (Some(_), Some(_)) => Err(ConfigError("give `structure` or `structure_file`, not both".into())),
            (None, None) => Err(ConfigError("missing field `structure` (or `structure_file`)".into())),
        }
    }
}

macro_rules! structure_source {
    ($($t:ty),*) => {$(
        impl StructureSource for $t {
            fn inline(&self) -> Option<&StructureSpec> {
                self.structure.as_ref()
            }
            fn file(&self) -> Option<&str> {
                self.structure_file.as_deref()
            }
        }
    )*};
}

structure_source!(CoeffsConfig, ExpandConfig, SweepConfig, PushforwardConfig, VerifyConfig);

fn check_positive(field: &str, values: &[f64]) -> Result<(), ConfigError> {
    if values.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(invalid(field, format!("{v} is not a finite positive number"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsConfig {
    pub structure: Option<StructureSpec>,
    pub structure_file: Option<String>,
    pub omegas: Vec<f64>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
}

fn default_n_max() -> usize {
    10
}

impl CoeffsConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("omegas", &self.omegas)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    pub structure: Option<StructureSpec>,
    pub structure_file: Option<String>,
    #[serde(default = "default_order")]
    pub order: usize,
    /// Emit every table entry instead of the generically nonzero ones.
    #[serde(default)]
    pub all_entries: bool,
}

fn default_order() -> usize {
    2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub structure: Option<StructureSpec>,
    pub structure_file: Option<String>,
    #[serde(default = "default_t")]
    pub t: Vec<f64>,
}

fn default_t() -> Vec<f64> {
    vec![1.0, 0.1, 0.01]
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("t", &self.t)
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OptimizeRadii {
    pub outer: f64,
    pub core: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RadiiConfig {
    Fixed(Vec<f64>),
    Optimize { optimize: OptimizeRadii },
}

/// Every field optional; defaults are those of the library.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub order: Option<usize>,
    pub layers: Option<usize>,
    pub radii: Option<RadiiConfig>,
    pub bounds: Option<(f64, f64)>,
    pub weights: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub step: Option<f64>,
    pub grad_eps: Option<f64>,
    pub tol: Option<f64>,
}

impl DesignConfig {
    pub fn problem(&self, seed: Option<u64>) -> Result<DesignProblem<f64>, ConfigError> {
        let mut p = DesignProblem::new(self.order.unwrap_or(2), self.layers.unwrap_or(2));
        if let Some(r) = &self.radii {
            p.radii = match r {
                RadiiConfig::Fixed(v) => RadiiSpec::Fixed(v.clone()),
                RadiiConfig::Optimize { optimize } => RadiiSpec::Optimize { outer: optimize.outer, core: optimize.core },
            };
        }
        if let Some(b) = self.bounds {
            p.bounds = b;
        }
        if let Some(w) = &self.weights {
            p.weights = w.clone();
        }
        if let Some(s) = seed.or(self.seed) {
            p.seed = s;
        }
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { p.$f = v; })* };
        }
        set!(restarts, max_iters, step, grad_eps, tol);
        p.validate().map_err(|e| ConfigError(format!("design problem: {e}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushforwardConfig {
    pub structure: Option<StructureSpec>,
    pub structure_file: Option<String>,
    pub rho: f64,
    #[serde(default = "one")]
    pub r_min: f64,
    #[serde(default = "three")]
    pub r_max: f64,
    #[serde(default = "hundred")]
    pub radial_nodes: usize,
    #[serde(default = "sixty_four")]
    pub angular_nodes: usize,
}

fn one() -> f64 {
    1.0
}
fn three() -> f64 {
    3.0
}
fn hundred() -> usize {
    100
}
fn sixty_four() -> usize {
    64
}

impl PushforwardConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.rho > 0.0 && self.rho <= 0.5) {
            return Err(invalid("rho", "must lie in (0, 1/2]"));
        }
        if !(self.r_min >= 1.0 && self.r_max >= self.r_min && self.r_max.is_finite()) {
            return Err(invalid("r_min", "need 1 <= r_min <= r_max"));
        }
        if self.radial_nodes == 0 || self.angular_nodes == 0 {
            return Err(invalid("radial_nodes", "node counts must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub structure: Option<StructureSpec>,
    pub structure_file: Option<String>,
    #[serde(default = "default_verify_omegas")]
    pub omegas: Vec<f64>,
    #[serde(default = "default_verify_n_max")]
    pub n_max: usize,
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
}

fn default_verify_omegas() -> Vec<f64> {
    vec![0.01, 0.1, 1.0, 5.0]
}
fn default_verify_n_max() -> usize {
    8
}
fn default_scales() -> Vec<f64> {
    vec![0.5, 0.1, 0.01]
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("omegas", &self.omegas)?;
        check_positive("scales", &self.scales)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledStructure {
    pub label: String,
    pub structure: StructureSpec,
}

/// Figure inputs; without a config the bare disk and the published one-
/// and two-layer profiles are plotted.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresConfig {
    #[serde(default = "default_structures")]
    pub structures: Vec<LabelledStructure>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_t")]
    pub t: Vec<f64>,
}

impl Default for FiguresConfig {
    fn default() -> Self {
        Self { structures: default_structures(), order: default_order(), t: default_t() }
    }
}

fn default_structures() -> Vec<LabelledStructure> {
    let m = |mu, eps| MaterialSpec { mu, eps };
    let spec = |radii: Vec<f64>, layers| StructureSpec { radii, layers, core: CoreSpec::Neumann, background: vacuum() };
    vec![
        LabelledStructure { label: "L=0".into(), structure: spec(vec![1.0], vec![]) },
        LabelledStructure { label: "L=1".into(), structure: spec(vec![2.0, 1.0], vec![m(0.6, 4.0 / 3.0)]) },
        LabelledStructure {
            label: "L=2".into(),
            structure: spec(vec![2.0, 1.5, 1.0], vec![m(1.4905, 1.09271), m(0.27594, 1.6702)]),
        },
    ]
}

impl FiguresConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.structures.is_empty() {
            return Err(invalid("structures", "must not be empty"));
        }
        check_positive("t", &self.t)
    }
}
