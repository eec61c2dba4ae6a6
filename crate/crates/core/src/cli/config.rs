use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CliError, Family, EXIT_SCHEMA};
use crate::families::{AffineParams, Anchors, AuxCase, AuxSpec, PartiallyAffineParams, G_GRID_POINTS};
use crate::geometry::OpenInterval;
use crate::verify::PeterSpec;

/// Schema tag every config file must carry.
pub const CONFIG_SCHEMA: &str = "pexider-kit/config/1";

/// One run of the tool. Every section is optional; a missing family section
/// falls back to the built-in parameter set for that family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    #[serde(default)]
    pub family: Option<Family>,
    /// Corpus set used by the `profiles` family when `profiles.spec` is absent.
    #[serde(default)]
    pub case: Option<AuxCase>,
    #[serde(default)]
    pub affine: Option<AffineParams>,
    #[serde(default)]
    pub partial: Option<PartiallyAffineParams>,
    #[serde(default)]
    pub profiles: Option<ProfilesConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Residual bound overriding the family default.
    #[serde(default)]
    pub bound: Option<f64>,
    /// Classifier tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub classify_n: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Input artifact (JSON) or exported samples (CSV), relative to the
    /// config file.
    #[serde(default)]
    pub artifact: Option<PathBuf>,
    #[serde(default)]
    pub geometry: Option<GeometryConfig>,
    /// Triples checked by `selftest`; built-in ones are used when absent.
    #[serde(default)]
    pub peter: Option<Vec<PeterSpec>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema: CONFIG_SCHEMA.into(),
            family: None,
            case: None,
            affine: None,
            partial: None,
            profiles: None,
            grid: GridConfig::default(),
            bound: None,
            tol: None,
            classify_n: None,
            seed: None,
            artifact: None,
            geometry: None,
            peter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: default_n(), margin: default_margin() }
    }
}

fn default_n() -> usize {
    100
}

fn default_margin() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesConfig {
    #[serde(default)]
    pub spec: Option<AuxSpec>,
    #[serde(default)]
    pub anchors: Anchors,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_g_nodes")]
    pub g_nodes: usize,
}

impl Default for ProfilesConfig {
    fn default() -> Self {
        Self { spec: None, anchors: Anchors::default(), quad_tol: default_quad_tol(), g_nodes: default_g_nodes() }
    }
}

fn default_quad_tol() -> f64 {
    1e-10
}

fn default_g_nodes() -> usize {
    G_GRID_POINTS
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Number of random `(g1, g2, H, I)` instances.
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_slack")]
    pub slack: f64,
    /// Subinterval whose set constructions are reported for the configured
    /// family's `g1, g2`.
    #[serde(default)]
    pub h: Option<OpenInterval>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self { instances: default_instances(), slack: default_slack(), h: None }
    }
}

fn default_instances() -> usize {
    100
}

fn default_slack() -> f64 {
    1e-9
}

impl ProfilesConfig {
    pub fn spec_or_corpus(&self, case: Option<AuxCase>) -> AuxSpec {
        match (&self.spec, case) {
            (Some(s), None) => s.clone(),
            (_, c) => AuxSpec::corpus(c.unwrap_or(AuxCase::Linear)),
        }
    }
}

/// Reads and validates a config; relative artifact paths are resolved
/// against the config's directory.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_SCHEMA, format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_SCHEMA, format!("invalid config {}: {e}", path.display())))?;
    if cfg.schema != CONFIG_SCHEMA {
        return Err(CliError::new(
            EXIT_SCHEMA,
            format!("unsupported config schema {:?}, expected {CONFIG_SCHEMA:?}", cfg.schema),
        ));
    }
    if let (Some(a), Some(dir)) = (&cfg.artifact, path.parent()) {
        if a.is_relative() {
            cfg.artifact = Some(dir.join(a));
        }
    }
    Ok(cfg)
}
