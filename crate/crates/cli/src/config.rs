//! Run configuration: JSON with a versioned `schema` field.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use finsler_core::calculus::{Matrix, Vector};
use finsler_core::hypersurface::{EmbeddingSpec, Orientation};
use finsler_core::metric::{MetricSpec, VolumeDensity};
use finsler_core::navigation::WindFieldSpec;
use finsler_core::theorems::{CheckKind, HkExpectation, Scenario};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WindConfig {
    Zero,
    Constant { b: Vec<f64> },
    Dilation {
        c: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    Affine { a: Vec<Vec<f64>>, b: Vec<f64> },
}

impl WindConfig {
    fn build(&self, n: usize) -> Result<WindFieldSpec> {
        let vector = |v: &[f64], key: &str| -> Result<Vector> {
            if v.len() != n {
                bail!("wind.{key}: expected {n} components, found {}", v.len());
            }
            Ok(Vector::from_slice(v))
        };
        Ok(match self {
            WindConfig::Zero => WindFieldSpec::zero(n),
            WindConfig::Constant { b } => WindFieldSpec::constant(vector(b, "b")?),
            WindConfig::Dilation { c, center } => {
                let center = match center {
                    Some(p) => vector(p, "center")?,
                    None => Vector::zeros(n),
                };
                WindFieldSpec::dilation(*c, center)
            }
            WindConfig::Affine { a, b } => {
                if a.len() != n || a.iter().any(|row| row.len() != n) {
                    bail!("wind.a: expected a {n}x{n} matrix");
                }
                WindFieldSpec::affine(Matrix::from_rows(a), vector(b, "b")?)
            }
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "one")]
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { scale: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_flow_times")]
    pub flow_times: Vec<f64>,
    #[serde(default)]
    pub hk_expect: HkExpectation,
    #[serde(default = "default_variations")]
    pub variations: usize,
    #[serde(default = "default_cross_pairs")]
    pub cross_pairs: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            flow_times: default_flow_times(),
            hk_expect: HkExpectation::default(),
            variations: default_variations(),
            cross_pairs: default_cross_pairs(),
        }
    }
}

fn default_flow_times() -> Vec<f64> {
    vec![0.1, 0.5]
}

fn default_variations() -> usize {
    5
}

fn default_cross_pairs() -> usize {
    100
}

fn default_grid_order() -> usize {
    8
}

fn default_wind() -> WindConfig {
    WindConfig::Zero
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub metric: MetricSpec,
    #[serde(default = "default_wind")]
    pub wind: WindConfig,
    pub embedding: EmbeddingSpec,
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default)]
    pub density: VolumeDensity,
    #[serde(default = "default_grid_order")]
    pub grid_order: usize,
    #[serde(default)]
    pub seed: u64,
    pub checks: Vec<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Output,
    #[serde(default)]
    pub options: Options,
}

/// A parsed configuration together with the resolved check list and scenario.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: RunConfig,
    pub checks: Vec<CheckKind>,
    pub scenario: Scenario,
    pub digest: String,
}

fn keyed<E: std::fmt::Display>(e: serde_path_to_error::Error<E>) -> anyhow::Error {
    let path = e.path().to_string();
    let key = if path == "." { "<root>".to_string() } else { path };
    anyhow!("{key}: {}", e.inner())
}

/// Parse JSON text; errors name the offending key and its line.
pub fn parse(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(keyed)
}

pub fn from_value(value: serde_json::Value) -> Result<RunConfig> {
    serde_path_to_error::deserialize(value).map_err(keyed)
}

/// Read a config file, checking its structure against the text so that
/// diagnostics carry line numbers.
pub fn load(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| anyhow!("<root>: config is not valid JSON: {e}"))?;
    parse(&text)?;
    Ok(value)
}

/// First 16 hex digits of the SHA-256 of the canonical (key-sorted, compact)
/// configuration, with the output section removed.
pub fn digest(value: &serde_json::Value) -> String {
    let mut canonical = value.clone();
    if let Some(map) = canonical.as_object_mut() {
        map.remove("output");
    }
    let bytes = serde_json::to_vec(&canonical).expect("JSON values serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Keys whose value is a list; sweeping them sets a one-element list.
const LIST_KEYS: [&str; 1] = ["options.flow_times"];

/// Set a dotted key such as `wind.c` or `grid_order`. List-valued targets
/// receive a one-element list.
pub fn set_key(value: &mut serde_json::Value, key: &str, new: f64) -> Result<()> {
    let mut cursor = value;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let map = cursor
            .as_object_mut()
            .ok_or_else(|| anyhow!("{key}: `{}` is not an object", parts[..i].join(".")))?;
        if i + 1 == parts.len() {
            let number = if new.fract() == 0.0 && new.abs() < 1e15 && matches!(map.get(*part), Some(v) if v.is_u64() || v.is_i64()) {
                serde_json::json!(new as i64)
            } else {
                serde_json::json!(new)
            };
            let slot = map.entry(part.to_string()).or_insert(serde_json::Value::Null);
            *slot = if slot.is_array() || LIST_KEYS.contains(&key) { serde_json::json!([number]) } else { number };
            return Ok(());
        }
        cursor = map.entry(part.to_string()).or_insert_with(|| serde_json::json!({}));
    }
    unreachable!("split yields at least one part")
}

pub fn resolve(value: serde_json::Value) -> Result<Resolved> {
    let digest = digest(&value);
    let config = from_value(value)?;
    if config.schema != SCHEMA_VERSION {
        bail!("schema: unsupported version {} (expected {SCHEMA_VERSION})", config.schema);
    }
    config.metric.validate().map_err(|e| anyhow!("metric: {e}"))?;
    let n = config.metric.dim();
    let wind = config.wind.build(n)?;
    wind.validate(n).map_err(|e| anyhow!("wind: {e}"))?;
    config.embedding.validate().map_err(|e| anyhow!("embedding: {e}"))?;
    if config.embedding.dim() != n {
        bail!(
            "embedding: dimension {} does not match the metric dimension {n}",
            config.embedding.dim()
        );
    }
    if config.grid_order < 2 {
        bail!("grid_order: must be at least 2, found {}", config.grid_order);
    }
    if !(config.tolerances.scale > 0.0 && config.tolerances.scale.is_finite()) {
        bail!("tolerances.scale: must be positive, found {}", config.tolerances.scale);
    }
    if config.checks.is_empty() {
        bail!("checks: at least one check is required");
    }
    let checks = config
        .checks
        .iter()
        .enumerate()
        .map(|(i, name)| {
            CheckKind::from_name(name)
                .ok_or_else(|| anyhow!("checks[{i}]: unknown check `{name}` (see `finsler list-checks`)"))
        })
        .collect::<Result<Vec<_>>>()?;
    let scenario = Scenario {
        metric: config.metric.clone(),
        wind,
        embedding: config.embedding.clone(),
        orientation: config.orientation,
        density: config.density,
        grid_order: config.grid_order,
        seed: config.seed,
        tol_scale: config.tolerances.scale,
        flow_times: config.options.flow_times.clone(),
        hk_expect: config.options.hk_expect,
        variations: config.options.variations,
        cross_pairs: config.options.cross_pairs,
    };
    Ok(Resolved { config, checks, scenario, digest })
}
