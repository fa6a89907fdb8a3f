//! The run configuration: one JSON document, schema-validated before any
//! computation, with command-line flags taking precedence over file keys.

use serde::Deserialize;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Full configuration surface. Every command reads the subset it needs and
/// rejects missing required keys by name; unknown keys are rejected at
/// parse time.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "su2" or "su3" (default "su2")
    pub group: Option<String>,
    /// "fundamental", "adjoint", or "spin(j)" (default "fundamental")
    pub representation: Option<String>,
    pub field: Option<FieldConfig>,
    pub grid: Option<GridConfig>,
    /// LHS transport resolution per boundary edge = multiplier · N (default 64)
    pub steps_lhs_multiplier: Option<usize>,
    pub tolerances: Option<Tolerances>,
    pub output: Option<OutputConfig>,
    /// Chern-Simons level k (monodromy, skein)
    pub level: Option<f64>,
    /// Seifert genus (seifert)
    pub genus: Option<u32>,
    /// loop area (wilson2d); also the flat-demo angular parameter is *not*
    /// read from here — see field.params
    pub area: Option<f64>,
    /// compose the braiding square root with the factor swap (default true)
    pub swap: Option<bool>,
    /// wilson2d: several loops with exclusive areas
    pub loops: Option<Vec<LoopConfig>>,
    /// wilson2d: area shared by all loops at once (block calculus)
    pub shared_area: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N_list")]
    pub n_list: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub unitarity: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// "csv", "json", or "text" (per-command defaults apply when unset)
    pub format: Option<String>,
    pub path: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    /// defaults to the top-level group
    pub group: Option<String>,
    pub representation: String,
    /// exclusive area of this loop (area not shared with the others)
    #[serde(default)]
    pub area: f64,
}

/// Read and schema-validate the config file; no file means all defaults.
pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(p) = path else { return Ok(RunConfig::default()) };
    let text = fs::read_to_string(p)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))
}

/// Output format after per-command defaulting and validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(CliError::Config(format!(
                "output.format must be \"csv\", \"json\", or \"text\", got {other:?}"
            ))),
        }
    }
}

/// Resolve the output format: explicit config value, else the command's
/// default; reject formats the command cannot emit.
pub fn resolve_format(
    cfg: &RunConfig,
    default: Format,
    allowed: &[Format],
    command: &str,
) -> Result<Format, CliError> {
    let fmt = match cfg.output.as_ref().and_then(|o| o.format.as_deref()) {
        Some(s) => Format::parse(s)?,
        None => default,
    };
    if !allowed.contains(&fmt) {
        return Err(CliError::Config(format!(
            "output.format {fmt:?} is not available for {command} (allowed: {allowed:?})"
        )));
    }
    Ok(fmt)
}
