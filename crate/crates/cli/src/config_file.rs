//! INI-style configuration files: `key = value` lines, `#` comments, a closed
//! key set so typos are caught, and `--set key=value` overrides on top.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::Path;

use mzsim_core::{ConfigParams, PhysicalConfig};

const REQUIRED_KEYS: [&str; 8] = [
    "mass_kg",
    "v_mps",
    "k_i_per_m",
    "d_m",
    "delta_m",
    "n_slits",
    "y12_m",
    "y23_m",
];

const OPTIONAL_KEYS: [&str; 2] = ["kick_y12prime_m", "kick_dkx_per_m"];

/// Parsed and validated run configuration.
pub struct RunConfig {
    pub config: PhysicalConfig,
    pub kick_y12prime_m: Option<f64>,
    pub kick_dkx_per_m: Option<f64>,
    /// Resolved key/value pairs in canonical order, for output headers.
    pub resolved: Vec<(String, String)>,
}

fn parse_entries(text: &str, source: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "{source}:{}: expected `key = value`, got `{raw}`",
                lineno + 1
            );
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !REQUIRED_KEYS.contains(&key.as_str()) && !OPTIONAL_KEYS.contains(&key.as_str()) {
            bail!("{source}:{}: unknown key `{key}`", lineno + 1);
        }
        if entries.insert(key.clone(), value).is_some() {
            bail!("{source}:{}: duplicate key `{key}`", lineno + 1);
        }
    }
    Ok(entries)
}

/// Load a configuration file and apply `--set key=value` overrides
/// (flag > file; every key is validated against the closed set).
pub fn load(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut entries = parse_entries(&text, &path.display().to_string())?;
    for item in overrides {
        let Some((key, value)) = item.split_once('=') else {
            bail!("--set expects key=value, got `{item}`");
        };
        let key = key.trim();
        if !REQUIRED_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
            bail!("--set: unknown key `{key}`");
        }
        entries.insert(key.to_string(), value.trim().to_string());
    }

    let number = |key: &str| -> Result<f64> {
        let value = entries
            .get(key)
            .with_context(|| format!("missing required key `{key}`"))?;
        value
            .parse::<f64>()
            .with_context(|| format!("key `{key}`: cannot parse `{value}` as a number"))
    };
    let integer = |key: &str| -> Result<u32> {
        let value = entries
            .get(key)
            .with_context(|| format!("missing required key `{key}`"))?;
        value
            .parse::<u32>()
            .with_context(|| format!("key `{key}`: cannot parse `{value}` as an integer"))
    };

    let params = ConfigParams {
        mass_kg: number("mass_kg")?,
        v_mps: number("v_mps")?,
        k_i_per_m: number("k_i_per_m")?,
        d_m: number("d_m")?,
        delta_m: number("delta_m")?,
        n_slits: integer("n_slits")?,
        y12_m: number("y12_m")?,
        y23_m: number("y23_m")?,
        amplitude: Complex64::new(1.0, 0.0),
    };
    let config = PhysicalConfig::new(params)?;

    let kick_y12prime_m = entries
        .get("kick_y12prime_m")
        .map(|v| v.parse::<f64>().context("key `kick_y12prime_m`"))
        .transpose()?;
    let kick_dkx_per_m = entries
        .get("kick_dkx_per_m")
        .map(|v| v.parse::<f64>().context("key `kick_dkx_per_m`"))
        .transpose()?;
    if kick_dkx_per_m.is_some() && kick_y12prime_m.is_none() {
        bail!("kick_dkx_per_m given without kick_y12prime_m");
    }

    let mut resolved: Vec<(String, String)> = REQUIRED_KEYS
        .iter()
        .map(|&k| (k.to_string(), entries[k].clone()))
        .collect();
    for key in OPTIONAL_KEYS {
        if let Some(v) = entries.get(key) {
            resolved.push((key.to_string(), v.clone()));
        }
    }

    Ok(RunConfig {
        config,
        kick_y12prime_m,
        kick_dkx_per_m,
        resolved,
    })
}
