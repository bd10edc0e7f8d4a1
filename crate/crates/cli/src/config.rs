//! Run configuration: a flat `key = value` file overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Settings shared by every command. Unset fields fall back to
/// command-specific defaults when the run is resolved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub algebra: Option<String>,
    pub k_family: Option<String>,
    pub r_matrix: Option<String>,
    pub spectral_samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub order: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("config line {line}: bad value '{value}' for {key}"))
}

impl ConfigFile {
    /// Parses `key = value` lines. Blank lines and lines starting with `#`
    /// are skipped, as is anything after a `#` preceded by whitespace.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = ConfigFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find(" #").or_else(|| raw.find("\t#")) {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("config line {line_no}: expected 'key = value'"))?;
            match key {
                "algebra" => cfg.algebra = Some(value.to_string()),
                "k_family" => cfg.k_family = Some(value.to_string()),
                "r_matrix" => cfg.r_matrix = Some(value.to_string()),
                "spectral_samples" => {
                    cfg.spectral_samples = Some(parse_value(key, value, line_no)?)
                }
                "seed" => cfg.seed = Some(parse_value(key, value, line_no)?),
                "tolerance" => cfg.tolerance = Some(parse_value(key, value, line_no)?),
                "order" => cfg.order = Some(parse_value(key, value, line_no)?),
                "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
                _ => return Err(format!("config line {line_no}: unknown key '{key}'")),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            algebra: other.algebra.or(self.algebra),
            k_family: other.k_family.or(self.k_family),
            r_matrix: other.r_matrix.or(self.r_matrix),
            spectral_samples: other.spectral_samples.or(self.spectral_samples),
            seed: other.seed.or(self.seed),
            tolerance: other.tolerance.or(self.tolerance),
            order: other.order.or(self.order),
            output_dir: other.output_dir.or(self.output_dir),
        }
    }
}

/// A fully resolved configuration, echoed into every report. The output
/// directory is left out so that reports do not depend on where they land.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algebra: String,
    pub k_family: String,
    pub r_matrix: String,
    pub spectral_samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub order: usize,
}

impl RunConfig {
    pub fn key_value_lines(&self) -> Vec<String> {
        vec![
            format!("config.algebra = {}", self.algebra),
            format!("config.k_family = {}", self.k_family),
            format!("config.r_matrix = {}", self.r_matrix),
            format!("config.spectral_samples = {}", self.spectral_samples),
            format!("config.seed = {}", self.seed),
            format!("config.tolerance = {:e}", self.tolerance),
            format!("config.order = {}", self.order),
        ]
    }
}
