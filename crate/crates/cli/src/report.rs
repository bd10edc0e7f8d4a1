//! Report artifacts: `report.txt` (flat key-value) and `report.json`.

use std::path::Path;

use kmat_core::classify::{Check, ClassificationReport};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: RunConfig,
    /// Ordered `(key, value)` pairs.
    pub summary: Vec<(String, String)>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    pub all_pass: bool,
}

pub const TEXT_NAME: &str = "report.txt";
pub const JSON_NAME: &str = "report.json";

impl RunReport {
    pub fn new(command: &str, config: RunConfig) -> Self {
        RunReport {
            command: command.to_string(),
            config,
            summary: Vec::new(),
            checks: Vec::new(),
            classification: None,
            all_pass: true,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn check(&mut self, check: Check) {
        self.all_pass &= check.pass;
        self.checks.push(check);
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("command = {}", self.command)];
        lines.extend(self.config.key_value_lines());
        lines.extend(self.summary.iter().map(|(k, v)| format!("{k} = {v}")));
        for c in &self.checks {
            lines.push(format!(
                "check.{} = {} residual={:.3e} tol={:.1e}",
                c.name,
                if c.pass { "pass" } else { "fail" },
                c.residual,
                c.tolerance
            ));
        }
        lines.push(format!("all_pass = {}", self.all_pass));
        lines.join("\n") + "\n"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("bad report: {e}"))
    }

    pub fn write(&self, dir: &Path) -> Result<(), String> {
        let fail = |e: std::io::Error| format!("cannot write report to {}: {e}", dir.display());
        std::fs::create_dir_all(dir).map_err(fail)?;
        std::fs::write(dir.join(TEXT_NAME), self.to_text()).map_err(fail)?;
        std::fs::write(dir.join(JSON_NAME), self.to_json()).map_err(fail)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let config = RunConfig {
            algebra: "sl(2)".into(),
            k_family: "diag:sl(2):1,1:xi=0".into(),
            r_matrix: "yang:sl(2)".into(),
            spectral_samples: 5,
            seed: 1,
            tolerance: 1e-10,
            order: 3,
        };
        let mut r = RunReport::new("verify", config);
        r.push("h.dim", 1);
        r.check(Check::new("bybe_max_residual", 0.1 + 0.2 - 0.3, 1e-10));
        r.check(Check::new("unitarity", 1.0, 1e-10));
        r
    }

    #[test]
    fn verdict_tracks_checks() {
        let r = sample();
        assert!(!r.all_pass);
        let text = r.to_text();
        assert!(text.contains("check.unitarity = fail residual=1.000e0 tol=1.0e-10"));
        assert!(text.ends_with("all_pass = false\n"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = sample();
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_text(), r.to_text());
    }
}
