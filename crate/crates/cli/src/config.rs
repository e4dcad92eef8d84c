//! Run configuration: tolerances, probe sizing, output format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub cluster_tol: f64,
    pub boundary_tol: f64,
    pub probe_j_max: u32,
    pub probe_window: u32,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cluster_tol: besov_embed::DEFAULT_CLUSTER_TOL,
            boundary_tol: besov_embed::DEFAULT_BOUNDARY_TOL,
            probe_j_max: 400,
            probe_window: 16,
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::parse(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |t: f64| !t.is_finite() || t <= 0.0;
        if bad(self.cluster_tol) || bad(self.boundary_tol) {
            return Err(CliError::parse("tolerances must be positive"));
        }
        if self.probe_window < 2 {
            return Err(CliError::parse("probe_window must be at least 2"));
        }
        if self.probe_j_max < self.probe_window {
            return Err(CliError::parse("probe_j_max must be at least probe_window"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        assert!(c.validate().is_ok());
        assert_eq!(c.probe_j_max, 400);
        assert_eq!(c.probe_window, 16);
    }

    #[test]
    fn parses_partial_config() {
        let c: RunConfig = serde_json::from_str(r#"{"probe_j_max": 100}"#).unwrap();
        assert_eq!(c.probe_j_max, 100);
        assert_eq!(c.cluster_tol, besov_embed::DEFAULT_CLUSTER_TOL);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"probe_jmax": 100}"#).is_err());
    }
}
