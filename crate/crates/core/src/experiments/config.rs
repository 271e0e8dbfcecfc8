use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessOptions;
use crate::error::{Error, Result};
use crate::measures::MeasureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Scaling,
    Occupancy,
    Lonely,
    Counterexample,
}

/// A run described by one JSON document:
/// `{"measure": {...}, "m_grid": [...], "trials": 20, "seed": 1, "experiment": "scaling"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: MeasureSpec,
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub experiment: Experiment,
    /// Occupancy runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<HarnessOptions>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        if cfg.m_grid.is_empty() || cfg.trials == 0 {
            return Err(Error::usage(
                "config needs a nonempty m_grid and trials >= 1",
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureKind;

    #[test]
    fn parses_documented_shape() {
        let cfg = RunConfig::from_json(
            r#"{"measure": {"kind": "unit_square", "ambient_dim": 2, "params": {}},
                "m_grid": [1024, 2048, 4096], "trials": 20, "seed": 7, "experiment": "scaling"}"#,
        )
        .unwrap();
        assert_eq!(cfg.measure.kind, MeasureKind::UnitSquare);
        assert_eq!(cfg.experiment, Experiment::Scaling);
        assert_eq!(cfg.m_grid.len(), 3);
        let again = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = r#""measure": {"kind": "unit_square"}, "seed": 1, "experiment": "scaling""#;
        assert!(
            RunConfig::from_json(&format!(r#"{{{base}, "m_grid": [], "trials": 2}}"#)).is_err()
        );
        assert!(
            RunConfig::from_json(&format!(r#"{{{base}, "m_grid": [8], "trials": 0}}"#)).is_err()
        );
        assert!(RunConfig::from_json(&format!(
            r#"{{{base}, "m_grid": [8], "trials": 1, "bogus": 1}}"#
        ))
        .is_err());
        assert!(RunConfig::from_json(r#"{"measure": {"kind": "nope"}, "m_grid": [8], "trials": 1, "seed": 1, "experiment": "scaling"}"#).is_err());
    }
}
