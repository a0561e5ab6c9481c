//! TOML run configuration.

use std::path::{Path, PathBuf};

use hyperpart_core::dataprep::{IngestOptions, DEFAULT_IMPUTE_K};
use hyperpart_core::eval::{standard_baselines, Baseline, DEFAULT_LEVELS};
use hyperpart_core::{FitConfig, Pool};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

/// Leaf caps swept by `tradeoff` unless configured.
pub const DEFAULT_CAPS: [usize; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImputeMethod {
    #[default]
    Knn,
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrepConfig {
    pub label_column: String,
    /// Columns missing in more than this fraction of rows are dropped.
    pub missing_threshold: f64,
    pub drop_columns: Vec<String>,
    pub impute: ImputeMethod,
    pub impute_k: usize,
}

impl Default for PrepConfig {
    fn default() -> Self {
        let ingest = IngestOptions::default();
        Self {
            label_column: ingest.label_column,
            missing_threshold: ingest.missing_threshold,
            drop_columns: ingest.drop_columns,
            impute: ImputeMethod::Knn,
            impute_k: DEFAULT_IMPUTE_K,
        }
    }
}

impl PrepConfig {
    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            label_column: self.label_column.clone(),
            missing_threshold: self.missing_threshold,
            drop_columns: self.drop_columns.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsConfig {
    pub input: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    pub confidence_levels: Vec<f64>,
    /// Baseline learner ids, reported under their display names.
    pub baselines: Vec<String>,
    /// Held-out fraction when no separate test file is given.
    pub test_fraction: f64,
    pub caps: Vec<usize>,
    /// Confidence level at which `tradeoff` measures gain.
    pub tradeoff_level: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            confidence_levels: DEFAULT_LEVELS.to_vec(),
            baselines: standard_baselines().into_iter().map(|b| b.spec.id().to_string()).collect(),
            test_fraction: 0.25,
            caps: DEFAULT_CAPS.to_vec(),
            tradeoff_level: 0.95,
        }
    }
}

impl ReportConfig {
    pub fn baseline_set(&self) -> Result<Vec<Baseline>> {
        let known = standard_baselines();
        self.baselines
            .iter()
            .map(|id| {
                known
                    .iter()
                    .find(|b| b.spec.id() == id || b.name == *id)
                    .cloned()
                    .ok_or_else(|| AppError::Config(format!("unknown baseline `{id}`")))
            })
            .collect()
    }
}

/// Everything a run needs; `fit.seed` is the single seed of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub fit: FitConfig,
    pub pool: Pool,
    pub prep: PrepConfig,
    pub paths: PathsConfig,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fit: FitConfig::default(),
            pool: Pool::standard(),
            prep: PrepConfig::default(),
            paths: PathsConfig::default(),
            report: ReportConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| AppError::Config(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            AppError::Config(m) => AppError::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// Checks the fit settings against the pool and resolves alpha.
    pub fn validate(&self) -> Result<f64> {
        self.report.baseline_set()?;
        for &l in &self.report.confidence_levels {
            if !(l > 0.5 && l <= 1.0) {
                return Err(AppError::Config(format!("confidence level {l} is outside (0.5, 1]")));
            }
        }
        self.fit.validate(self.pool.len()).map_err(|e| AppError::Config(e.to_string()))
    }
}
