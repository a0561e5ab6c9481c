//! Delimited report tables and run metadata.

use std::fmt::Write as _;
use std::path::Path;

use hyperpart_core::eval::{BenchmarkReport, ConfidenceReport, TradeoffPoint};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{AppError, Result};
use crate::run_config::RunConfig;

/// Placeholder for an algorithm that failed to train.
pub const NA: &str = "NA";

/// Rows are confidence levels, columns are algorithms, cells are confident counts.
pub fn table1_csv(report: &BenchmarkReport) -> String {
    let mut s = String::from("level");
    for a in &report.algorithms {
        s.push(',');
        s.push_str(&a.name);
    }
    s.push('\n');
    for &level in &report.levels {
        write!(s, "{level}").unwrap();
        for a in &report.algorithms {
            match a.report.as_ref().and_then(|r| r.count(level)) {
                Some(c) => write!(s, ",{c}").unwrap(),
                None => write!(s, ",{NA}").unwrap(),
            }
        }
        s.push('\n');
    }
    s
}

pub fn gain_csv(report: &BenchmarkReport) -> String {
    let mut s = String::from("level,gain,best_baseline\n");
    for g in &report.gains {
        let gain = g.gain.map_or_else(|| NA.to_string(), |v| v.to_string());
        writeln!(s, "{},{},{}", g.level, gain, g.best_baseline.as_deref().unwrap_or(NA)).unwrap();
    }
    s
}

/// Confident counts with the empirical accuracy among them.
pub fn calibration_csv<'a>(reports: impl IntoIterator<Item = &'a ConfidenceReport>) -> String {
    let mut s = String::from("algorithm,level,confident,correct,accuracy\n");
    for r in reports {
        for row in &r.rows {
            let acc = row.accuracy.map_or_else(|| NA.to_string(), |a| a.to_string());
            writeln!(s, "{},{},{},{},{}", r.algorithm, row.level, row.confident, row.correct, acc).unwrap();
        }
    }
    s
}

pub fn curve_csv(points: &[TradeoffPoint]) -> String {
    let mut s = String::from("max_leaves,leaves,gain,accuracy\n");
    for p in points {
        writeln!(s, "{},{},{},{}", p.max_leaves, p.leaves, p.gain, p.accuracy).unwrap();
    }
    s
}

/// SHA-256 over the bytes of the given files, in order.
pub fn fingerprint(paths: &[&Path]) -> Result<String> {
    let mut h = Sha256::new();
    for p in paths {
        let bytes = std::fs::read(p).map_err(|e| AppError::io(*p, e))?;
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmMeta {
    pub name: String,
    pub learner: String,
    pub failure: Option<String>,
}

/// Metadata header written next to every benchmark table.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub seed: u64,
    pub dataset_sha256: String,
    pub n_train: usize,
    pub n_test: usize,
    pub model_cells: Option<usize>,
    pub algorithms: Vec<AlgorithmMeta>,
    pub config: RunConfig,
}

impl RunMeta {
    pub fn new(report: &BenchmarkReport, config: &RunConfig, dataset_sha256: String) -> Result<Self> {
        let baselines = config.report.baseline_set()?;
        let mut algorithms = Vec::with_capacity(report.algorithms.len());
        for (i, a) in report.algorithms.iter().enumerate() {
            let learner = if i == 0 { config.pool.ids().join("+") } else { baselines[i - 1].spec.id().to_string() };
            algorithms.push(AlgorithmMeta { name: a.name.clone(), learner, failure: a.failure.clone() });
        }
        Ok(Self {
            seed: config.fit.seed,
            dataset_sha256,
            n_train: report.n_train,
            n_test: report.n_test,
            model_cells: report.model_cells,
            algorithms,
            config: config.clone(),
        })
    }
}
