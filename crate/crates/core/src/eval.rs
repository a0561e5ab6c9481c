//! Confidence-level metrics, gain against baselines, benchmark tables,
//! partition-count trade-off curves and per-cell feature reports.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataprep::rank_features;
use crate::learners::{fit_baseline, LearnerSpec, TrainedPredictor};
use crate::math::{derive_seed, STREAM_BASELINE};
use crate::objective::predict_class;
use crate::partitioner::{fit_model, PartitionModel};
use crate::{par, Dataset, DatasetRole, Error, FitConfig, Pool, Result};

/// Confidence levels of the standard report.
pub const DEFAULT_LEVELS: [f64; 4] = [0.80, 0.85, 0.90, 0.95];

/// Cell size below which no feature ranking is attempted.
pub const MIN_RANKING_ROWS: usize = 10;

/// Rows with `max(p, 1 - p) >= level`, and how many of those the
/// thresholded prediction gets right.
pub fn confident_count(predictions: &[f64], labels: &[u8], level: f64) -> Result<(usize, usize)> {
    if !(level > 0.5 && level <= 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level must lie in (0.5, 1], got {level}")));
    }
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), got: predictions.len() });
    }
    let mut count = 0;
    let mut correct = 0;
    for (&p, &y) in predictions.iter().zip(labels) {
        if p.max(1.0 - p) >= level {
            count += 1;
            correct += (predict_class(p) == y) as usize;
        }
    }
    Ok((count, correct))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceRow {
    pub level: f64,
    pub confident: usize,
    pub correct: usize,
    /// `correct / confident`, absent when nothing is confident.
    pub accuracy: Option<f64>,
}

/// Confident counts of one algorithm on one test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceReport {
    pub algorithm: String,
    pub n_test: usize,
    /// Zero-one accuracy over the whole test set.
    pub accuracy: f64,
    pub rows: Vec<ConfidenceRow>,
}

impl ConfidenceReport {
    pub fn new(algorithm: impl Into<String>, predictions: &[f64], labels: &[u8], levels: &[f64]) -> Result<Self> {
        let rows = levels
            .iter()
            .map(|&level| {
                let (confident, correct) = confident_count(predictions, labels, level)?;
                let accuracy = (confident > 0).then(|| correct as f64 / confident as f64);
                Ok(ConfidenceRow { level, confident, correct, accuracy })
            })
            .collect::<Result<Vec<_>>>()?;
        let hits = predictions.iter().zip(labels).filter(|(&p, &y)| predict_class(p) == y).count();
        let accuracy = if labels.is_empty() { 0.0 } else { hits as f64 / labels.len() as f64 };
        Ok(Self { algorithm: algorithm.into(), n_test: labels.len(), accuracy, rows })
    }

    pub fn count(&self, level: f64) -> Option<usize> {
        self.rows.iter().find(|r| r.level == level).map(|r| r.confident)
    }
}

/// `count_a(level) - count_b(level)`.
pub fn gain(a: &ConfidenceReport, b: &ConfidenceReport, level: f64) -> Result<i64> {
    if a.n_test != b.n_test {
        return Err(Error::InvalidArgument(format!("reports cover {} and {} test rows", a.n_test, b.n_test)));
    }
    let missing = || Error::InvalidArgument(format!("level {level} missing from a report"));
    let ca = a.count(level).ok_or_else(missing)?;
    let cb = b.count(level).ok_or_else(missing)?;
    Ok(ca as i64 - cb as i64)
}

/// Gain of `model` over the baseline with the most confident rows at `level`
/// (first in order on ties). `None` when there are no baselines.
pub fn gain_vs_best(
    model: &ConfidenceReport,
    baselines: &[ConfidenceReport],
    level: f64,
) -> Result<Option<(i64, String)>> {
    let mut best: Option<&ConfidenceReport> = None;
    for b in baselines {
        let cb = b.count(level).ok_or_else(|| Error::InvalidArgument(format!("level {level} missing")))?;
        if best.is_none_or(|cur| cb > cur.count(level).unwrap_or(0)) {
            best = Some(b);
        }
    }
    best.map(|b| gain(model, b, level).map(|g| (g, b.algorithm.clone()))).transpose()
}

/// A benchmark-only learner with its table name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub spec: LearnerSpec,
}

/// Logit, Lasso, DTree, RForest and ABoost.
pub fn standard_baselines() -> Vec<Baseline> {
    [
        ("Logit", LearnerSpec::logistic()),
        ("Lasso", LearnerSpec::lasso()),
        ("DTree", LearnerSpec::tree()),
        ("RForest", LearnerSpec::random_forest()),
        ("ABoost", LearnerSpec::adaboost()),
    ]
    .into_iter()
    .map(|(name, spec)| Baseline { name: name.into(), spec })
    .collect()
}

/// Name of the partition model's column in reports.
pub const MODEL_COLUMN: &str = "Partition";

fn fit_any(spec: &LearnerSpec, train: &Dataset, seed: u64) -> Result<TrainedPredictor> {
    if spec.benchmark_only() {
        fit_baseline(spec, train, seed)
    } else {
        crate::learners::fit(spec, train, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub name: String,
    pub report: Option<ConfidenceReport>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainRow {
    pub level: f64,
    pub gain: Option<i64>,
    pub best_baseline: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub n_train: usize,
    pub n_test: usize,
    pub levels: Vec<f64>,
    /// The partition model first, then the baselines in the order given.
    pub algorithms: Vec<AlgorithmResult>,
    pub gains: Vec<GainRow>,
    pub model_cells: Option<usize>,
}

impl BenchmarkReport {
    pub fn report(&self, name: &str) -> Option<&ConfidenceReport> {
        self.algorithms.iter().find(|a| a.name == name).and_then(|a| a.report.as_ref())
    }
}

/// Trains the partition model and every baseline on `train` and tabulates
/// confident counts on `test`. A failed fit is recorded, not fatal.
pub fn benchmark_report(
    train: &Dataset,
    test: &Dataset,
    config: &FitConfig,
    pool: &Pool,
    baselines: &[Baseline],
    levels: &[f64],
) -> Result<BenchmarkReport> {
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch { expected: train.dim(), got: test.dim() });
    }
    let labels: Vec<u8> = test.labels().collect();
    let model = fit_model(train, config, pool);
    let model_cells = model.as_ref().ok().map(PartitionModel::len);
    let mut algorithms = vec![match model {
        Ok(m) => {
            let preds = m.predict_dataset(test)?;
            AlgorithmResult {
                name: MODEL_COLUMN.into(),
                report: Some(ConfidenceReport::new(MODEL_COLUMN, &preds, &labels, levels)?),
                failure: None,
            }
        }
        Err(e) => AlgorithmResult { name: MODEL_COLUMN.into(), report: None, failure: Some(e.to_string()) },
    }];
    let jobs: Vec<(usize, &Baseline)> = baselines.iter().enumerate().collect();
    let fitted =
        par::map(&jobs, |&(i, b)| fit_any(&b.spec, train, derive_seed(config.seed, STREAM_BASELINE + i as u64)));
    for ((_, b), fit) in jobs.iter().zip(fitted) {
        algorithms.push(match fit {
            Ok(p) => {
                let preds: Vec<f64> = test.instances().iter().map(|r| p.predict_unchecked(&r.x)).collect();
                AlgorithmResult {
                    name: b.name.clone(),
                    report: Some(ConfidenceReport::new(b.name.clone(), &preds, &labels, levels)?),
                    failure: None,
                }
            }
            Err(e) => AlgorithmResult { name: b.name.clone(), report: None, failure: Some(e.to_string()) },
        });
    }
    let baseline_reports: Vec<ConfidenceReport> = algorithms[1..].iter().filter_map(|a| a.report.clone()).collect();
    let gains = levels
        .iter()
        .map(|&level| {
            let best = match &algorithms[0].report {
                Some(r) => gain_vs_best(r, &baseline_reports, level)?,
                None => None,
            };
            Ok(GainRow { level, gain: best.as_ref().map(|b| b.0), best_baseline: best.map(|b| b.1) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkReport {
        n_train: train.len(),
        n_test: test.len(),
        levels: levels.to_vec(),
        algorithms,
        gains,
        model_cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub max_leaves: usize,
    /// Cells the capped model actually used.
    pub leaves: usize,
    /// Confident-count gain over the best baseline at the curve's level.
    pub gain: i64,
    pub accuracy: f64,
}

/// Retrains with each leaf cap and reports gain and test accuracy. `caps`
/// must be strictly increasing and start at 1.
pub fn tradeoff_curve(
    train: &Dataset,
    test: &Dataset,
    config: &FitConfig,
    pool: &Pool,
    caps: &[usize],
    baselines: &[Baseline],
    level: f64,
) -> Result<Vec<TradeoffPoint>> {
    if caps.first() != Some(&1) || caps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("leaf caps must increase strictly from 1".into()));
    }
    let labels: Vec<u8> = test.labels().collect();
    let jobs: Vec<(usize, &Baseline)> = baselines.iter().enumerate().collect();
    let baseline_reports = par::map(&jobs, |&(i, b)| {
        let p = fit_any(&b.spec, train, derive_seed(config.seed, STREAM_BASELINE + i as u64))?;
        let preds: Vec<f64> = test.instances().iter().map(|r| p.predict_unchecked(&r.x)).collect();
        ConfidenceReport::new(b.name.clone(), &preds, &labels, &[level])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let points = par::map(caps, |&cap| {
        let cfg = FitConfig { max_leaves: Some(cap), ..config.clone() };
        let model = fit_model(train, &cfg, pool)?;
        let preds = model.predict_dataset(test)?;
        let report = ConfidenceReport::new(MODEL_COLUMN, &preds, &labels, &[level])?;
        let gain = match gain_vs_best(&report, &baseline_reports, level)? {
            Some((g, _)) => g,
            None => report.count(level).unwrap_or(0) as i64,
        };
        Ok(TradeoffPoint { max_leaves: cap, leaves: model.len(), gain, accuracy: report.accuracy })
    });
    points.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub name: String,
    pub index: usize,
    /// Correlation with the label within the rows considered.
    pub r_cf: f64,
    /// Whether correlation-based selection picked the feature.
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFeatures {
    pub cell: usize,
    pub rows: usize,
    /// Top features, or `None` when the cell has too few rows.
    pub ranking: Option<Vec<RankedFeature>>,
    pub merit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub global: Vec<RankedFeature>,
    pub global_merit: f64,
    pub cells: Vec<CellFeatures>,
}

/// Feature ranking over all of `data` and within each model cell, each cut
/// to the top `top` entries.
pub fn partition_feature_report(model: &PartitionModel, data: &Dataset, top: usize) -> Result<FeatureReport> {
    if data.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: data.dim() });
    }
    let names: Vec<String> = data.schema().names().map(String::from).collect();
    let ranked = |d: &Dataset| {
        let (ranks, merit) = rank_features(d);
        let list = ranks
            .into_iter()
            .take(top)
            .map(|r| RankedFeature { name: names[r.index].clone(), index: r.index, r_cf: r.r_cf, selected: r.selected })
            .collect::<Vec<_>>();
        (list, merit)
    };
    let (global, global_merit) = ranked(data);
    let mut members = vec![Vec::new(); model.len()];
    for (i, r) in data.instances().iter().enumerate() {
        members[model.locate(&r.x)?].push(i);
    }
    let cells = members
        .iter()
        .enumerate()
        .map(|(cell, idx)| {
            if idx.len() < MIN_RANKING_ROWS {
                return CellFeatures { cell, rows: idx.len(), ranking: None, merit: None };
            }
            let (list, merit) = ranked(&data.subset(idx, DatasetRole::Unsplit));
            CellFeatures { cell, rows: idx.len(), ranking: Some(list), merit: Some(merit) }
        })
        .collect();
    Ok(FeatureReport { global, global_merit, cells })
}
