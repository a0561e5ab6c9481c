//! Command-line interface.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hyperpart_core::dataprep::{self, knn_impute, mean_impute, synth_generate, train_test_split, Preset};
use hyperpart_core::eval::{self, ConfidenceReport, FeatureReport, MODEL_COLUMN};
use hyperpart_core::matching::{stable_match, ScoreMatrix};
use hyperpart_core::math::{derive_seed, STREAM_TEST};
use hyperpart_core::partitioner::fit_model_traced;
use hyperpart_core::{AlphaSpec, Dataset, DatasetRole, LossKind, Pool};
use log::info;
use serde::Serialize;

use crate::error::{AppError, Result};
use crate::io;
use crate::model_file;
use crate::report::{self, RunMeta};
use crate::run_config::{ImputeMethod, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "hyperpart", version, about = "Hypercube partitioning with per-cell learner selection")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FitArgs {
    /// Subcells per refinement step (2 or 3).
    #[arg(long)]
    pub gamma: Option<usize>,
    /// Fixed penalty weight.
    #[arg(long, conflicts_with = "delta")]
    pub alpha: Option<f64>,
    /// Derive the penalty weight from this confidence parameter.
    #[arg(long)]
    pub delta: Option<f64>,
    /// zero_one, log_loss or brier.
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long)]
    pub max_leaves: Option<usize>,
    /// Comma-separated learner ids.
    #[arg(long, value_delimiter = ',')]
    pub pool: Option<Vec<String>>,
}

impl FitArgs {
    fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(g) = self.gamma {
            cfg.fit.gamma = g;
        }
        if let Some(a) = self.alpha {
            cfg.fit.alpha = AlphaSpec::Fixed(a);
        }
        if let Some(delta) = self.delta {
            let k_assumed = match cfg.fit.alpha {
                AlphaSpec::FromDelta { k_assumed, .. } => k_assumed,
                AlphaSpec::Fixed(_) => 2,
            };
            cfg.fit.alpha = AlphaSpec::FromDelta { delta, k_assumed };
        }
        if let Some(l) = &self.loss {
            cfg.fit.loss = LossKind::parse(l).ok_or_else(|| AppError::Config(format!("unknown loss `{l}`")))?;
        }
        if let Some(m) = self.max_leaves {
            cfg.fit.max_leaves = Some(m);
        }
        if let Some(ids) = &self.pool {
            cfg.pool = Pool::from_ids(ids).map_err(|e| AppError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a synthetic dataset from a preset.
    Synth {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 4000)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the draw before missing values are applied.
        #[arg(long)]
        complete: Option<PathBuf>,
    },
    /// Drop sparse columns, encode categories and impute missing values.
    Prep {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Column report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fit a partition model.
    Train {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Refinement trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Write per-row cell and success probability.
    Predict {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a model on labeled data.
    Evaluate {
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        confidence_levels: Option<Vec<f64>>,
        /// Per-cell feature ranking as JSON.
        #[arg(long)]
        features: Option<PathBuf>,
    },
    /// Compare the partition model with the baselines.
    Benchmark {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Separate test table; otherwise a stratified split of the input.
        #[arg(long)]
        test: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        confidence_levels: Option<Vec<f64>>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Gain and accuracy as the leaf cap grows.
    Tradeoff {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        test: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<usize>>,
        /// Confidence level at which gain is counted.
        #[arg(long)]
        level: Option<f64>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Stable assignment from a recipient-by-donor score table.
    Match {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated donor capacities.
        #[arg(long, value_delimiter = ',')]
        capacities: Option<Vec<usize>>,
    },
}

const DELIMITER: u8 = b',';

fn need(arg: &Option<PathBuf>, fallback: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    arg.clone().or_else(|| fallback.clone()).ok_or_else(|| AppError::Config(format!("--{flag} is required")))
}

fn training_error(e: hyperpart_core::Error) -> AppError {
    match e {
        hyperpart_core::Error::InvalidConfig(m) => AppError::Config(m),
        e => AppError::Training(e),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.fit.seed = s;
    }
    match cli.threads {
        Some(0) => Err(AppError::Config("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| AppError::Config(e.to_string()))?
            .install(|| dispatch(cli.command, cfg)),
        None => dispatch(cli.command, cfg),
    }
}

fn dispatch(command: Command, mut cfg: RunConfig) -> Result<()> {
    let label = cfg.prep.label_column.clone();
    match command {
        Command::Synth { preset, n, out, complete } => {
            let out = need(&out, &cfg.paths.out, "out")?;
            let p = Preset::parse(&preset).ok_or_else(|| {
                AppError::Config(format!("unknown preset `{preset}`; known: {}", dataprep::preset_names().join(", ")))
            })?;
            let data = synth_generate(&p.spec(n, cfg.fit.seed))?;
            io::write_partial(&out, &data.observed, &label, DELIMITER)?;
            if let Some(c) = complete {
                io::write_dataset(&c, &data.complete, &label, DELIMITER)?;
            }
            info!("wrote {} rows of `{}` to {}", n, p.name(), out.display());
        }
        Command::Prep { input, out, report } => {
            let input = need(&input, &cfg.paths.input, "input")?;
            let out = need(&out, &cfg.paths.out, "out")?;
            let (partial, prep_report) = io::load_csv(&input, &cfg.prep.ingest_options(), DELIMITER)?;
            let data = match cfg.prep.impute {
                ImputeMethod::Knn => knn_impute(&partial, cfg.prep.impute_k)?,
                ImputeMethod::Mean => mean_impute(&partial)?,
            };
            io::write_dataset(&out, &data, &label, DELIMITER)?;
            io::write_json(&io::schema_path(&out), data.schema())?;
            if let Some(r) = report {
                io::write_json(&r, &prep_report)?;
            }
            info!(
                "kept {} of {} columns, imputed {} cells",
                prep_report.kept.len(),
                prep_report.kept.len() + prep_report.dropped_missing.len() + prep_report.dropped_listed.len(),
                partial.missing_cells()
            );
        }
        Command::Train { input, model, trace, fit } => {
            fit.apply(&mut cfg)?;
            cfg.validate()?;
            let input = need(&input, &cfg.paths.input, "input")?;
            let model_path = need(&model, &cfg.paths.model, "model")?;
            let data = io::read_dataset(&input, &label, DELIMITER)?;
            let fitted = fit_model_traced(&data, &cfg.fit, &cfg.pool).map_err(training_error)?;
            model_file::save(&fitted.model, &model_path)?;
            if let Some(t) = trace {
                io::write_jsonl(&t, &fitted.trace)?;
            }
            let m = &fitted.model.metrics;
            info!(
                "{} cells, validation objective {:.6} (loss {:.6})",
                fitted.model.len(),
                m.objective,
                m.empirical_loss
            );
        }
        Command::Predict { model, input, out } => {
            let model = model_file::load(&need(&model, &cfg.paths.model, "model")?)?;
            let input = need(&input, &cfg.paths.input, "input")?;
            let out = need(&out, &cfg.paths.out, "out")?;
            let (rows, _) = io::read_rows(&input, &model.schema, &label, DELIMITER)?;
            let mut w = io::csv_writer(&out, DELIMITER)?;
            w.write_record(["row", "cell", "probability"]).map_err(|e| AppError::format(&out, e))?;
            for (i, x) in rows.iter().enumerate() {
                let cell = model.locate(x)?;
                let p = model.cells[cell].predictor.predict_proba(x)?;
                w.write_record([i.to_string(), cell.to_string(), p.to_string()])
                    .map_err(|e| AppError::format(&out, e))?;
            }
            w.flush().map_err(|e| AppError::io(&out, e))?;
        }
        Command::Evaluate { model, input, out, confidence_levels, features } => {
            if let Some(l) = confidence_levels {
                cfg.report.confidence_levels = l;
            }
            cfg.validate()?;
            let model = model_file::load(&need(&model, &cfg.paths.model, "model")?)?;
            let input = need(&input, &cfg.paths.input, "input")?;
            let out = need(&out, &cfg.paths.out, "out")?;
            let (rows, labels) = io::read_rows(&input, &model.schema, &label, DELIMITER)?;
            let labels = labels.ok_or_else(|| AppError::format(&input, format!("no `{label}` column")))?;
            let data = io::dataset_from(model.schema.clone(), rows, labels, DatasetRole::Test)?;
            let eval = evaluation(&model, &data, &cfg.report.confidence_levels)?;
            io::write_json(&out, &eval)?;
            if let Some(f) = features {
                let fr: FeatureReport = eval::partition_feature_report(&model, &data, 10)?;
                io::write_json(&f, &fr)?;
            }
            info!("accuracy {:.4} on {} rows", eval.accuracy, eval.n);
        }
        Command::Benchmark { input, test, out, confidence_levels, fit } => {
            fit.apply(&mut cfg)?;
            if let Some(l) = confidence_levels {
                cfg.report.confidence_levels = l;
            }
            cfg.validate()?;
            let (train, test_data, files) = load_pair(&cfg, &input, &test, &label)?;
            let out = need(&out, &cfg.paths.out, "out")?;
            fs::create_dir_all(&out).map_err(|e| AppError::io(&out, e))?;
            let baselines = cfg.report.baseline_set()?;
            let bench = eval::benchmark_report(
                &train,
                &test_data,
                &cfg.fit,
                &cfg.pool,
                &baselines,
                &cfg.report.confidence_levels,
            )?;
            let paths: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
            let meta = RunMeta::new(&bench, &cfg, report::fingerprint(&paths)?)?;
            io::write_text(&out.join("table1.csv"), &report::table1_csv(&bench))?;
            io::write_text(&out.join("gain.csv"), &report::gain_csv(&bench))?;
            let reports = bench.algorithms.iter().filter_map(|a| a.report.as_ref());
            io::write_text(&out.join("calibration.csv"), &report::calibration_csv(reports))?;
            io::write_json(&out.join("meta.json"), &meta)?;
            for a in bench.algorithms.iter().filter(|a| a.failure.is_some()) {
                log::warn!("{} failed: {}", a.name, a.failure.as_deref().unwrap_or_default());
            }
        }
        Command::Tradeoff { input, test, out, caps, level, fit } => {
            fit.apply(&mut cfg)?;
            if let Some(c) = caps {
                cfg.report.caps = c;
            }
            if let Some(l) = level {
                cfg.report.tradeoff_level = l;
            }
            cfg.validate()?;
            let (train, test_data, _) = load_pair(&cfg, &input, &test, &label)?;
            let out = need(&out, &cfg.paths.out, "out")?;
            let baselines = cfg.report.baseline_set()?;
            let points = eval::tradeoff_curve(
                &train,
                &test_data,
                &cfg.fit,
                &cfg.pool,
                &cfg.report.caps,
                &baselines,
                cfg.report.tradeoff_level,
            )
            .map_err(|e| match e {
                hyperpart_core::Error::InvalidArgument(m) => AppError::Config(m),
                e => training_error(e),
            })?;
            io::write_text(&out, &report::curve_csv(&points))?;
        }
        Command::Match { input, out, capacities } => {
            let input = need(&input, &cfg.paths.input, "input")?;
            let out = need(&out, &cfg.paths.out, "out")?;
            let (recipients, donors, matrix) = read_scores(&input, capacities)?;
            let assignment = stable_match(&matrix);
            let mut w = io::csv_writer(&out, DELIMITER)?;
            w.write_record(["recipient", "donor"]).map_err(|e| AppError::format(&out, e))?;
            for (r, d) in recipients.iter().zip(&assignment) {
                let d = d.map(|d| donors[d].as_str()).unwrap_or("");
                w.write_record([r.as_str(), d]).map_err(|e| AppError::format(&out, e))?;
            }
            w.flush().map_err(|e| AppError::io(&out, e))?;
            info!("matched {} of {} recipients", assignment.iter().flatten().count(), recipients.len());
        }
    }
    Ok(())
}

/// Training and test data, either from two files or split from one.
fn load_pair(
    cfg: &RunConfig,
    input: &Option<PathBuf>,
    test: &Option<PathBuf>,
    label: &str,
) -> Result<(Dataset, Dataset, Vec<PathBuf>)> {
    let input = need(input, &cfg.paths.input, "input")?;
    let data = io::read_dataset(&input, label, DELIMITER)?;
    match test.clone().or_else(|| cfg.paths.test.clone()) {
        Some(t) => {
            let test_data = io::read_dataset(&t, label, DELIMITER)?;
            if test_data.schema() != data.schema() {
                return Err(AppError::format(&t, "test table columns differ from the training table"));
            }
            Ok((data.with_role(DatasetRole::Train), test_data.with_role(DatasetRole::Test), vec![input, t]))
        }
        None => {
            let (train, test) =
                train_test_split(&data, cfg.report.test_fraction, derive_seed(cfg.fit.seed, STREAM_TEST))
                    .map_err(training_error)?;
            Ok((train, test, vec![input]))
        }
    }
}

fn read_scores(path: &Path, capacities: Option<Vec<usize>>) -> Result<(Vec<String>, Vec<String>, ScoreMatrix)> {
    let table = io::read_table(path, DELIMITER)?;
    let donors: Vec<String> = table.header().iter().skip(1).cloned().collect();
    let mut recipients = Vec::with_capacity(table.rows().len());
    let mut scores = Vec::with_capacity(table.rows().len());
    for (i, row) in table.rows().iter().enumerate() {
        recipients.push(row[0].clone());
        let parsed = row[1..]
            .iter()
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| AppError::format(path, format!("row {}: {e}", i + 1)))?;
        scores.push(parsed);
    }
    let matrix = match capacities {
        Some(c) => ScoreMatrix::with_capacities(scores, c),
        None => ScoreMatrix::new(scores),
    }
    .map_err(|e| AppError::format(path, e))?;
    Ok((recipients, donors, matrix))
}

/// Output of `evaluate`.
#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub n: usize,
    pub accuracy: f64,
    pub loss: String,
    pub mean_loss: f64,
    pub cells: usize,
    /// Test rows routed to each cell.
    pub cell_rows: Vec<usize>,
    pub confidence: ConfidenceReport,
}

pub fn evaluation(model: &hyperpart_core::PartitionModel, data: &Dataset, levels: &[f64]) -> Result<Evaluation> {
    let preds = model.predict_dataset(data)?;
    let labels: Vec<u8> = data.labels().collect();
    let confidence = ConfidenceReport::new(MODEL_COLUMN, &preds, &labels, levels)?;
    let loss = model.config.loss;
    let mut cell_rows = vec![0; model.len()];
    for r in data.instances() {
        cell_rows[model.locate(&r.x)?] += 1;
    }
    let total: f64 = preds.iter().zip(&labels).map(|(&p, &y)| loss.pointwise(p, y)).sum();
    Ok(Evaluation {
        n: data.len(),
        accuracy: confidence.accuracy,
        loss: loss.name().to_string(),
        mean_loss: if data.is_empty() { 0.0 } else { total / data.len() as f64 },
        cells: model.len(),
        cell_rows,
        confidence,
    })
}
