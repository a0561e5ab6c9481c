use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{greedy_refine, select_unchecked, CellContext, SearchData, TraceRecord};
use crate::cube::{Hypercube, Partition};
use crate::dataprep::stratified_split;
use crate::learners::TrainedPredictor;
use crate::math::{derive_seed, STREAM_FIT, STREAM_SPLIT};
use crate::objective::penalty;
use crate::{Dataset, DatasetRole, Error, FeatureSchema, FitConfig, Pool, Result};

pub const FORMAT_VERSION: u32 = 1;

/// A final cell with its selected, fitted learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedCell {
    pub cell: Hypercube,
    /// Index into the model's pool.
    pub learner_id: usize,
    pub predictor: TrainedPredictor,
    /// Unnormalized validation loss sum over the cell's validation rows.
    pub val_loss: f64,
    pub n_train: usize,
    pub n_val: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    pub n_train: usize,
    pub n_val: usize,
    pub alpha: f64,
    /// Summed validation loss divided by the validation size.
    pub empirical_loss: f64,
    pub penalty: f64,
    pub objective: f64,
}

/// A fitted partition of the feature space with one predictor per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionModel {
    pub format_version: u32,
    pub schema: FeatureSchema,
    pub config: FitConfig,
    pub pool: Pool,
    pub cells: Vec<TrainedCell>,
    pub metrics: ModelMetrics,
}

impl PartitionModel {
    pub fn dim(&self) -> usize {
        self.schema.dim()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing `x`.
    pub fn locate(&self, x: &[f64]) -> Result<usize> {
        self.schema.check_row(x)?;
        self.cells
            .iter()
            .position(|c| c.cell.contains_unchecked(x))
            .ok_or_else(|| Error::Invariant("no cell contains the point".into()))
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let i = self.locate(x)?;
        Ok(self.cells[i].predictor.predict_unchecked(x))
    }

    /// Predictions for every instance of `data`.
    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.instances().iter().map(|r| self.predict(&r.x)).collect()
    }

    pub fn partition(&self) -> Result<Partition> {
        Partition::new(self.cells.iter().map(|c| c.cell.clone()).collect())
    }

    /// Structural checks for a model read from outside.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidData(format!(
                "model format version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let dim = self.dim();
        for (i, c) in self.cells.iter().enumerate() {
            if c.cell.dim() != dim || c.predictor.dim != dim {
                return Err(Error::InvalidData(format!("cell {i} does not match the schema dimension {dim}")));
            }
            if c.learner_id >= self.pool.len() {
                return Err(Error::InvalidData(format!(
                    "cell {i} refers to learner {} outside the pool",
                    c.learner_id
                )));
            }
        }
        self.partition().map(|_| ())
    }
}

/// Model plus everything the search recorded on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: PartitionModel,
    /// Row indices of the input used for training and validation.
    pub train_idx: Vec<usize>,
    pub val_idx: Vec<usize>,
    /// Per final cell, positions into `val_idx` of its validation rows.
    pub cell_val_idx: Vec<Vec<usize>>,
    pub trace: Vec<TraceRecord>,
    pub history: Vec<f64>,
}

/// Splits `data` into training and validation rows, runs the greedy search
/// and reselects every final cell's learner on the frozen partition.
pub fn fit_model(data: &Dataset, config: &FitConfig, pool: &Pool) -> Result<PartitionModel> {
    fit_model_traced(data, config, pool).map(|r| r.model)
}

pub fn fit_model_traced(data: &Dataset, config: &FitConfig, pool: &Pool) -> Result<FitReport> {
    let alpha = config.validate(pool.len())?;
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if data.len() < config.s_min + config.v_min {
        return Err(Error::InsufficientData(format!(
            "{} rows, need at least s_min + v_min = {}",
            data.len(),
            config.s_min + config.v_min
        )));
    }
    let labels: Vec<u8> = data.labels().collect();
    let (train_idx, val_idx) =
        stratified_split(&labels, config.validation_fraction, derive_seed(config.seed, STREAM_SPLIT))?;
    let train = data.subset(&train_idx, DatasetRole::Train);
    let val = data.subset(&val_idx, DatasetRole::Validation);
    let search = SearchData::new(&train, &val)?;
    let fit_seed = derive_seed(config.seed, STREAM_FIT);

    let root = CellContext::root(search, pool, config.loss, fit_seed)?;
    let refinement = greedy_refine(search, root, pool, config, alpha, fit_seed)?;

    let mut cells = Vec::with_capacity(refinement.cells.len());
    let mut cell_val_idx = Vec::with_capacity(refinement.cells.len());
    for (_, ctx) in refinement.cells {
        let sel = select_unchecked(search, &ctx.train_idx, &ctx.val_idx, pool, config.loss, fit_seed)?;
        cells.push(TrainedCell {
            cell: ctx.cell,
            learner_id: sel.learner_id,
            predictor: sel.predictor,
            val_loss: sel.val_loss,
            n_train: ctx.train_idx.len(),
            n_val: ctx.val_idx.len(),
        });
        cell_val_idx.push(ctx.val_idx);
    }
    let n_val = val.len();
    let empirical_loss = cells.iter().map(|c| c.val_loss).sum::<f64>() / n_val as f64;
    let penalty = penalty(cells.len(), n_val, pool.len(), alpha)?;
    let metrics = ModelMetrics {
        n_train: train.len(),
        n_val,
        alpha,
        empirical_loss,
        penalty,
        objective: empirical_loss + penalty,
    };
    let model = PartitionModel {
        format_version: FORMAT_VERSION,
        schema: data.schema().clone(),
        config: config.clone(),
        pool: pool.clone(),
        cells,
        metrics,
    };
    Ok(FitReport { model, train_idx, val_idx, cell_val_idx, trace: refinement.trace, history: refinement.history })
}
