//! Partition search: per-cell learner selection, the bounded refinement
//! subproblem, the greedy recursion and final model assembly.

use alloc::vec::Vec;

use crate::cube::Hypercube;
use crate::data::{LabeledInstance, Rows};
use crate::learners::TrainedPredictor;
use crate::{Dataset, Error, Result};

mod cuts;
mod greedy;
mod model;
mod opt;
mod select;

pub use cuts::{candidate_cuts, thin_midpoints};
pub use greedy::{greedy_refine, Refinement, TraceAction, TraceRecord};
pub use model::{fit_model, fit_model_traced, FitReport, ModelMetrics, PartitionModel, TrainedCell, FORMAT_VERSION};
pub use opt::{opt_partition, Cut, Decision, OptOutcome};
pub use select::{select_best_learner, select_unchecked};

/// Training and validation rows the search indexes into.
#[derive(Debug, Clone, Copy)]
pub struct SearchData<'a> {
    pub train: &'a [LabeledInstance],
    pub val: &'a [LabeledInstance],
    pub dim: usize,
}

impl<'a> SearchData<'a> {
    pub fn new(train: &'a Dataset, val: &'a Dataset) -> Result<Self> {
        if train.dim() != val.dim() {
            return Err(Error::DimensionMismatch { expected: train.dim(), got: val.dim() });
        }
        Ok(Self { train: train.instances(), val: val.instances(), dim: train.dim() })
    }

    pub fn train_rows(&self, idx: &'a [usize]) -> Rows<'a> {
        Rows::indexed(self.train, idx)
    }

    pub fn val_rows(&self, idx: &'a [usize]) -> Rows<'a> {
        Rows::indexed(self.val, idx)
    }
}

/// Best pool learner for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub learner_id: usize,
    pub predictor: TrainedPredictor,
    /// Unnormalized validation loss sum of the chosen learner.
    pub val_loss: f64,
    /// Validation loss sum of every pool learner, in pool order.
    pub candidate_losses: Vec<f64>,
}

/// A cell under consideration together with the rows it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct CellContext {
    pub cell: Hypercube,
    pub train_idx: Vec<usize>,
    pub val_idx: Vec<usize>,
    pub incumbent: Selection,
}

impl CellContext {
    /// The whole space with every row, with its best learner fitted.
    pub fn root(data: SearchData<'_>, pool: &crate::Pool, loss: crate::LossKind, seed: u64) -> Result<Self> {
        let train_idx: Vec<usize> = (0..data.train.len()).collect();
        let val_idx: Vec<usize> = (0..data.val.len()).collect();
        let incumbent = select_unchecked(data, &train_idx, &val_idx, pool, loss, seed)?;
        Ok(Self { cell: Hypercube::full(data.dim), train_idx, val_idx, incumbent })
    }
}

/// Leaf count and loss total of the whole current model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalState {
    pub leaves: usize,
    /// Sum of all leaves' unnormalized validation losses.
    pub loss_sum: f64,
    /// Size of the full validation set.
    pub n_val: usize,
}

impl GlobalState {
    pub fn objective(&self, pool_size: usize, alpha: f64) -> Result<f64> {
        objective_of(self.loss_sum, self.leaves, self.n_val, pool_size, alpha)
    }
}

fn objective_of(loss_sum: f64, k: usize, n: usize, pool_size: usize, alpha: f64) -> Result<f64> {
    Ok(loss_sum / n as f64 + crate::objective::penalty(k, n, pool_size, alpha)?)
}

/// Splits `idx` into rows with `x[dim] < t` and the rest.
pub(crate) fn split_idx(rows: &[LabeledInstance], idx: &[usize], dim: usize, t: f64) -> (Vec<usize>, Vec<usize>) {
    idx.iter().partition(|&&i| rows[i].x[dim] < t)
}
