use alloc::format;
use alloc::vec::Vec;

use super::{SearchData, Selection};
use crate::learners::{eval_loss_rows, fit_rows, LearnerSpec};
use crate::math::derive_seed;
use crate::{par, Error, FitConfig, LossKind, Pool, Result};

/// Fits every pool learner on the cell's training rows and keeps the one
/// with the lowest validation loss sum (lowest pool index on ties).
pub fn select_best_learner(
    data: SearchData<'_>,
    train_idx: &[usize],
    val_idx: &[usize],
    pool: &Pool,
    config: &FitConfig,
    seed: u64,
) -> Result<Selection> {
    if train_idx.len() < config.s_min || val_idx.len() < config.v_min {
        return Err(Error::Unsplittable(format!(
            "cell holds {} training and {} validation rows, needs {} and {}",
            train_idx.len(),
            val_idx.len(),
            config.s_min,
            config.v_min
        )));
    }
    select_unchecked(data, train_idx, val_idx, pool, config.loss, seed)
}

/// [`select_best_learner`] without the size minima.
pub fn select_unchecked(
    data: SearchData<'_>,
    train_idx: &[usize],
    val_idx: &[usize],
    pool: &Pool,
    loss: LossKind,
    seed: u64,
) -> Result<Selection> {
    let jobs: Vec<(usize, &LearnerSpec)> = pool.specs().iter().enumerate().collect();
    let fitted = par::map(&jobs, |&(l, spec)| {
        let predictor = fit_rows(spec, data.train_rows(train_idx), data.dim, derive_seed(seed, l as u64))?;
        let (sum, _) = eval_loss_rows(&predictor, data.val_rows(val_idx), loss);
        Ok((predictor, sum))
    });
    let fitted: Vec<_> = fitted.into_iter().collect::<Result<_>>()?;
    let candidate_losses: Vec<f64> = fitted.iter().map(|(_, s)| *s).collect();
    let mut best = 0;
    for (l, &s) in candidate_losses.iter().enumerate() {
        if s < candidate_losses[best] {
            best = l;
        }
    }
    let (predictor, val_loss) = fitted.into_iter().nth(best).ok_or(Error::Invariant("empty pool".into()))?;
    Ok(Selection { learner_id: best, predictor, val_loss, candidate_losses })
}
