use alloc::collections::VecDeque;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{opt_partition, CellContext, Cut, Decision, GlobalState, SearchData};
use crate::{FitConfig, Pool, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    Split,
    Keep,
    /// Too few rows for any refinement to meet the size minima.
    TooSmall,
    /// The leaf cap was already reached.
    LeafCap,
}

/// One record per cell taken off the worklist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub cell_id: usize,
    pub n_train: usize,
    pub n_val: usize,
    pub learner_id: usize,
    pub candidates: usize,
    pub action: TraceAction,
    pub objective_before: f64,
    pub objective_after: f64,
    pub cuts: Vec<Cut>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    /// Final cells in creation order, with their ids.
    pub cells: Vec<(usize, CellContext)>,
    pub trace: Vec<TraceRecord>,
    /// Global objective of the root, then after every accepted split.
    pub history: Vec<f64>,
    pub state: GlobalState,
}

/// Refines `root` cell by cell in creation order until no cell improves the
/// global objective, the leaf cap is hit, or the remaining cells are too
/// small to split.
pub fn greedy_refine(
    data: SearchData<'_>,
    root: CellContext,
    pool: &Pool,
    config: &FitConfig,
    alpha: f64,
    seed: u64,
) -> Result<Refinement> {
    let mut state = GlobalState { leaves: 1, loss_sum: root.incumbent.val_loss, n_val: data.val.len() };
    let mut history = Vec::from([state.objective(pool.len(), alpha)?]);
    let mut queue = VecDeque::from([(0usize, root)]);
    let mut next_id = 1;
    let mut finals = Vec::new();
    let mut trace = Vec::new();
    let divisible = |c: &CellContext| c.train_idx.len() >= 2 * config.s_min && c.val_idx.len() >= 2 * config.v_min;

    while let Some((id, ctx)) = queue.pop_front() {
        let mut record = TraceRecord {
            cell_id: id,
            n_train: ctx.train_idx.len(),
            n_val: ctx.val_idx.len(),
            learner_id: ctx.incumbent.learner_id,
            candidates: 0,
            action: TraceAction::Keep,
            objective_before: *history.last().unwrap_or(&0.0),
            objective_after: *history.last().unwrap_or(&0.0),
            cuts: Vec::new(),
            children: Vec::new(),
        };
        if config.max_leaves.is_some_and(|cap| state.leaves >= cap) {
            record.action = TraceAction::LeafCap;
        } else if !divisible(&ctx) {
            record.action = TraceAction::TooSmall;
        } else {
            let outcome = opt_partition(data, &ctx, state, pool, config, alpha, seed)?;
            record.candidates = outcome.candidates;
            record.objective_before = outcome.before;
            record.objective_after = outcome.after;
            if let Decision::Split { cuts, children } = outcome.decision {
                state.leaves += children.len() - 1;
                state.loss_sum += children.iter().map(|c| c.incumbent.val_loss).sum::<f64>() - ctx.incumbent.val_loss;
                history.push(outcome.after);
                record.action = TraceAction::Split;
                record.cuts = cuts;
                for child in children {
                    record.children.push(next_id);
                    queue.push_back((next_id, child));
                    next_id += 1;
                }
                trace.push(record);
                continue;
            }
        }
        trace.push(record);
        finals.push((id, ctx));
    }
    finals.sort_by_key(|(id, _)| *id);
    Ok(Refinement { cells: finals, trace, history, state })
}
