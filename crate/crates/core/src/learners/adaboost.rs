//! Discrete AdaBoost over decision stumps. The additive score
//! `F(x) = sum_t alpha_t h_t(x)` with `h_t` in `{-1, +1}` maps to a
//! probability as `sigmoid(2 F(x))`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::tree::{fit_tree, TreeModel, TreeParams};
use crate::data::Rows;
use crate::math;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdaBoostParams {
    pub rounds: usize,
}

impl Default for AdaBoostParams {
    fn default() -> Self {
        Self { rounds: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostModel {
    pub stumps: Vec<TreeModel>,
    pub alphas: Vec<f64>,
}

#[inline]
fn vote(stump: &TreeModel, x: &[f64]) -> f64 {
    if stump.predict(x) >= 0.5 {
        1.0
    } else {
        -1.0
    }
}

impl AdaBoostModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.stumps.iter().zip(&self.alphas).map(|(s, a)| a * vote(s, x)).sum()
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        math::sigmoid(2.0 * self.score(x))
    }
}

const MIN_ERROR: f64 = 1e-10;

pub(crate) fn fit_adaboost(params: &AdaBoostParams, rows: Rows<'_>, dim: usize) -> AdaBoostModel {
    let n = rows.len();
    let stump_params = TreeParams { max_depth: 1, min_leaf: 1, max_features: None };
    let mut w = alloc::vec![1.0 / n as f64; n];
    let mut stumps = Vec::new();
    let mut alphas = Vec::new();
    for _ in 0..params.rounds {
        let stump = fit_tree(&stump_params, rows, Some(&w), dim, None);
        let votes: Vec<f64> = rows.iter().map(|r| vote(&stump, &r.x)).collect();
        let label = |i: usize| if rows.get(i).y == 1 { 1.0 } else { -1.0 };
        let err: f64 = (0..n).filter(|&i| votes[i] != label(i)).map(|i| w[i]).sum();
        if err >= 0.5 {
            break;
        }
        let e = err.max(MIN_ERROR);
        let alpha = 0.5 * math::ln((1.0 - e) / e);
        stumps.push(stump);
        alphas.push(alpha);
        if err < MIN_ERROR {
            break;
        }
        let mut total = 0.0;
        for i in 0..n {
            w[i] *= math::exp(-alpha * label(i) * votes[i]);
            total += w[i];
        }
        w.iter_mut().for_each(|v| *v /= total);
    }
    AdaBoostModel { stumps, alphas }
}
