use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::tree::{fit_tree, TreeModel, TreeParams};
use crate::data::{LabeledInstance, Rows};
use crate::math::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features tried per split; `None` means `floor(sqrt(D))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, max_depth: 8, min_leaf: 1, max_features: None, bootstrap: true }
    }
}

/// Averages the leaf probabilities of its trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
}

impl ForestModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        if self.trees.is_empty() {
            return 0.5;
        }
        self.trees.iter().map(|t| t.predict(x)).sum::<f64>() / self.trees.len() as f64
    }
}

pub(crate) fn fit_forest(params: &ForestParams, rows: Rows<'_>, dim: usize, rng: &mut Rng) -> ForestModel {
    let mtry =
        params.max_features.unwrap_or_else(|| (math::floor(math::sqrt(dim as f64)) as usize).max(1)).clamp(1, dim);
    let tree_params = TreeParams { max_depth: params.max_depth, min_leaf: params.min_leaf, max_features: Some(mtry) };
    let n = rows.len();
    let owned: Vec<LabeledInstance> = rows.iter().cloned().collect();
    let mut trees = Vec::with_capacity(params.n_trees);
    for _ in 0..params.n_trees {
        let mut tree_rng = math::rng(rng.gen());
        let sample: Vec<usize> =
            if params.bootstrap { (0..n).map(|_| tree_rng.gen_range(0..n)).collect() } else { (0..n).collect() };
        let view = Rows::indexed(&owned, &sample);
        trees.push(fit_tree(&tree_params, view, None, dim, Some(&mut tree_rng)));
    }
    ForestModel { trees }
}
