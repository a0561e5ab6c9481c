//! Base learners. The pool learners compete for each cell; the
//! benchmark-only learners (lasso, random forest, AdaBoost) exist for
//! comparison runs and are rejected by [`Pool::new`].
//!
//! Every fitted predictor emits a success probability in `[0, 1]`, and
//! fitting is deterministic given `(spec, rows, seed)`. A training set with
//! a single class yields the smoothed constant `(count + 1) / (n + 2)`
//! whatever the learner.

mod adaboost;
mod constant;
mod forest;
mod knn;
mod logistic;
mod naive_bayes;
mod tree;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use adaboost::{AdaBoostModel, AdaBoostParams};
pub use constant::ConstantModel;
pub use forest::{ForestModel, ForestParams};
pub use knn::{KnnModel, KnnParams};
pub use logistic::{l2_gradient, l2_objective, LassoParams, LinearModel, LogisticParams};
pub use naive_bayes::{NaiveBayesModel, NaiveBayesParams};
pub use tree::{Node, TreeModel, TreeParams};

use crate::data::Rows;
use crate::math::{self, Rng};
use crate::objective::LossKind;
use crate::{Dataset, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum LearnerSpec {
    Constant,
    Logistic(LogisticParams),
    Tree(TreeParams),
    NaiveBayes(NaiveBayesParams),
    Knn(KnnParams),
    LassoLogistic(LassoParams),
    RandomForest(ForestParams),
    #[serde(rename = "adaboost")]
    AdaBoost(AdaBoostParams),
}

impl LearnerSpec {
    pub fn logistic() -> Self {
        LearnerSpec::Logistic(LogisticParams::default())
    }

    pub fn tree() -> Self {
        LearnerSpec::Tree(TreeParams::default())
    }

    pub fn naive_bayes() -> Self {
        LearnerSpec::NaiveBayes(NaiveBayesParams::default())
    }

    pub fn knn() -> Self {
        LearnerSpec::Knn(KnnParams::default())
    }

    pub fn lasso() -> Self {
        LearnerSpec::LassoLogistic(LassoParams::default())
    }

    pub fn random_forest() -> Self {
        LearnerSpec::RandomForest(ForestParams::default())
    }

    pub fn adaboost() -> Self {
        LearnerSpec::AdaBoost(AdaBoostParams::default())
    }

    pub fn id(&self) -> &'static str {
        match self {
            LearnerSpec::Constant => "constant",
            LearnerSpec::Logistic(_) => "logistic",
            LearnerSpec::Tree(_) => "tree",
            LearnerSpec::NaiveBayes(_) => "naive_bayes",
            LearnerSpec::Knn(_) => "knn",
            LearnerSpec::LassoLogistic(_) => "lasso_logistic",
            LearnerSpec::RandomForest(_) => "random_forest",
            LearnerSpec::AdaBoost(_) => "adaboost",
        }
    }

    /// Learner with default hyperparameters for an id.
    pub fn from_id(id: &str) -> Option<Self> {
        Some(match id {
            "constant" => LearnerSpec::Constant,
            "logistic" => Self::logistic(),
            "tree" => Self::tree(),
            "naive_bayes" => Self::naive_bayes(),
            "knn" => Self::knn(),
            "lasso_logistic" => Self::lasso(),
            "random_forest" => Self::random_forest(),
            "adaboost" => Self::adaboost(),
            _ => return None,
        })
    }

    pub fn benchmark_only(&self) -> bool {
        matches!(self, LearnerSpec::LassoLogistic(_) | LearnerSpec::RandomForest(_) | LearnerSpec::AdaBoost(_))
    }
}

/// The ordered list of pool learners; the order is the tie-break.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<LearnerSpec>", into = "Vec<LearnerSpec>")]
pub struct Pool {
    specs: Vec<LearnerSpec>,
}

impl Pool {
    pub fn new(specs: Vec<LearnerSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidConfig("learner pool is empty".into()));
        }
        if let Some(s) = specs.iter().find(|s| s.benchmark_only()) {
            return Err(Error::InvalidConfig(format!("`{}` is benchmark-only and cannot join the pool", s.id())));
        }
        Ok(Self { specs })
    }

    /// constant, logistic, tree, naive_bayes, knn.
    pub fn standard() -> Self {
        Self {
            specs: alloc::vec![
                LearnerSpec::Constant,
                LearnerSpec::logistic(),
                LearnerSpec::tree(),
                LearnerSpec::naive_bayes(),
                LearnerSpec::knn(),
            ],
        }
    }

    pub fn from_ids<S: AsRef<str>>(ids: &[S]) -> Result<Self> {
        let specs = ids
            .iter()
            .map(|id| {
                LearnerSpec::from_id(id.as_ref())
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown learner `{}`", id.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(specs)
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[LearnerSpec] {
        &self.specs
    }

    pub fn get(&self, id: usize) -> &LearnerSpec {
        &self.specs[id]
    }

    pub fn ids(&self) -> Vec<String> {
        self.specs.iter().map(|s| String::from(s.id())).collect()
    }
}

impl TryFrom<Vec<LearnerSpec>> for Pool {
    type Error = Error;

    fn try_from(specs: Vec<LearnerSpec>) -> Result<Self> {
        Pool::new(specs)
    }
}

impl From<Pool> for Vec<LearnerSpec> {
    fn from(pool: Pool) -> Self {
        pool.specs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedParams {
    Constant(ConstantModel),
    Linear(LinearModel),
    Tree(TreeModel),
    NaiveBayes(NaiveBayesModel),
    Knn(KnnModel),
    Forest(ForestModel),
    #[serde(rename = "adaboost")]
    AdaBoost(AdaBoostModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedPredictor {
    pub spec: LearnerSpec,
    pub dim: usize,
    pub params: FittedParams,
}

impl TrainedPredictor {
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.predict_unchecked(x))
    }

    /// Probability for a row already known to have `dim` entries.
    pub fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let p = match &self.params {
            FittedParams::Constant(m) => m.p,
            FittedParams::Linear(m) => m.predict(x),
            FittedParams::Tree(m) => m.predict(x),
            FittedParams::NaiveBayes(m) => m.predict(x),
            FittedParams::Knn(m) => m.predict(x),
            FittedParams::Forest(m) => m.predict(x),
            FittedParams::AdaBoost(m) => m.predict(x),
        };
        if p.is_nan() {
            0.5
        } else {
            p.clamp(0.0, 1.0)
        }
    }
}

/// Fits `spec` on `rows` (each with `dim` features).
pub fn fit_rows(spec: &LearnerSpec, rows: Rows<'_>, dim: usize, seed: u64) -> Result<TrainedPredictor> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let pos = rows.positives();
    let params = if pos == 0 || pos == n || matches!(spec, LearnerSpec::Constant) {
        FittedParams::Constant(ConstantModel::fit(rows))
    } else {
        let mut rng: Rng = math::rng(seed);
        match spec {
            LearnerSpec::Constant => unreachable!(),
            LearnerSpec::Logistic(p) => FittedParams::Linear(logistic::fit_logistic(p, rows, dim)),
            LearnerSpec::LassoLogistic(p) => FittedParams::Linear(logistic::fit_lasso(p, rows, dim, &mut rng)),
            LearnerSpec::Tree(p) => FittedParams::Tree(tree::fit_tree(p, rows, None, dim, Some(&mut rng))),
            LearnerSpec::NaiveBayes(p) => FittedParams::NaiveBayes(naive_bayes::NaiveBayesModel::fit(p, rows, dim)),
            LearnerSpec::Knn(p) => FittedParams::Knn(knn::KnnModel::fit(p, rows, dim)),
            LearnerSpec::RandomForest(p) => FittedParams::Forest(forest::fit_forest(p, rows, dim, &mut rng)),
            LearnerSpec::AdaBoost(p) => FittedParams::AdaBoost(adaboost::fit_adaboost(p, rows, dim)),
        }
    };
    Ok(TrainedPredictor { spec: spec.clone(), dim, params })
}

/// Fits a learner on a whole dataset.
pub fn fit(spec: &LearnerSpec, train: &Dataset, seed: u64) -> Result<TrainedPredictor> {
    fit_rows(spec, Rows::from(train), train.dim(), seed)
}

/// Fits one of the benchmark-only learners.
pub fn fit_baseline(spec: &LearnerSpec, train: &Dataset, seed: u64) -> Result<TrainedPredictor> {
    if !spec.benchmark_only() {
        return Err(Error::InvalidArgument(format!("`{}` is a pool learner; use `fit`", spec.id())));
    }
    fit(spec, train, seed)
}

/// Unnormalized loss sum and row count of `predictor` over `rows`.
pub fn eval_loss_rows(predictor: &TrainedPredictor, rows: Rows<'_>, loss: LossKind) -> (f64, usize) {
    let sum = rows.iter().map(|r| loss.pointwise(predictor.predict_unchecked(&r.x), r.y)).sum();
    (sum, rows.len())
}

pub fn eval_loss(predictor: &TrainedPredictor, data: &Dataset, loss: LossKind) -> Result<(f64, usize)> {
    if data.dim() != predictor.dim {
        return Err(Error::DimensionMismatch { expected: predictor.dim, got: data.dim() });
    }
    Ok(eval_loss_rows(predictor, Rows::from(data), loss))
}

/// Laplace-smoothed success rate from (possibly weighted) counts: the
/// positive fraction is rescaled to `n` rows before smoothing.
pub(crate) fn smoothed_rate(pos_fraction: f64, n: usize) -> f64 {
    (pos_fraction * n as f64 + 1.0) / (n as f64 + 2.0)
}

/// Per-feature training mean and scale (scale 1 for constant features).
pub(crate) fn standardization(rows: Rows<'_>, dim: usize) -> (Vec<f64>, Vec<f64>) {
    (0..dim).map(|j| math::mean_and_scale(rows.iter().map(move |r| r.x[j]))).unzip()
}

#[cfg(test)]
mod tests;
