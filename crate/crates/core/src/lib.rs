//! Supervised partitioning of a feature space into axis-aligned hypercubes,
//! with one base learner chosen per cell by penalized validation loss.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: domain types, the base learner pool, the partition search,
//! data preparation, evaluation metrics and stable matching. File formats,
//! CSV ingestion and the command line live in the companion `hyperpart`
//! crate.
//!
//! The search solves a restricted subproblem per cell: refine the cell into
//! at most `gamma` guillotine subcells, fit every pool learner on each
//! subcell's training rows, score them on its validation rows, and accept the
//! refinement only when the global penalized objective
//!
//! ```text
//! (1/n) * sum_i L_i  +  alpha * sqrt(k^2 * ln(M) / n)
//! ```
//!
//! strictly improves. Cells are processed in creation order until nothing
//! improves, the leaf cap is reached, or cells are too small to split.
//!
//! Enable the `parallel` feature to evaluate candidate cuts on a rayon pool;
//! results do not depend on it.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod config;
pub mod cube;
pub mod data;
pub mod dataprep;
mod error;
pub mod eval;
pub mod learners;
pub mod matching;
pub mod math;
pub mod objective;
mod par;
pub mod partitioner;
pub mod schema;

pub use config::{AlphaSpec, FitConfig};
pub use cube::{Hypercube, Interval, Partition};
pub use data::{Dataset, DatasetRole, LabeledInstance, PartialDataset};
pub use error::{Error, Result};
pub use learners::{LearnerSpec, Pool, TrainedPredictor};
pub use objective::{min_alpha, penalized_objective, LossKind};
pub use partitioner::{fit_model, PartitionModel, TrainedCell};
pub use schema::{Feature, FeatureKind, FeatureSchema};
