//! Getting data into shape: table ingestion with a missingness filter,
//! k-nearest-neighbor imputation, correlation-based feature selection,
//! splitting, encoding, and synthetic generators with known ground truth.

mod cfs;
mod encode;
mod impute;
mod split;
mod synth;
mod table;

pub use cfs::{cfs_select, correlations, merit, pearson, rank_features, CfsResult, FeatureRank, CFS_STALL_LIMIT};
pub use encode::{encode, encode_category, encode_row, fit_scaling};
pub use impute::{knn_impute, mean_impute, DEFAULT_IMPUTE_K};
pub use split::{stratified_split, temporal_split, temporal_split_indices, train_test_split};
pub use synth::{
    preset_names, synth_generate, true_expected_loss, CellLaw, FeatureDist, Preset, SynthData, SynthSpec, TruthCell,
};
pub use table::{
    ingest, parse_label, table_with_schema, ColumnReport, IngestOptions, IngestReport, RawTable, SchemaRows,
};
