use serde::{Deserialize, Serialize};

use crate::data::Rows;

/// Predicts the smoothed training success rate everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantModel {
    pub p: f64,
}

impl ConstantModel {
    pub fn fit(rows: Rows<'_>) -> Self {
        let n = rows.len();
        Self { p: (rows.positives() as f64 + 1.0) / (n as f64 + 2.0) }
    }
}
