//! Knobs of the partition search.

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::objective::{min_alpha, LossKind};
use crate::{Error, Result};

/// How the penalty weight is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSpec {
    Fixed(f64),
    /// `min_alpha(delta, k_assumed, M)`.
    FromDelta {
        delta: f64,
        k_assumed: usize,
    },
}

impl AlphaSpec {
    pub fn resolve(&self, pool_size: usize) -> Result<f64> {
        match *self {
            AlphaSpec::Fixed(a) if a >= 0.0 => Ok(a),
            AlphaSpec::Fixed(a) => Err(Error::InvalidConfig(format!("alpha must be >= 0, got {a}"))),
            AlphaSpec::FromDelta { delta, k_assumed } => {
                min_alpha(delta, k_assumed, pool_size).map_err(|e| Error::InvalidConfig(format!("{e}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Maximum number of subcells one refinement step may create (2 or 3).
    pub gamma: usize,
    pub alpha: AlphaSpec,
    pub loss: LossKind,
    /// Minimum training rows per cell.
    pub s_min: usize,
    /// Minimum validation rows per cell.
    pub v_min: usize,
    pub validation_fraction: f64,
    pub seed: u64,
    pub max_leaves: Option<usize>,
    pub max_cuts_per_dim: usize,
    /// A refinement must lower the objective by more than this.
    pub improvement_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            gamma: 2,
            alpha: AlphaSpec::FromDelta { delta: 0.05, k_assumed: 2 },
            loss: LossKind::ZeroOne,
            s_min: 50,
            v_min: 25,
            validation_fraction: 0.25,
            seed: 0,
            max_leaves: None,
            max_cuts_per_dim: 32,
            improvement_tol: 1e-9,
        }
    }
}

impl FitConfig {
    pub fn validate(&self, pool_size: usize) -> Result<f64> {
        if !(2..=3).contains(&self.gamma) {
            return Err(Error::InvalidConfig(format!("gamma must be 2 or 3, got {}", self.gamma)));
        }
        if pool_size < 2 {
            return Err(Error::InvalidConfig(format!("pool needs at least 2 learners, got {pool_size}")));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "validation_fraction must lie in (0, 1), got {}",
                self.validation_fraction
            )));
        }
        if self.s_min == 0 || self.v_min == 0 {
            return Err(Error::InvalidConfig("s_min and v_min must be >= 1".into()));
        }
        if self.max_leaves == Some(0) {
            return Err(Error::InvalidConfig("max_leaves must be >= 1".into()));
        }
        if self.max_cuts_per_dim == 0 {
            return Err(Error::InvalidConfig("max_cuts_per_dim must be >= 1".into()));
        }
        if self.improvement_tol.is_nan() || self.improvement_tol < 0.0 {
            return Err(Error::InvalidConfig("improvement_tol must be >= 0".into()));
        }
        self.alpha.resolve(pool_size)
    }
}
