//! Pointwise losses, the penalized validation objective, and the smallest
//! penalty weight for which the objective bounds the true loss with
//! probability at least `1 - delta`.

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::{Error, Result};

/// Probability clip used by [`LossKind::LogLoss`].
pub const LOG_LOSS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// Misclassification after thresholding at 0.5 (class 1 when `p >= 0.5`).
    #[default]
    ZeroOne,
    LogLoss,
    Brier,
}

impl LossKind {
    #[inline]
    pub fn pointwise(self, p: f64, y: u8) -> f64 {
        match self {
            LossKind::ZeroOne => (predict_class(p) != y) as u8 as f64,
            LossKind::LogLoss => {
                let p = p.clamp(LOG_LOSS_EPS, 1.0 - LOG_LOSS_EPS);
                if y == 1 {
                    -math::ln(p)
                } else {
                    -math::ln(1.0 - p)
                }
            }
            LossKind::Brier => {
                let d = p - y as f64;
                d * d
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LossKind::ZeroOne => "zero_one",
            LossKind::LogLoss => "log_loss",
            LossKind::Brier => "brier",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "zero_one" | "zero-one" | "01" => Some(LossKind::ZeroOne),
            "log_loss" | "log-loss" | "log" => Some(LossKind::LogLoss),
            "brier" => Some(LossKind::Brier),
            _ => None,
        }
    }
}

/// Class decision for a success probability; ties go to class 1.
#[inline]
pub fn predict_class(p: f64) -> u8 {
    (p >= 0.5) as u8
}

/// Logarithm used inside the penalty and the `alpha` bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

/// Base applied to `log M` and to the bound's inner logarithm.
pub const PENALTY_LOG_BASE: LogBase = LogBase::Natural;

fn log(base: LogBase, x: f64) -> f64 {
    match base {
        LogBase::Natural => math::ln(x),
        LogBase::Two => math::ln(x) / core::f64::consts::LN_2,
    }
}

/// `alpha * sqrt(k^2 * log(M) / n)`.
pub fn penalty(k: usize, n: usize, pool_size: usize, alpha: f64) -> Result<f64> {
    if pool_size < 2 {
        return Err(Error::InvalidArgument(format!("penalty needs M >= 2, got {pool_size}")));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("penalty needs k >= 1 and n >= 1".into()));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let k = k as f64;
    Ok(alpha * math::sqrt(k * k * log(PENALTY_LOG_BASE, pool_size as f64) / n as f64))
}

/// Penalized objective over unnormalized per-cell validation loss sums:
/// `sum(cell_losses) / n + alpha * sqrt(k^2 * log(M) / n)`.
pub fn penalized_objective(cell_losses: &[f64], k: usize, n: usize, pool_size: usize, alpha: f64) -> Result<f64> {
    let pen = penalty(k, n, pool_size, alpha)?;
    Ok(cell_losses.iter().sum::<f64>() / n as f64 + pen)
}

/// Smallest `alpha` with `P(d < d_hat) >= 1 - delta` for `k` cells and a pool
/// of `M` learners:
/// `sqrt(1/2 + log(2 / (1 - (1 - delta)^(1/k))) / (2 log M))`.
pub fn min_alpha(delta: f64, k: usize, pool_size: usize) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if pool_size < 2 {
        return Err(Error::InvalidArgument(format!("min_alpha needs M >= 2, got {pool_size}")));
    }
    // 1 - (1 - delta)^(1/k), accurate for small delta
    let tail = -math::expm1(math::ln1p(-delta) / k as f64);
    let inner = log(PENALTY_LOG_BASE, 2.0 / tail) / (2.0 * log(PENALTY_LOG_BASE, pool_size as f64));
    Ok(math::sqrt(0.5 + inner))
}
