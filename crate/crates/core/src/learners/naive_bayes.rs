use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::Rows;
use crate::math;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NaiveBayesParams {
    pub var_floor: f64,
}

impl Default for NaiveBayesParams {
    fn default() -> Self {
        Self { var_floor: 1e-9 }
    }
}

/// Gaussian naive Bayes; index 0 is class 0, index 1 class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub log_prior: [f64; 2],
    pub mean: [Vec<f64>; 2],
    pub var: [Vec<f64>; 2],
}

impl NaiveBayesModel {
    pub(crate) fn fit(params: &NaiveBayesParams, rows: Rows<'_>, dim: usize) -> Self {
        let n = rows.len() as f64;
        let mut counts = [0usize; 2];
        let mut mean = [alloc::vec![0.0; dim], alloc::vec![0.0; dim]];
        for r in rows.iter() {
            let c = r.y as usize;
            counts[c] += 1;
            for (m, v) in mean[c].iter_mut().zip(&r.x) {
                *m += v;
            }
        }
        for c in 0..2 {
            let k = counts[c].max(1) as f64;
            mean[c].iter_mut().for_each(|m| *m /= k);
        }
        let mut var = [alloc::vec![0.0; dim], alloc::vec![0.0; dim]];
        for r in rows.iter() {
            let c = r.y as usize;
            for j in 0..dim {
                let d = r.x[j] - mean[c][j];
                var[c][j] += d * d;
            }
        }
        for c in 0..2 {
            let k = counts[c].max(1) as f64;
            var[c].iter_mut().for_each(|v| *v = (*v / k).max(params.var_floor));
        }
        let log_prior =
            [math::ln((counts[0] as f64 + 1.0) / (n + 2.0)), math::ln((counts[1] as f64 + 1.0) / (n + 2.0))];
        Self { log_prior, mean, var }
    }

    fn log_joint(&self, c: usize, x: &[f64]) -> f64 {
        let mut s = self.log_prior[c];
        for ((v, m), var) in x.iter().zip(&self.mean[c]).zip(&self.var[c]) {
            let d = v - m;
            s -= 0.5 * math::ln(2.0 * core::f64::consts::PI * var) + d * d / (2.0 * var);
        }
        s
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        math::sigmoid(self.log_joint(1, x) - self.log_joint(0, x))
    }
}
