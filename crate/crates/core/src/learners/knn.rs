use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::standardization;
use crate::data::Rows;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 5 }
    }
}

/// k-nearest neighbours under standardized Euclidean distance. Predicts
/// `(positives + 1) / (k + 2)` over the neighbours; distance ties go to the
/// earlier training row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub center: Vec<f64>,
    pub scale: Vec<f64>,
    /// Standardized training rows, row-major.
    pub points: Vec<f64>,
    pub labels: Vec<u8>,
}

impl KnnModel {
    pub(crate) fn fit(params: &KnnParams, rows: Rows<'_>, dim: usize) -> Self {
        let (center, scale) = standardization(rows, dim);
        let mut points = Vec::with_capacity(rows.len() * dim);
        for r in rows.iter() {
            points.extend(r.x.iter().zip(center.iter().zip(&scale)).map(|(v, (c, s))| (v - c) / s));
        }
        Self { k: params.k.max(1), center, scale, points, labels: rows.iter().map(|r| r.y).collect() }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let dim = self.center.len();
        let z: Vec<f64> = x.iter().zip(self.center.iter().zip(&self.scale)).map(|(v, (c, s))| (v - c) / s).collect();
        let n = self.labels.len();
        let k = self.k.min(n);
        // bounded max-heap of (distance, index) kept as a sorted vec
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        for i in 0..n {
            let p = &self.points[i * dim..(i + 1) * dim];
            let d: f64 = p.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
            if best.len() == k && d >= best[k - 1].0 {
                continue;
            }
            let pos = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(pos, (d, i));
            best.truncate(k);
        }
        let pos = best.iter().filter(|&&(_, i)| self.labels[i] == 1).count();
        (pos as f64 + 1.0) / (k as f64 + 2.0)
    }
}
