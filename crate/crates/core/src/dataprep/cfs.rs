use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{math, Dataset};

/// Consecutive non-improving expansions after which the search stops.
pub const CFS_STALL_LIMIT: usize = 5;

/// Pearson correlation; 0 when either side is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    if n == 0 {
        return 0.0;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (x[i] - mx, y[i] - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 1e-300 || syy <= 1e-300 {
        return 0.0;
    }
    (sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0)
}

/// `k * mean|r_cf| / sqrt(k + k(k-1) * mean|r_ff|)` for the features in `subset`.
pub fn merit(subset: &[usize], r_cf: &[f64], r_ff: &[Vec<f64>]) -> f64 {
    let k = subset.len();
    if k == 0 {
        return 0.0;
    }
    let cf = subset.iter().map(|&j| r_cf[j].abs()).sum::<f64>() / k as f64;
    let mut ff = 0.0;
    if k > 1 {
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                ff += r_ff[i][j].abs();
            }
        }
        ff /= (k * (k - 1) / 2) as f64;
    }
    let kf = k as f64;
    kf * cf / math::sqrt(kf + kf * (kf - 1.0) * ff)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfsResult {
    /// Selected features in the order they were added.
    pub selected: Vec<usize>,
    /// Merit of the selected set as tracked by the search.
    pub merit: f64,
    /// Feature-label correlations.
    pub r_cf: Vec<f64>,
}

/// Correlations among features and against the label.
pub fn correlations(data: &Dataset) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = data.dim();
    let cols: Vec<Vec<f64>> = (0..dim).map(|j| data.instances().iter().map(|r| r.x[j]).collect()).collect();
    let y: Vec<f64> = data.labels().map(f64::from).collect();
    let r_cf = cols.iter().map(|c| pearson(c, &y)).collect();
    let mut r_ff = vec![vec![1.0; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let r = pearson(&cols[i], &cols[j]);
            r_ff[i][j] = r;
            r_ff[j][i] = r;
        }
    }
    (r_cf, r_ff)
}

/// Forward best-first search over feature subsets maximizing [`merit`].
pub fn cfs_select(data: &Dataset) -> CfsResult {
    let (r_cf, r_ff) = correlations(data);
    let (selected, merit) = best_first(data.dim(), &r_cf, &r_ff);
    CfsResult { selected, merit, r_cf }
}

fn best_first(dim: usize, r_cf: &[f64], r_ff: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let mut open: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), 0.0)];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(Vec::new());
    let mut best: (Vec<usize>, f64) = (Vec::new(), 0.0);
    let mut stall = 0;
    while stall < CFS_STALL_LIMIT && !open.is_empty() {
        // Highest merit first; earliest inserted on ties.
        let mut pick = 0;
        for (i, (_, m)) in open.iter().enumerate() {
            if *m > open[pick].1 {
                pick = i;
            }
        }
        let (subset, _) = open.remove(pick);
        let mut improved = false;
        for j in 0..dim {
            if subset.contains(&j) {
                continue;
            }
            let mut child = subset.clone();
            child.push(j);
            let mut key = child.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let m = merit(&child, r_cf, r_ff);
            if m > best.1 {
                best = (child.clone(), m);
                improved = true;
            }
            open.push((child, m));
        }
        stall = if improved { 0 } else { stall + 1 };
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRank {
    pub index: usize,
    pub r_cf: f64,
    pub selected: bool,
}

/// CFS selection order followed by the unselected features by decreasing
/// `|r_cf|` (lower index on ties).
pub fn rank_features(data: &Dataset) -> (Vec<FeatureRank>, f64) {
    let res = cfs_select(data);
    let mut rest: Vec<usize> = (0..data.dim()).filter(|j| !res.selected.contains(j)).collect();
    rest.sort_by(|&a, &b| res.r_cf[b].abs().total_cmp(&res.r_cf[a].abs()).then(a.cmp(&b)));
    let ranks = res
        .selected
        .iter()
        .map(|&j| (j, true))
        .chain(rest.into_iter().map(|j| (j, false)))
        .map(|(index, selected)| FeatureRank { index, r_cf: res.r_cf[index], selected })
        .collect();
    (ranks, res.merit)
}
