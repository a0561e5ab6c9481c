use alloc::format;
use alloc::vec::Vec;

use crate::schema::FeatureKind;
use crate::{math, par, Dataset, DatasetRole, Error, LabeledInstance, PartialDataset, Result};

pub const DEFAULT_IMPUTE_K: usize = 10;

/// Fills missing entries from the `k` nearest rows that observe the feature.
///
/// Distance between two rows is the root mean squared difference of their
/// z-scored values over the features both observe; rows sharing no observed
/// feature are not neighbors. Numeric features take the neighbors' mean,
/// categorical ones their most frequent code (lowest code on ties). Ties in
/// distance go to the lower row index. Without any neighbor the column mean
/// (or mode) is used.
pub fn knn_impute(data: &PartialDataset, k: usize) -> Result<Dataset> {
    if k == 0 {
        return Err(Error::InvalidArgument("imputation needs k >= 1".into()));
    }
    let dim = data.schema.dim();
    let n = data.len();
    let mut stats = Vec::with_capacity(dim);
    for j in 0..dim {
        let observed: Vec<f64> = data.rows.iter().filter_map(|r| r[j]).collect();
        if observed.is_empty() && n > 0 {
            return Err(Error::InvalidData(format!(
                "feature `{}` is missing in every row",
                data.schema.feature(j).name
            )));
        }
        let (mean, sd) = math::mean_and_scale(observed.iter().copied());
        let fallback = match data.schema.feature(j).kind {
            FeatureKind::Numeric => mean,
            FeatureKind::Categorical => mode(observed.iter().copied()),
        };
        stats.push((mean, sd, fallback));
    }
    let z: Vec<Vec<Option<f64>>> = data
        .rows
        .iter()
        .map(|r| r.iter().zip(&stats).map(|(v, &(m, s, _))| v.map(|v| (v - m) / s)).collect())
        .collect();

    let incomplete: Vec<usize> = (0..n).filter(|&i| data.rows[i].iter().any(Option::is_none)).collect();
    let filled = par::map(&incomplete, |&i| {
        let mut dist: Vec<(f64, usize)> = (0..n)
            .filter(|&r| r != i)
            .filter_map(|r| {
                let (mut sum, mut shared) = (0.0, 0usize);
                for (a, b) in z[i].iter().zip(&z[r]) {
                    if let (Some(a), Some(b)) = (a, b) {
                        sum += (a - b) * (a - b);
                        shared += 1;
                    }
                }
                (shared > 0).then(|| (math::sqrt(sum / shared as f64), r))
            })
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut row = data.rows[i].clone();
        for j in 0..dim {
            if row[j].is_some() {
                continue;
            }
            let donors = dist.iter().filter_map(|&(_, r)| data.rows[r][j]).take(k);
            let value = match data.schema.feature(j).kind {
                FeatureKind::Numeric => {
                    let (sum, cnt) = donors.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
                    if cnt > 0 {
                        sum / cnt as f64
                    } else {
                        stats[j].2
                    }
                }
                FeatureKind::Categorical => {
                    let vals: Vec<f64> = donors.collect();
                    if vals.is_empty() {
                        stats[j].2
                    } else {
                        mode(vals.into_iter())
                    }
                }
            };
            row[j] = Some(value);
        }
        row
    });

    let mut rows = data.rows.clone();
    for (i, row) in incomplete.into_iter().zip(filled) {
        rows[i] = row;
    }
    let instances = rows
        .into_iter()
        .zip(&data.labels)
        .map(|(r, &y)| LabeledInstance::new(r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect(), y))
        .collect();
    Dataset::new(data.schema.clone(), instances, DatasetRole::Unsplit)
}

/// Column-mean (or mode) imputation, the usual baseline.
pub fn mean_impute(data: &PartialDataset) -> Result<Dataset> {
    let dim = data.schema.dim();
    let fill: Vec<f64> = (0..dim)
        .map(|j| {
            let observed = data.rows.iter().filter_map(|r| r[j]);
            match data.schema.feature(j).kind {
                FeatureKind::Numeric => math::mean_and_scale(observed).0,
                FeatureKind::Categorical => mode(observed),
            }
        })
        .collect();
    let instances = data
        .rows
        .iter()
        .zip(&data.labels)
        .map(|(r, &y)| LabeledInstance::new(r.iter().zip(&fill).map(|(v, f)| v.unwrap_or(*f)).collect(), y))
        .collect();
    Dataset::new(data.schema.clone(), instances, DatasetRole::Unsplit)
}

/// Most frequent value; the smallest on ties.
fn mode(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    let mut best = (0usize, f64::NAN);
    let mut i = 0;
    while i < v.len() {
        let j = v[i..].iter().position(|&x| x != v[i]).map_or(v.len(), |p| i + p);
        if j - i > best.0 {
            best = (j - i, v[i]);
        }
        i = j;
    }
    best.1
}
