use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::math;
use crate::{Dataset, DatasetRole, Error, FeatureKind, Result};

/// Seeded split of row indices stratified on the label: in each class,
/// `round(fraction * class_size)` rows go to the second set. Both index
/// lists come back sorted.
pub fn stratified_split(labels: &[u8], fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("split fraction must lie in (0, 1), got {fraction}")));
    }
    let mut rng = math::rng(seed);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        let take = math::round(fraction * idx.len() as f64) as usize;
        second.extend_from_slice(&idx[..take]);
        first.extend_from_slice(&idx[take..]);
    }
    if first.is_empty() || second.is_empty() {
        return Err(Error::InsufficientData(format!(
            "splitting {} rows at fraction {fraction} leaves one side empty",
            labels.len()
        )));
    }
    first.sort_unstable();
    second.sort_unstable();
    Ok((first, second))
}

/// Stratified train/test split of a dataset; `test_fraction` of each class
/// goes to the test side.
pub fn train_test_split(data: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let labels: Vec<u8> = data.labels().collect();
    let (train, test) = stratified_split(&labels, test_fraction, seed)?;
    Ok((data.subset(&train, DatasetRole::Train), data.subset(&test, DatasetRole::Test)))
}

/// Row indices with `x[feature] < cutoff` and the rest.
pub fn temporal_split_indices(data: &Dataset, feature: usize, cutoff: f64) -> (Vec<usize>, Vec<usize>) {
    (0..data.len()).partition(|&i| data.instances()[i].x[feature] < cutoff)
}

/// Rows whose `year_feature` is before `cutoff` train, the rest test. The
/// year column is removed from both sides.
pub fn temporal_split(data: &Dataset, year_feature: &str, cutoff: f64) -> Result<(Dataset, Dataset)> {
    let j = data
        .schema()
        .index_of(year_feature)
        .ok_or_else(|| Error::InvalidArgument(format!("no feature named `{year_feature}`")))?;
    if data.schema().feature(j).kind != FeatureKind::Numeric {
        return Err(Error::InvalidArgument(format!("feature `{year_feature}` is not numeric")));
    }
    let (train_idx, test_idx) = temporal_split_indices(data, j, cutoff);
    if train_idx.is_empty() || test_idx.is_empty() {
        return Err(Error::InsufficientData(format!(
            "cutoff {cutoff} leaves {} training and {} test rows",
            train_idx.len(),
            test_idx.len()
        )));
    }
    let schema = data.schema().without(j)?;
    let side = |idx: &[usize], role| {
        let rows = idx
            .iter()
            .map(|&i| {
                let r = &data.instances()[i];
                let mut x = r.x.clone();
                x.remove(j);
                crate::LabeledInstance::new(x, r.y)
            })
            .collect();
        Dataset::new(schema.clone(), rows, role)
    };
    Ok((side(&train_idx, DatasetRole::Train)?, side(&test_idx, DatasetRole::Test)?))
}
