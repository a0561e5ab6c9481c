use alloc::vec::Vec;

use crate::math;
use crate::schema::{Feature, FeatureKind, FeatureSchema, Scaling};
use crate::{Dataset, Error, LabeledInstance, Result};

/// Code of `value` in a categorical feature, or its unknown code.
pub fn encode_category(feature: &Feature, value: &str) -> f64 {
    match feature.categories.iter().position(|c| c == value) {
        Some(code) => code as f64,
        None => {
            log::warn!("unseen category `{value}` in feature `{}`, using the unknown code", feature.name);
            feature.unknown_code() as f64
        }
    }
}

/// Copy of the schema with z-score statistics of every numeric feature,
/// computed on `train`.
pub fn fit_scaling(train: &Dataset) -> FeatureSchema {
    let mut schema = train.schema().clone();
    for (j, f) in schema.features_mut().iter_mut().enumerate() {
        if f.kind == FeatureKind::Numeric {
            let (mean, sd) = math::mean_and_scale(train.instances().iter().map(|r| r.x[j]));
            f.scaling = Some(Scaling { mean, sd });
        }
    }
    schema
}

/// Applies the stored statistics of `schema`: numeric features become
/// z-scores, categorical codes outside the code list become the unknown code.
pub fn encode(data: &Dataset, schema: &FeatureSchema) -> Result<Dataset> {
    if data.dim() != schema.dim() {
        return Err(Error::DimensionMismatch { expected: schema.dim(), got: data.dim() });
    }
    let rows = data.instances().iter().map(|r| LabeledInstance::new(encode_row(schema, &r.x), r.y)).collect();
    Dataset::new(schema.clone(), rows, data.role())
}

pub fn encode_row(schema: &FeatureSchema, x: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(schema.features())
        .map(|(&v, f)| match f.kind {
            FeatureKind::Numeric => match f.scaling {
                Some(s) => (v - s.mean) / s.sd,
                None => v,
            },
            FeatureKind::Categorical => {
                let ok = v >= 0.0 && v < f.categories.len() as f64 && math::floor(v) == v;
                if ok {
                    v
                } else {
                    log::warn!("code {v} outside feature `{}`, using the unknown code", f.name);
                    f.unknown_code() as f64
                }
            }
        })
        .collect()
}
