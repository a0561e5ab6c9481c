//! Feature schema: names, kinds, category code lists, and the optional
//! standardization statistics recorded at training time.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    Categorical,
}

/// Mean and standard deviation used to z-standardize a numeric feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
    /// Ordered category labels; the encoded value of a category is its index.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<Scaling>,
}

impl Feature {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: FeatureKind::Numeric, categories: Vec::new(), scaling: None }
    }

    pub fn categorical(name: impl Into<String>, categories: Vec<String>) -> Self {
        Self { name: name.into(), kind: FeatureKind::Categorical, categories, scaling: None }
    }

    /// Code reserved for category values not seen during training.
    pub fn unknown_code(&self) -> usize {
        self.categories.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Feature>", into = "Vec<Feature>")]
pub struct FeatureSchema {
    features: Vec<Feature>,
}

impl FeatureSchema {
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidData("schema needs at least one feature".into()));
        }
        let mut seen = BTreeSet::new();
        for f in &features {
            if !seen.insert(f.name.as_str()) {
                return Err(Error::InvalidData(format!("duplicate feature name `{}`", f.name)));
            }
            if f.kind == FeatureKind::Categorical && f.categories.is_empty() {
                return Err(Error::InvalidData(format!("categorical feature `{}` has no categories", f.name)));
            }
        }
        Ok(Self { features })
    }

    /// All-numeric schema with the given names.
    pub fn numeric<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(names.into_iter().map(Feature::numeric).collect())
    }

    /// All-numeric schema named `x0..x{dim-1}`.
    pub fn anonymous(dim: usize) -> Result<Self> {
        Self::numeric((0..dim).map(|j| format!("x{j}")))
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, j: usize) -> &Feature {
        &self.features[j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.name.as_str())
    }

    pub(crate) fn features_mut(&mut self) -> &mut [Feature] {
        &mut self.features
    }

    /// Schema without feature `j`.
    pub fn without(&self, j: usize) -> Result<Self> {
        let mut features = self.features.clone();
        features.remove(j);
        Self::new(features)
    }

    /// Checks that an encoded row conforms: right length, finite values,
    /// categorical entries are integer codes (the unknown code included).
    pub fn check_row(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        for (f, &v) in self.features.iter().zip(x) {
            if !v.is_finite() {
                return Err(Error::InvalidData(format!("non-finite value for `{}`", f.name)));
            }
            if f.kind == FeatureKind::Categorical
                && (v < 0.0 || v != crate::math::floor(v) || v as usize > f.unknown_code())
            {
                return Err(Error::InvalidData(format!("`{}` = {v} is not a category code", f.name)));
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<Feature>> for FeatureSchema {
    type Error = Error;

    fn try_from(features: Vec<Feature>) -> Result<Self> {
        Self::new(features)
    }
}

impl From<FeatureSchema> for Vec<Feature> {
    fn from(schema: FeatureSchema) -> Self {
        schema.features
    }
}
