//! Labeled datasets, subsets by index, and datasets with missing cells.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, FeatureSchema, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub x: Vec<f64>,
    /// 1 = success, 0 = failure.
    pub y: u8,
}

impl LabeledInstance {
    pub fn new(x: Vec<f64>, y: u8) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetRole {
    Train,
    Validation,
    Test,
    Unsplit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: FeatureSchema,
    instances: Vec<LabeledInstance>,
    role: DatasetRole,
}

impl Dataset {
    pub fn new(schema: FeatureSchema, instances: Vec<LabeledInstance>, role: DatasetRole) -> Result<Self> {
        for (i, inst) in instances.iter().enumerate() {
            schema.check_row(&inst.x).map_err(|e| match e {
                Error::DimensionMismatch { .. } => e,
                other => Error::InvalidData(format!("row {i}: {other}")),
            })?;
            if inst.y > 1 {
                return Err(Error::InvalidData(format!("row {i}: label {} is not binary", inst.y)));
            }
        }
        Ok(Self { schema, instances, role })
    }

    /// Builds an all-numeric dataset from rows and labels.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidArgument("rows and labels differ in length".into()));
        }
        let dim = rows.first().map(|r| r.len()).unwrap_or(1);
        let schema = FeatureSchema::anonymous(dim.max(1))?;
        let instances = rows.into_iter().zip(labels).map(|(x, y)| LabeledInstance::new(x, y)).collect();
        Self::new(schema, instances, DatasetRole::Unsplit)
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn instances(&self) -> &[LabeledInstance] {
        &self.instances
    }

    pub fn role(&self) -> DatasetRole {
        self.role
    }

    pub fn with_role(mut self, role: DatasetRole) -> Self {
        self.role = role;
        self
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.schema.dim()
    }

    pub fn labels(&self) -> impl Iterator<Item = u8> + '_ {
        self.instances.iter().map(|i| i.y)
    }

    pub fn positives(&self) -> usize {
        self.instances.iter().filter(|i| i.y == 1).count()
    }

    /// Copy of the rows at `idx`, in that order.
    pub fn subset(&self, idx: &[usize], role: DatasetRole) -> Self {
        Self { schema: self.schema.clone(), instances: idx.iter().map(|&i| self.instances[i].clone()).collect(), role }
    }

    pub fn into_parts(self) -> (FeatureSchema, Vec<LabeledInstance>, DatasetRole) {
        (self.schema, self.instances, self.role)
    }
}

/// A dataset whose feature cells may be missing. Labels are always present.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDataset {
    pub schema: FeatureSchema,
    pub rows: Vec<Vec<Option<f64>>>,
    pub labels: Vec<u8>,
}

impl PartialDataset {
    pub fn new(schema: FeatureSchema, rows: Vec<Vec<Option<f64>>>, labels: Vec<u8>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::InvalidArgument("rows and labels differ in length".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != schema.dim() {
                return Err(Error::DimensionMismatch { expected: schema.dim(), got: r.len() });
            }
            if labels[i] > 1 {
                return Err(Error::InvalidData(format!("row {i}: label is not binary")));
            }
        }
        Ok(Self { schema, rows, labels })
    }

    pub fn from_dataset(ds: &Dataset) -> Self {
        Self {
            schema: ds.schema().clone(),
            rows: ds.instances().iter().map(|i| i.x.iter().map(|&v| Some(v)).collect()).collect(),
            labels: ds.labels().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn missing_cells(&self) -> usize {
        self.rows.iter().flatten().filter(|v| v.is_none()).count()
    }

    /// Fraction of missing cells in column `j`.
    pub fn missing_fraction(&self, j: usize) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| r[j].is_none()).count() as f64 / self.rows.len() as f64
    }

    /// Converts to a [`Dataset`], failing if any cell is missing.
    pub fn into_complete(self) -> Result<Dataset> {
        let mut instances = Vec::with_capacity(self.rows.len());
        for (i, (row, y)) in self.rows.into_iter().zip(self.labels).enumerate() {
            let x = row
                .into_iter()
                .enumerate()
                .map(|(j, v)| v.ok_or_else(|| Error::InvalidData(format!("row {i}, column {j} is missing"))))
                .collect::<Result<Vec<_>>>()?;
            instances.push(LabeledInstance::new(x, y));
        }
        Dataset::new(self.schema, instances, DatasetRole::Unsplit)
    }
}

/// Borrowed view of some rows of a dataset.
#[derive(Debug, Clone, Copy)]
pub struct Rows<'a> {
    data: &'a [LabeledInstance],
    idx: Option<&'a [usize]>,
}

impl<'a> Rows<'a> {
    pub fn all(data: &'a [LabeledInstance]) -> Self {
        Self { data, idx: None }
    }

    pub fn indexed(data: &'a [LabeledInstance], idx: &'a [usize]) -> Self {
        Self { data, idx: Some(idx) }
    }

    pub fn len(&self) -> usize {
        self.idx.map_or(self.data.len(), |i| i.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &'a LabeledInstance {
        match self.idx {
            Some(idx) => &self.data[idx[i]],
            None => &self.data[i],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &'a LabeledInstance> + Clone + 'a {
        let rows = *self;
        (0..self.len()).map(move |i| rows.get(i))
    }

    pub fn positives(&self) -> usize {
        self.iter().filter(|r| r.y == 1).count()
    }
}

impl<'a> From<&'a Dataset> for Rows<'a> {
    fn from(ds: &'a Dataset) -> Self {
        Rows::all(ds.instances())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_non_binary_labels() {
        assert!(Dataset::from_rows(vec![vec![1.0]], vec![2]).is_err());
        assert!(Dataset::from_rows(vec![vec![1.0], vec![1.0, 2.0]], vec![0, 1]).is_err());
    }

    #[test]
    fn partial_to_complete() {
        let schema = FeatureSchema::anonymous(2).unwrap();
        let p = PartialDataset::new(schema.clone(), vec![vec![Some(1.0), None]], vec![1]).unwrap();
        assert_eq!(p.missing_cells(), 1);
        assert!((p.missing_fraction(1) - 1.0).abs() < 1e-15);
        assert!(p.into_complete().is_err());
        let q = PartialDataset::new(schema, vec![vec![Some(1.0), Some(2.0)]], vec![1]).unwrap();
        assert_eq!(q.into_complete().unwrap().len(), 1);
    }

    #[test]
    fn rows_views_follow_index_order() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 1, 1]).unwrap();
        let idx = [2, 0];
        let r = Rows::indexed(ds.instances(), &idx);
        assert_eq!(r.len(), 2);
        assert_eq!(r.get(0).x[0], 2.0);
        assert_eq!(r.positives(), 1);
    }
}
