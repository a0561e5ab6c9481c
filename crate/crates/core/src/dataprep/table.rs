use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::schema::{Feature, FeatureKind, FeatureSchema};
use crate::{Error, PartialDataset, Result};

/// Rectangular table of string cells; an empty cell is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        let unique: BTreeSet<&str> = header.iter().map(String::as_str).collect();
        if unique.len() != header.len() {
            return Err(Error::InvalidData("duplicate column names in header".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != header.len()) {
            return Err(Error::InvalidData(format!(
                "row {} has {} cells, header has {}",
                i + 1,
                rows[i].len(),
                header.len()
            )));
        }
        Ok(Self { header, rows })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    fn is_missing(cell: &str) -> bool {
        cell.trim().is_empty()
    }

    pub fn missing_fraction(&self, col: usize) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|r| Self::is_missing(&r[col])).count() as f64 / self.rows.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestOptions {
    pub label_column: String,
    /// Columns missing in at least this fraction of rows are dropped.
    pub missing_threshold: f64,
    /// Columns removed before anything else.
    pub drop_columns: Vec<String>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self { label_column: "label".into(), missing_threshold: 0.10, drop_columns: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnReport {
    pub name: String,
    pub missing_fraction: f64,
    pub kind: Option<FeatureKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows: usize,
    /// Columns dropped by the missingness rule.
    pub dropped_missing: Vec<ColumnReport>,
    /// Columns dropped because the options listed them.
    pub dropped_listed: Vec<String>,
    pub kept: Vec<ColumnReport>,
}

/// Maps a label cell to `{0, 1}`.
pub fn parse_label(cell: &str) -> Option<u8> {
    match cell.trim().to_ascii_lowercase().as_str() {
        "1" | "1.0" | "true" | "yes" => Some(1),
        "0" | "0.0" | "false" | "no" => Some(0),
        _ => None,
    }
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Turns a raw table into a dataset with missing entries. Categorical
/// columns get their distinct values, sorted, as the code list.
pub fn ingest(table: &RawTable, options: &IngestOptions) -> Result<(PartialDataset, IngestReport)> {
    let label_col = table
        .column(&options.label_column)
        .ok_or_else(|| Error::InvalidData(format!("label column `{}` not found", options.label_column)))?;
    let labels = table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            parse_label(&r[label_col])
                .ok_or_else(|| Error::InvalidData(format!("row {}: label `{}` is not binary", i + 1, r[label_col])))
        })
        .collect::<Result<Vec<u8>>>()?;

    let mut report = IngestReport { rows: table.rows().len(), ..IngestReport::default() };
    let mut features = Vec::new();
    let mut columns = Vec::new();
    for (c, name) in table.header().iter().enumerate() {
        if c == label_col {
            continue;
        }
        if options.drop_columns.iter().any(|d| d == name) {
            report.dropped_listed.push(name.clone());
            continue;
        }
        let missing_fraction = table.missing_fraction(c);
        if missing_fraction >= options.missing_threshold {
            report.dropped_missing.push(ColumnReport { name: name.clone(), missing_fraction, kind: None });
            continue;
        }
        let observed = || table.rows().iter().map(|r| r[c].trim()).filter(|v| !v.is_empty());
        let feature = if observed().all(|v| parse_number(v).is_some()) {
            Feature::numeric(name.clone())
        } else {
            let codes: BTreeSet<&str> = observed().collect();
            Feature::categorical(name.clone(), codes.into_iter().map(ToString::to_string).collect())
        };
        report.kept.push(ColumnReport { name: name.clone(), missing_fraction, kind: Some(feature.kind) });
        features.push(feature);
        columns.push(c);
    }
    let schema = FeatureSchema::new(features)?;
    let rows = encode_cells(table, &schema, &columns)?;
    Ok((PartialDataset::new(schema, rows, labels)?, report))
}

fn encode_cells(table: &RawTable, schema: &FeatureSchema, columns: &[usize]) -> Result<Vec<Vec<Option<f64>>>> {
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            columns
                .iter()
                .zip(schema.features())
                .map(|(&c, f)| {
                    let cell = r[c].trim();
                    if cell.is_empty() {
                        return Ok(None);
                    }
                    match f.kind {
                        FeatureKind::Numeric => parse_number(cell).map(Some).ok_or_else(|| {
                            Error::InvalidData(format!(
                                "row {}: `{}` is not a number in column `{}`",
                                i + 1,
                                cell,
                                f.name
                            ))
                        }),
                        FeatureKind::Categorical => Ok(Some(super::encode_category(f, cell))),
                    }
                })
                .collect()
        })
        .collect()
}

/// Feature rows (missing entries as `None`) with the labels, when read.
pub type SchemaRows = (Vec<Vec<Option<f64>>>, Option<Vec<u8>>);

/// Reads a table against an existing schema, matching columns by name.
/// Labels are read when `label_column` is given.
pub fn table_with_schema(table: &RawTable, schema: &FeatureSchema, label_column: Option<&str>) -> Result<SchemaRows> {
    let columns = schema
        .features()
        .iter()
        .map(|f| table.column(&f.name).ok_or_else(|| Error::InvalidData(format!("column `{}` not found", f.name))))
        .collect::<Result<Vec<usize>>>()?;
    let rows = encode_cells(table, schema, &columns)?;
    let labels = match label_column {
        None => None,
        Some(name) => {
            let c = table.column(name).ok_or_else(|| Error::InvalidData(format!("label column `{name}` not found")))?;
            Some(
                table
                    .rows()
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        parse_label(&r[c])
                            .ok_or_else(|| Error::InvalidData(format!("row {}: label `{}` is not binary", i + 1, r[c])))
                    })
                    .collect::<Result<Vec<u8>>>()?,
            )
        }
    };
    Ok((rows, labels))
}
