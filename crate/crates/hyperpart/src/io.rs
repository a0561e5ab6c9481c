//! Delimited-text input and output.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use hyperpart_core::dataprep::{ingest, table_with_schema, IngestOptions, IngestReport, RawTable};
use hyperpart_core::{Dataset, DatasetRole, FeatureKind, FeatureSchema, LabeledInstance, PartialDataset};

use crate::error::{AppError, Result};

/// Sidecar file holding the schema of a prepared table.
pub fn schema_path(table: &Path) -> std::path::PathBuf {
    let mut s = table.as_os_str().to_owned();
    s.push(".schema.json");
    s.into()
}

pub fn read_table(path: &Path, delimiter: u8) -> Result<RawTable> {
    let file = File::open(path).map_err(|e| AppError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().delimiter(delimiter).has_headers(true).from_reader(file);
    let header: Vec<String> =
        reader.headers().map_err(|e| AppError::format(path, e))?.iter().map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| AppError::format(path, e))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    RawTable::new(header, rows).map_err(|e| AppError::format(path, e))
}

/// Reads a raw table and applies the missingness filter and kind inference.
pub fn load_csv(path: &Path, options: &IngestOptions, delimiter: u8) -> Result<(PartialDataset, IngestReport)> {
    let table = read_table(path, delimiter)?;
    ingest(&table, options).map_err(|e| AppError::format(path, e))
}

/// Reads a labeled table into a complete dataset. The schema sidecar is
/// used when present, otherwise kinds are inferred.
pub fn read_dataset(path: &Path, label: &str, delimiter: u8) -> Result<Dataset> {
    let table = read_table(path, delimiter)?;
    let sidecar = schema_path(path);
    let partial = if sidecar.exists() {
        let schema = read_schema(&sidecar)?;
        let (rows, labels) = table_with_schema(&table, &schema, Some(label)).map_err(|e| AppError::format(path, e))?;
        PartialDataset::new(schema, rows, labels.unwrap_or_default())?
    } else {
        let options = IngestOptions {
            label_column: label.to_string(),
            missing_threshold: f64::INFINITY,
            ..IngestOptions::default()
        };
        ingest(&table, &options).map_err(|e| AppError::format(path, e))?.0
    };
    if partial.missing_cells() > 0 {
        return Err(AppError::format(path, "table has missing values; run `prep` first"));
    }
    partial.into_complete().map_err(|e| AppError::format(path, e))
}

/// Feature rows with the labels, when present.
pub type Rows = (Vec<Vec<f64>>, Option<Vec<u8>>);

/// Reads the feature columns of `schema` from a table, with labels when
/// `label` is present as a column.
pub fn read_rows(path: &Path, schema: &FeatureSchema, label: &str, delimiter: u8) -> Result<Rows> {
    let table = read_table(path, delimiter)?;
    let label = table.column(label).map(|_| label);
    let (rows, labels) = table_with_schema(&table, schema, label).map_err(|e| AppError::format(path, e))?;
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.into_iter()
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| AppError::format(path, format!("row {} has missing values", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, labels))
}

fn cell_text(f: &hyperpart_core::Feature, v: f64) -> String {
    match f.kind {
        FeatureKind::Numeric => v.to_string(),
        FeatureKind::Categorical => f.categories.get(v as usize).cloned().unwrap_or_else(|| "<unknown>".into()),
    }
}

/// Writes feature columns (categories by name) and a label column.
pub fn write_dataset(path: &Path, data: &Dataset, label: &str, delimiter: u8) -> Result<()> {
    let mut w = csv_writer(path, delimiter)?;
    let mut header: Vec<&str> = data.schema().names().collect();
    header.push(label);
    w.write_record(&header).map_err(|e| AppError::format(path, e))?;
    for r in data.instances() {
        let mut cells: Vec<String> = r.x.iter().zip(data.schema().features()).map(|(&v, f)| cell_text(f, v)).collect();
        cells.push(r.y.to_string());
        w.write_record(&cells).map_err(|e| AppError::format(path, e))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

/// Writes a dataset with missing entries as empty cells.
pub fn write_partial(path: &Path, data: &PartialDataset, label: &str, delimiter: u8) -> Result<()> {
    let mut w = csv_writer(path, delimiter)?;
    let mut header: Vec<&str> = data.schema.names().collect();
    header.push(label);
    w.write_record(&header).map_err(|e| AppError::format(path, e))?;
    for (r, y) in data.rows.iter().zip(&data.labels) {
        let mut cells: Vec<String> =
            r.iter().zip(data.schema.features()).map(|(v, f)| v.map(|v| cell_text(f, v)).unwrap_or_default()).collect();
        cells.push(y.to_string());
        w.write_record(&cells).map_err(|e| AppError::format(path, e))?;
    }
    w.flush().map_err(|e| AppError::io(path, e))
}

pub fn csv_writer(path: &Path, delimiter: u8) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| AppError::io(path, e))?;
    Ok(csv::WriterBuilder::new().delimiter(delimiter).from_writer(file))
}

pub fn read_schema(path: &Path) -> Result<FeatureSchema> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| AppError::format(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| AppError::format(path, e))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = File::create(path).map_err(|e| AppError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| AppError::io(path, e))
}

/// A dataset from plain rows, for in-memory callers.
pub fn dataset_from(schema: FeatureSchema, rows: Vec<Vec<f64>>, labels: Vec<u8>, role: DatasetRole) -> Result<Dataset> {
    let instances = rows.into_iter().zip(labels).map(|(x, y)| LabeledInstance::new(x, y)).collect();
    Ok(Dataset::new(schema, instances, role)?)
}

/// One JSON document per line.
pub fn write_jsonl<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut text = String::new();
    for item in items {
        text.push_str(&serde_json::to_string(item).map_err(|e| AppError::format(path, e))?);
        text.push('\n');
    }
    write_text(path, &text)
}
