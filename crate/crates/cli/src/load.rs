//! CSV ingestion with light type sniffing.
//!
//! A column whose every value parses as a finite number is treated as
//! numeric and discretized into equal-frequency bins; anything else is
//! categorical and encoded by first occurrence. Rows containing empty cells
//! are dropped and counted; the target column is found by name and handled
//! like any other column.

use std::fmt;
use std::fs::File;
use std::path::Path;

use relfd_core::data::{discretize_equal_frequency, DataError, Dataset, Labeling};

#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Csv(csv::Error),
    /// The named target column is not in the header.
    MissingTarget { target: String, available: Vec<String> },
    /// A record has a different number of fields than the header.
    Ragged { row: u64 },
    /// No header, or no rows remain after dropping incomplete ones.
    Empty,
    Data(DataError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "{e}"),
            LoadError::Csv(e) => write!(f, "{e}"),
            LoadError::MissingTarget { target, available } => write!(
                f,
                "target column {target:?} not found; available: {}",
                available.join(", ")
            ),
            LoadError::Ragged { row } => write!(f, "row {row} has the wrong number of fields"),
            LoadError::Empty => write!(f, "no usable rows in the input"),
            LoadError::Data(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<std::io::Error> for LoadError {
    fn from(e: std::io::Error) -> LoadError {
        LoadError::Io(e)
    }
}

impl From<DataError> for LoadError {
    fn from(e: DataError) -> LoadError {
        LoadError::Data(e)
    }
}

fn classify_csv_error(e: csv::Error) -> LoadError {
    if let csv::ErrorKind::UnequalLengths { pos, .. } = e.kind() {
        return LoadError::Ragged {
            row: pos.as_ref().map(|p| p.line()).unwrap_or(0),
        };
    }
    LoadError::Csv(e)
}

#[derive(Debug)]
pub struct LoadedData {
    pub dataset: Dataset,
    /// Rows dropped because one or more cells were empty.
    pub dropped_rows: usize,
}

fn encode_column(cells: &[&str], bins: usize) -> Result<Labeling, LoadError> {
    let numbers: Option<Vec<f64>> = cells
        .iter()
        .map(|c| c.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect();
    Ok(match numbers {
        Some(values) => discretize_equal_frequency(&values, bins)?,
        None => Labeling::encode(cells),
    })
}

pub fn load_csv(path: &Path, target: &str, bins: usize) -> Result<LoadedData, LoadError> {
    let file = File::open(path)?;
    let mut reader = csv::Reader::from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(classify_csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() {
        return Err(LoadError::Empty);
    }
    let target_idx = headers
        .iter()
        .position(|h| h == target)
        .ok_or_else(|| LoadError::MissingTarget {
            target: target.to_string(),
            available: headers.clone(),
        })?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut dropped_rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(classify_csv_error)?;
        if record.len() != headers.len() {
            return Err(LoadError::Ragged {
                row: record.position().map(|p| p.line()).unwrap_or(0),
            });
        }
        if record.iter().any(|c| c.trim().is_empty()) {
            dropped_rows += 1;
            continue;
        }
        rows.push(record.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(LoadError::Empty);
    }
    let column = |idx: usize| -> Result<Labeling, LoadError> {
        let cells: Vec<&str> = rows.iter().map(|r| r[idx].as_str()).collect();
        encode_column(&cells, bins)
    };
    let mut names: Vec<String> = Vec::new();
    let mut columns: Vec<Labeling> = Vec::new();
    for (i, h) in headers.iter().enumerate() {
        if i == target_idx {
            continue;
        }
        names.push(h.clone());
        columns.push(column(i)?);
    }
    let dataset = Dataset::new(names, columns, headers[target_idx].clone(), column(target_idx)?)?;
    Ok(LoadedData {
        dataset,
        dropped_rows,
    })
}
