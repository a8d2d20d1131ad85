//! CSV ingestion of corrosion positions.
//!
//! The file has a single column with header `position_km` and one positive
//! decimal per row, already in inspection order. Out-of-order rows are an
//! error: the order is what the model describes, so it is never repaired.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::inference::RecordSequence;

pub const HEADER: &str = "position_km";

/// `row` is the 1-based data row (the header is not counted).
#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("cannot open {path}: {reason}")]
    MissingFile { path: String, reason: String },
    #[error("read failure: {0}")]
    Read(String),
    #[error("expected header `{HEADER}`, found `{found}`")]
    BadHeader { found: String },
    #[error("row {row}: expected one column, found {columns}")]
    WrongColumnCount { row: usize, columns: usize },
    #[error("row {row}: `{text}` is not a decimal number")]
    MalformedNumber { row: usize, text: String },
    #[error("row {row}: `{text}` is not finite")]
    NonFinite { row: usize, text: String },
    #[error("row {row}: position {value} must be positive")]
    NonPositive { row: usize, value: f64 },
    #[error("row {row}: position {value} repeats the previous row")]
    Duplicate { row: usize, value: f64 },
    #[error("row {row}: position {value} is below the previous position {previous}")]
    NotIncreasing { row: usize, value: f64, previous: f64 },
    #[error("no data rows")]
    Empty,
}

impl IngestError {
    pub fn code(&self) -> &'static str {
        match self {
            IngestError::MissingFile { .. } => "missing_file",
            IngestError::Read(_) => "read_failure",
            IngestError::BadHeader { .. } => "bad_header",
            IngestError::WrongColumnCount { .. } => "wrong_column_count",
            IngestError::MalformedNumber { .. } => "malformed_number",
            IngestError::NonFinite { .. } => "non_finite_value",
            IngestError::NonPositive { .. } => "nonpositive_value",
            IngestError::Duplicate { .. } => "duplicate_value",
            IngestError::NotIncreasing { .. } => "non_increasing_order",
            IngestError::Empty => "insufficient_data",
        }
    }

    pub fn row(&self) -> Option<usize> {
        match self {
            IngestError::WrongColumnCount { row, .. }
            | IngestError::MalformedNumber { row, .. }
            | IngestError::NonFinite { row, .. }
            | IngestError::NonPositive { row, .. }
            | IngestError::Duplicate { row, .. }
            | IngestError::NotIncreasing { row, .. } => Some(*row),
            _ => None,
        }
    }
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<RecordSequence, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| IngestError::MissingFile {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let records = parse_csv(file)?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(match id {
        Some(id) => records.with_pipeline_id(id),
        None => records,
    })
}

pub fn parse_csv<R: Read>(input: R) -> Result<RecordSequence, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| IngestError::Read(e.to_string()))?;
    let found = header.iter().collect::<Vec<_>>().join(",");
    if header.len() != 1 || header.get(0) != Some(HEADER) {
        return Err(IngestError::BadHeader { found });
    }

    let mut positions: Vec<f64> = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| IngestError::Read(e.to_string()))?;
        if row.len() != 1 {
            return Err(IngestError::WrongColumnCount {
                row: row_no,
                columns: row.len(),
            });
        }
        let text = &row[0];
        let value: f64 = text
            .parse()
            .map_err(|_| IngestError::MalformedNumber {
                row: row_no,
                text: text.to_string(),
            })?;
        if !value.is_finite() {
            return Err(IngestError::NonFinite {
                row: row_no,
                text: text.to_string(),
            });
        }
        if value <= 0.0 {
            return Err(IngestError::NonPositive { row: row_no, value });
        }
        if let Some(&previous) = positions.last() {
            if value == previous {
                return Err(IngestError::Duplicate { row: row_no, value });
            }
            if value < previous {
                return Err(IngestError::NotIncreasing {
                    row: row_no,
                    value,
                    previous,
                });
            }
        }
        positions.push(value);
    }
    if positions.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(RecordSequence::new(positions).expect("rows validated above"))
}
