//! Reading a return series from a CSV column.

use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};

use horizon_core::ReturnSeries64;
use thiserror::Error;

/// Which CSV column holds the data: a header name, or failing that a
/// 0-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    Name(String),
    Index(usize),
}

impl ColumnSel {
    /// Digits select by index, anything else by name.
    pub fn parse(text: &str) -> Self {
        match text.parse() {
            Ok(i) => ColumnSel::Index(i),
            Err(_) => ColumnSel::Name(text.to_string()),
        }
    }
}

impl Default for ColumnSel {
    fn default() -> Self {
        ColumnSel::Index(0)
    }
}

/// Row numbers count data rows from 1; the header is not a row.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("input has no header row")]
    MissingHeader,
    #[error("column {0} not found in header [{1}]")]
    UnknownColumn(String, String),
    #[error("row {row}: malformed record: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("row {row}: empty cell in column {column}")]
    EmptyCell { row: usize, column: String },
    #[error("row {row}: non-numeric value {value:?} in column {column}")]
    NonNumeric { row: usize, column: String, value: String },
    #[error("row {row}: non-finite value {value:?} in column {column}")]
    NonFinite { row: usize, column: String, value: String },
    #[error("row {row}: price {value} must be positive to take logs")]
    NonPositivePrice { row: usize, value: f64 },
    #[error("column {column} has no data rows")]
    EmptyColumn { column: String },
    #[error("price series needs at least 2 rows, got {0}")]
    TooFewPrices(usize),
}

/// Reads one column of `path`. With `as_prices`, the column holds prices
/// and the result is the log returns `ln(P_t / P_{t-1})`.
pub fn ingest_returns(path: &Path, column: &ColumnSel, as_prices: bool) -> Result<ReturnSeries64, IngestError> {
    let file = File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => IngestError::MissingFile(path.to_path_buf()),
        _ => IngestError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| malformed(0, e))?
        .clone();
    if headers.is_empty() || headers.iter().all(|h| h.trim().is_empty()) {
        return Err(IngestError::MissingHeader);
    }
    let listed = || headers.iter().collect::<Vec<_>>().join(", ");
    let idx = match column {
        ColumnSel::Name(name) => headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::UnknownColumn(name.clone(), listed()))?,
        ColumnSel::Index(i) if *i < headers.len() => *i,
        ColumnSel::Index(i) => return Err(IngestError::UnknownColumn(i.to_string(), listed())),
    };
    let name = headers[idx].trim().to_string();

    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| malformed(row, e))?;
        let cell = record.get(idx).unwrap_or("").trim();
        if cell.is_empty() {
            return Err(IngestError::EmptyCell { row, column: name });
        }
        let value: f64 = cell.parse().map_err(|_| IngestError::NonNumeric {
            row,
            column: name.clone(),
            value: cell.to_string(),
        })?;
        if !value.is_finite() {
            return Err(IngestError::NonFinite {
                row,
                column: name,
                value: cell.to_string(),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(IngestError::EmptyColumn { column: name });
    }
    if as_prices {
        values = log_returns(&values)?;
    }
    Ok(ReturnSeries64::new(values).expect("values are finite and nonempty"))
}

fn malformed(row: usize, err: csv::Error) -> IngestError {
    let reason = match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
        _ => err.to_string(),
    };
    IngestError::MalformedRow { row, reason }
}

fn log_returns(prices: &[f64]) -> Result<Vec<f64>, IngestError> {
    if prices.len() < 2 {
        return Err(IngestError::TooFewPrices(prices.len()));
    }
    if let Some(i) = prices.iter().position(|&p| p <= 0.0) {
        return Err(IngestError::NonPositivePrice {
            row: i + 1,
            value: prices[i],
        });
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}
