use std::io;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{DataError, PriceSeries};
use crate::scalar::Scalar;

/// Header names of the date and adjusted-close columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvColumns {
    pub date_column: String,
    pub price_column: String,
}

impl Default for CsvColumns {
    fn default() -> Self {
        CsvColumns {
            date_column: "date".to_string(),
            price_column: "adj_close".to_string(),
        }
    }
}

/// Loads a price history using the default `date` / `adj_close` columns.
pub fn load_price_csv<T: Scalar>(path: &Path, ticker: &str) -> Result<PriceSeries<T>, DataError> {
    load_price_csv_with(path, ticker, &CsvColumns::default())
}

/// Loads a price history from a headered CSV file with ISO-8601 dates.
///
/// Rows may appear in any order; the result is sorted by date. Any row with
/// an unparseable date or price fails the whole load.
pub fn load_price_csv_with<T: Scalar>(
    path: &Path,
    ticker: &str,
    columns: &CsvColumns,
) -> Result<PriceSeries<T>, DataError> {
    let file = std::fs::File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => DataError::FileNotFound {
            path: path.display().to_string(),
        },
        _ => DataError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        },
    })?;
    read_price_csv(file, ticker, columns).map_err(|e| match e {
        DataError::Io { reason, .. } => DataError::Io {
            path: path.display().to_string(),
            reason,
        },
        other => other,
    })
}

pub(crate) fn read_price_csv<T: Scalar, R: io::Read>(
    reader: R,
    ticker: &str,
    columns: &CsvColumns,
) -> Result<PriceSeries<T>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| DataError::Io {
        path: String::new(),
        reason: e.to_string(),
    })?;
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| DataError::MissingColumn {
                column: name.to_string(),
            })
    };
    let date_idx = find(&columns.date_column)?;
    let price_idx = find(&columns.price_column)?;

    let mut rows: Vec<(NaiveDate, T)> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| DataError::MalformedRow {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |idx: usize| {
            record.get(idx).ok_or_else(|| DataError::MalformedRow {
                line,
                reason: format!("missing field {idx}"),
            })
        };
        let raw_date = field(date_idx)?;
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|e| {
            DataError::MalformedRow {
                line,
                reason: format!("date `{raw_date}`: {e}"),
            }
        })?;
        let raw_price = field(price_idx)?;
        let price: f64 = raw_price.parse().map_err(|_| DataError::MalformedRow {
            line,
            reason: format!("price `{raw_price}` is not a number"),
        })?;
        if !price.is_finite() {
            return Err(DataError::MalformedRow {
                line,
                reason: format!("price `{raw_price}` is not finite"),
            });
        }
        if price <= 0.0 {
            return Err(DataError::NonPositivePrice {
                ticker: ticker.to_string(),
                date,
            });
        }
        rows.push((date, T::lit(price)));
    }
    PriceSeries::from_rows(ticker, rows)
}
