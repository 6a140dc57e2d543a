//! Price histories, asset metadata and the date-aligned price panel.

mod csv;
mod panel;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use self::csv::{load_price_csv, load_price_csv_with, CsvColumns};
pub use self::panel::{align_panel, AlignedPanel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("FileNotFound: {path}")]
    FileNotFound { path: String },
    #[error("could not read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("MissingColumn: `{column}` not found in header")]
    MissingColumn { column: String },
    #[error("MalformedRow: line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("NonPositivePrice: {ticker} on {date}")]
    NonPositivePrice { ticker: String, date: NaiveDate },
    #[error("DuplicateDate: {ticker} has {date} twice")]
    DuplicateDate { ticker: String, date: NaiveDate },
    #[error("TooShort: {ticker} has {rows} rows, at least 2 required")]
    TooShort { ticker: String, rows: usize },
    #[error("UnsortedDates: dates must be strictly increasing")]
    UnsortedDates,
    #[error("EmptyIntersection: aligned panel would have {dates} dates, at least 2 required")]
    EmptyIntersection { dates: usize },
    #[error("TickerMismatch: {ticker}")]
    TickerMismatch { ticker: String },
    #[error("DuplicateTicker: {ticker}")]
    DuplicateTicker { ticker: String },
    #[error("EmptyTicker")]
    EmptyTicker,
    #[error("InvalidExpenseRatio: {ticker} has {value}%, expected 0 <= ratio < 100")]
    InvalidExpenseRatio { ticker: String, value: f64 },
    #[error("ShapeMismatch: expected {expected} prices, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("NonPositivePrice: row {row}, column {column}")]
    NonPositiveCell { row: usize, column: usize },
    #[error("OutOfRange: window of {length} rows ending at {end_index} does not fit in {available} rows")]
    OutOfRange {
        end_index: usize,
        length: usize,
        available: usize,
    },
}

/// Whether an asset is traded by the strategies or only tracked as the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    #[default]
    PortfolioAsset,
    Benchmark,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::PortfolioAsset => "portfolio_asset",
            Role::Benchmark => "benchmark",
        })
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "portfolio_asset" => Ok(Role::PortfolioAsset),
            "benchmark" => Ok(Role::Benchmark),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

/// Tradable instrument metadata. `expense_ratio` is an annual percentage
/// (`0.09` means 0.09% per year).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AssetSpec<T> {
    pub ticker: String,
    pub expense_ratio: T,
    pub role: Role,
}

impl<T: Scalar> AssetSpec<T> {
    pub fn new(ticker: impl Into<String>, expense_ratio: T, role: Role) -> Result<Self, DataError> {
        let spec = AssetSpec {
            ticker: ticker.into(),
            expense_ratio,
            role,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.ticker.trim().is_empty() {
            return Err(DataError::EmptyTicker);
        }
        let er = self.expense_ratio;
        if !(er >= T::zero() && er < T::lit(100.0)) {
            return Err(DataError::InvalidExpenseRatio {
                ticker: self.ticker.clone(),
                value: er.as_f64(),
            });
        }
        Ok(())
    }

    pub fn is_portfolio_asset(&self) -> bool {
        self.role == Role::PortfolioAsset
    }
}

/// The four-ETF global allocation universe (equities, long treasuries, real
/// estate, gold) with their published expense ratios. SPY doubles as the
/// benchmark through the backtest configuration.
pub fn default_universe<T: Scalar>() -> Vec<AssetSpec<T>> {
    [("SPY", 0.09), ("TLT", 0.15), ("IYR", 0.43), ("GLD", 0.40)]
        .into_iter()
        .map(|(ticker, er)| AssetSpec {
            ticker: ticker.to_string(),
            expense_ratio: T::lit(er),
            role: Role::PortfolioAsset,
        })
        .collect()
}

/// Checks that tickers are non-empty and unique across a universe.
pub fn validate_universe<T: Scalar>(specs: &[AssetSpec<T>]) -> Result<(), DataError> {
    let mut seen = std::collections::HashSet::new();
    for spec in specs {
        spec.validate()?;
        if !seen.insert(spec.ticker.as_str()) {
            return Err(DataError::DuplicateTicker {
                ticker: spec.ticker.clone(),
            });
        }
    }
    Ok(())
}

/// Adjusted close history of one instrument, sorted by date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PriceSeries<T> {
    ticker: String,
    dates: Vec<NaiveDate>,
    closes: Vec<T>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Builds a series from rows already sorted by date.
    pub fn new(
        ticker: impl Into<String>,
        dates: Vec<NaiveDate>,
        closes: Vec<T>,
    ) -> Result<Self, DataError> {
        let ticker = ticker.into();
        if ticker.trim().is_empty() {
            return Err(DataError::EmptyTicker);
        }
        if dates.len() != closes.len() {
            return Err(DataError::ShapeMismatch {
                expected: dates.len(),
                actual: closes.len(),
            });
        }
        if dates.len() < 2 {
            return Err(DataError::TooShort {
                ticker,
                rows: dates.len(),
            });
        }
        for w in dates.windows(2) {
            if w[0] == w[1] {
                return Err(DataError::DuplicateDate { ticker, date: w[0] });
            }
            if w[0] > w[1] {
                return Err(DataError::UnsortedDates);
            }
        }
        if let Some(i) = closes
            .iter()
            .position(|&p| !(p > T::zero() && p.is_finite()))
        {
            return Err(DataError::NonPositivePrice {
                ticker,
                date: dates[i],
            });
        }
        Ok(PriceSeries {
            ticker,
            dates,
            closes,
        })
    }

    /// Builds a series from unordered `(date, close)` rows, sorting them first.
    pub fn from_rows(
        ticker: impl Into<String>,
        mut rows: Vec<(NaiveDate, T)>,
    ) -> Result<Self, DataError> {
        rows.sort_by_key(|(d, _)| *d);
        let (dates, closes) = rows.into_iter().unzip();
        Self::new(ticker, dates, closes)
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[T] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn expense_ratio_bounds() {
        assert!(AssetSpec::new("SPY", 0.09, Role::PortfolioAsset).is_ok());
        assert!(AssetSpec::new("SPY", 0.0, Role::Benchmark).is_ok());
        assert!(matches!(
            AssetSpec::new("SPY", -0.1, Role::PortfolioAsset),
            Err(DataError::InvalidExpenseRatio { .. })
        ));
        assert!(matches!(
            AssetSpec::new("SPY", 100.0, Role::PortfolioAsset),
            Err(DataError::InvalidExpenseRatio { .. })
        ));
        assert_eq!(
            AssetSpec::new(" ", 0.1, Role::PortfolioAsset),
            Err(DataError::EmptyTicker)
        );
    }

    #[test]
    fn default_universe_matches_published_ratios() {
        let u = default_universe::<f64>();
        let pairs: Vec<_> = u
            .iter()
            .map(|s| (s.ticker.as_str(), s.expense_ratio))
            .collect();
        assert_eq!(
            pairs,
            vec![("SPY", 0.09), ("TLT", 0.15), ("IYR", 0.43), ("GLD", 0.4)]
        );
        validate_universe(&u).unwrap();
    }

    #[test]
    fn duplicate_tickers_rejected() {
        let mut u = default_universe::<f64>();
        u.push(u[0].clone());
        assert!(matches!(
            validate_universe(&u),
            Err(DataError::DuplicateTicker { .. })
        ));
    }

    #[test]
    fn series_invariants() {
        let ok = PriceSeries::new(
            "X",
            vec![d("2016-01-04"), d("2016-01-05")],
            vec![100.0, 101.0],
        );
        assert_eq!(ok.unwrap().len(), 2);
        assert!(matches!(
            PriceSeries::new("X", vec![d("2016-01-04")], vec![100.0]),
            Err(DataError::TooShort { rows: 1, .. })
        ));
        assert!(matches!(
            PriceSeries::new("X", vec![d("2016-01-04"), d("2016-01-04")], vec![1.0, 2.0]),
            Err(DataError::DuplicateDate { .. })
        ));
        assert!(matches!(
            PriceSeries::new("X", vec![d("2016-01-04"), d("2016-01-05")], vec![1.0, 0.0]),
            Err(DataError::NonPositivePrice { .. })
        ));
        let sorted = PriceSeries::from_rows(
            "X",
            vec![(d("2016-01-05"), 101.0), (d("2016-01-04"), 100.0)],
        )
        .unwrap();
        assert_eq!(sorted.closes(), &[100.0, 101.0]);
    }

    #[test]
    fn role_parses() {
        assert_eq!("benchmark".parse::<Role>(), Ok(Role::Benchmark));
        assert_eq!(Role::PortfolioAsset.to_string(), "portfolio_asset");
        assert!("cash".parse::<Role>().is_err());
    }
}
