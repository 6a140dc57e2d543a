use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{validate_universe, AssetSpec, DataError, PriceSeries};
use crate::scalar::Scalar;

/// Date-aligned matrix of adjusted closes, stored row-major as
/// `[date × asset]`. Every cell is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AlignedPanel<T> {
    dates: Vec<NaiveDate>,
    assets: Vec<AssetSpec<T>>,
    prices: Vec<T>,
}

impl<T: Scalar> AlignedPanel<T> {
    pub fn new(
        dates: Vec<NaiveDate>,
        assets: Vec<AssetSpec<T>>,
        prices: Vec<T>,
    ) -> Result<Self, DataError> {
        validate_universe(&assets)?;
        if assets.is_empty() {
            return Err(DataError::ShapeMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let expected = dates.len() * assets.len();
        if prices.len() != expected {
            return Err(DataError::ShapeMismatch {
                expected,
                actual: prices.len(),
            });
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DataError::UnsortedDates);
        }
        let width = assets.len();
        if let Some(i) = prices
            .iter()
            .position(|&p| !(p > T::zero() && p.is_finite()))
        {
            return Err(DataError::NonPositiveCell {
                row: i / width,
                column: i % width,
            });
        }
        Ok(AlignedPanel {
            dates,
            assets,
            prices,
        })
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn n_assets(&self) -> usize {
        self.assets.len()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn assets(&self) -> &[AssetSpec<T>] {
        &self.assets
    }

    /// Row-major price storage.
    pub fn prices(&self) -> &[T] {
        &self.prices
    }

    pub fn row(&self, index: usize) -> &[T] {
        let w = self.assets.len();
        &self.prices[index * w..(index + 1) * w]
    }

    pub fn price(&self, row: usize, asset: usize) -> T {
        self.prices[row * self.assets.len() + asset]
    }

    pub fn column(&self, asset: usize) -> Vec<T> {
        (0..self.len()).map(|r| self.price(r, asset)).collect()
    }

    pub fn asset_index(&self, ticker: &str) -> Option<usize> {
        self.assets.iter().position(|a| a.ticker == ticker)
    }

    pub fn tickers(&self) -> Vec<&str> {
        self.assets.iter().map(|a| a.ticker.as_str()).collect()
    }

    /// The panel's columns as standalone price series.
    pub fn to_series(&self) -> Vec<PriceSeries<T>> {
        (0..self.n_assets())
            .map(|j| {
                PriceSeries::new(
                    self.assets[j].ticker.clone(),
                    self.dates.clone(),
                    self.column(j),
                )
                .expect("panel columns satisfy series invariants")
            })
            .collect()
    }

    /// Contiguous sub-panel of `length` rows ending at `end_index` (inclusive).
    pub fn slice_window(&self, end_index: usize, length: usize) -> Result<Self, DataError> {
        let out_of_range = DataError::OutOfRange {
            end_index,
            length,
            available: self.len(),
        };
        if length == 0 || end_index >= self.len() || length > end_index + 1 {
            return Err(out_of_range);
        }
        let start = end_index + 1 - length;
        let w = self.assets.len();
        Ok(AlignedPanel {
            dates: self.dates[start..=end_index].to_vec(),
            assets: self.assets.clone(),
            prices: self.prices[start * w..(end_index + 1) * w].to_vec(),
        })
    }
}

/// Aligns price series on the intersection of their dates. The panel's
/// asset order follows `specs`.
pub fn align_panel<T: Scalar>(
    series: &[PriceSeries<T>],
    specs: &[AssetSpec<T>],
) -> Result<AlignedPanel<T>, DataError> {
    validate_universe(specs)?;
    if series.is_empty() {
        return Err(DataError::EmptyIntersection { dates: 0 });
    }
    for s in series {
        if !specs.iter().any(|spec| spec.ticker == s.ticker()) {
            return Err(DataError::TickerMismatch {
                ticker: s.ticker().to_string(),
            });
        }
    }
    let ordered: Vec<&PriceSeries<T>> = specs
        .iter()
        .map(|spec| {
            series
                .iter()
                .find(|s| s.ticker() == spec.ticker)
                .ok_or_else(|| DataError::TickerMismatch {
                    ticker: spec.ticker.clone(),
                })
        })
        .collect::<Result<_, _>>()?;

    let mut common: BTreeSet<NaiveDate> = ordered[0].dates().iter().copied().collect();
    for s in &ordered[1..] {
        let other: BTreeSet<NaiveDate> = s.dates().iter().copied().collect();
        common = common.intersection(&other).copied().collect();
    }
    if common.len() < 2 {
        return Err(DataError::EmptyIntersection {
            dates: common.len(),
        });
    }
    let dates: Vec<NaiveDate> = common.into_iter().collect();
    let mut prices = Vec::with_capacity(dates.len() * ordered.len());
    for date in &dates {
        for s in &ordered {
            let idx = s
                .dates()
                .binary_search(date)
                .expect("date present in every series");
            prices.push(s.closes()[idx]);
        }
    }
    AlignedPanel::new(dates, specs.to_vec(), prices)
}
