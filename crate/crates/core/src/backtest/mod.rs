//! Walk-forward out-of-sample simulation.
//!
//! Weights are optimized on the trailing `N` rows, executed at the close of
//! the last lookback row, held for the next `N` rows, and the process repeats
//! on non-overlapping tiles of the panel.

mod costs;
mod engine;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::{AllocationError, StrategyVariant};
use crate::data::DataError;
use crate::fractal::HurstConfig;
use crate::scalar::Scalar;

pub use self::costs::{commission_for, execute_rebalance, CommissionPlan, Rebalance, Trade};
pub use self::engine::{
    period_return, run_benchmark, run_walk_forward, run_with, BacktestRun, EquityCurve,
    PeriodResult, PeriodReturn,
};

/// Trading days per year; expense ratios accrue as `ratio * days / 252`.
pub const TRADING_DAYS_PER_YEAR: usize = 252;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BacktestError {
    #[error(
        "InsufficientHistory: {rows} rows, at least {required} required for horizon {horizon}"
    )]
    InsufficientHistory {
        rows: usize,
        required: usize,
        horizon: usize,
    },
    #[error("InsufficientCapital: capital {capital} cannot cover commissions of {commission}")]
    InsufficientCapital { capital: f64, commission: f64 },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("UnknownBenchmark: {0} is not in the panel")]
    UnknownBenchmark(String),
    #[error("NonPositiveEquity: capital fell to {capital} after period {period}")]
    NonPositiveEquity { period: usize, capital: f64 },
    #[error("period {period}: {source}")]
    Allocation {
        period: usize,
        source: AllocationError,
    },
    #[error(transparent)]
    Data(#[from] DataError),
}

/// How capital carries from one holding period to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compounding {
    /// Every period starts from `initial_capital` and a flat book.
    #[default]
    FixedCapital,
    /// Each period starts from the previous period's end capital and holdings.
    Reinvest,
}

impl fmt::Display for Compounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Compounding::FixedCapital => "fixed_capital",
            Compounding::Reinvest => "reinvest",
        })
    }
}

impl FromStr for Compounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed_capital" => Ok(Compounding::FixedCapital),
            "reinvest" => Ok(Compounding::Reinvest),
            other => Err(format!("unknown compounding mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BacktestConfig<T> {
    /// Lookback and holding length in trading days.
    pub horizon: usize,
    pub variant: StrategyVariant,
    pub initial_capital: T,
    pub commission: CommissionPlan<T>,
    pub compounding: Compounding,
    pub benchmark: String,
    pub hurst: HurstConfig<T>,
}

impl<T: Scalar> BacktestConfig<T> {
    /// Half-year horizon, $1,000,000 fixed capital, SPY benchmark.
    pub fn new(variant: StrategyVariant) -> Self {
        BacktestConfig {
            horizon: 126,
            variant,
            initial_capital: T::lit(1_000_000.0),
            commission: CommissionPlan::default(),
            compounding: Compounding::FixedCapital,
            benchmark: "SPY".to_string(),
            hurst: HurstConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), BacktestError> {
        if self.horizon < 8 {
            return Err(BacktestError::InvalidConfig(format!(
                "horizon must be at least 8 days, got {}",
                self.horizon
            )));
        }
        if !(self.initial_capital > T::zero() && self.initial_capital.is_finite()) {
            return Err(BacktestError::InvalidConfig(
                "initial capital must be positive".into(),
            ));
        }
        self.commission.validate()?;
        self.hurst
            .validate()
            .map_err(|e| BacktestError::InvalidConfig(e.to_string()))
    }
}
