//! Crate-wide error wrapper with a coarse failure class.

use thiserror::Error;

use crate::allocation::AllocationError;
use crate::backtest::BacktestError;
use crate::data::DataError;
use crate::fractal::FractalError;
use crate::metrics::MetricsError;
use crate::riskmodel::RiskError;

/// Broad category of a failure: bad configuration, bad or insufficient
/// data, or a numerical breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Fractal(#[from] FractalError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error(transparent)]
    Backtest(#[from] BacktestError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Data(_) => ErrorClass::Data,
            Error::Fractal(e) => fractal_class(e),
            Error::Risk(e) => match e {
                RiskError::TooShort { .. } | RiskError::Empty => ErrorClass::Data,
                RiskError::InvalidHurst { .. } | RiskError::InvalidHorizon => ErrorClass::Config,
                _ => ErrorClass::Numeric,
            },
            Error::Allocation(e) => allocation_class(e),
            Error::Backtest(e) => match e {
                BacktestError::InvalidConfig(_) | BacktestError::UnknownBenchmark(_) => {
                    ErrorClass::Config
                }
                BacktestError::InsufficientHistory { .. } | BacktestError::Data(_) => {
                    ErrorClass::Data
                }
                BacktestError::Allocation { source, .. } => allocation_class(source),
                _ => ErrorClass::Numeric,
            },
            Error::Metrics(_) => ErrorClass::Numeric,
        }
    }
}

fn fractal_class(e: &FractalError) -> ErrorClass {
    match e {
        FractalError::InvalidParams { .. } | FractalError::InvalidConfig { .. } => {
            ErrorClass::Config
        }
        FractalError::TooShort { .. } | FractalError::DeltaTooLarge { .. } => ErrorClass::Data,
        _ => ErrorClass::Numeric,
    }
}

fn allocation_class(e: &AllocationError) -> ErrorClass {
    match e {
        AllocationError::WindowLength { .. } | AllocationError::NoPortfolioAssets => {
            ErrorClass::Config
        }
        AllocationError::UnknownTicker { .. } => ErrorClass::Config,
        AllocationError::Hurst { source, .. } => fractal_class(source),
        AllocationError::Risk { .. } => ErrorClass::Data,
        AllocationError::DegenerateVolatility { .. } => ErrorClass::Numeric,
    }
}
