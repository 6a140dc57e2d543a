//! Biased risk parity with a fractal volatility model.
//!
//! The crate estimates per-asset Hurst exponents with the minimal-cover
//! method, rescales daily volatility to the investment horizon as
//! `std0 * N^H`, allocates inverse-volatility weights after a trend filter,
//! and evaluates the strategies with a walk-forward backtester that charges
//! commissions and fund expense ratios.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose so that NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod backtest;
pub mod data;
pub mod error;
pub mod fractal;
pub mod metrics;
pub mod riskmodel;
pub mod scalar;
mod stats;

pub use allocation::{compute_weights, StrategyVariant};
pub use backtest::Compounding;
pub use error::{Error, ErrorClass};
pub use scalar::Scalar;

pub type AssetSpec = data::AssetSpec<f64>;
pub type PriceSeries = data::PriceSeries<f64>;
pub type Panel = data::AlignedPanel<f64>;
pub type HurstConfig = fractal::HurstConfig<f64>;
pub type HurstEstimate = fractal::HurstEstimate<f64>;
pub type StableParams = fractal::StableParams<f64>;
pub type ReturnSeries = riskmodel::ReturnSeries<f64>;
pub type RiskEstimate = riskmodel::RiskEstimate<f64>;
pub type PortfolioWeights = allocation::PortfolioWeights<f64>;
pub type CommissionPlan = backtest::CommissionPlan<f64>;
pub type BacktestConfig = backtest::BacktestConfig<f64>;
pub type BacktestRun = backtest::BacktestRun<f64>;
pub type PeriodResult = backtest::PeriodResult<f64>;
pub type EquityCurve = backtest::EquityCurve<f64>;
pub type PerformanceReport = metrics::PerformanceReport<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type Panel = crate::data::AlignedPanel<f32>;
    pub type HurstConfig = crate::fractal::HurstConfig<f32>;
    pub type StableParams = crate::fractal::StableParams<f32>;
    pub type BacktestConfig = crate::backtest::BacktestConfig<f32>;
}
