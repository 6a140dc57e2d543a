//! Annualized performance statistics over per-period backtest returns.
//!
//! All return inputs are in percent. Annualization assumes 252 trading days
//! per year and a horizon of `n` trading days per period.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backtest::{BacktestRun, Compounding, TRADING_DAYS_PER_YEAR};
use crate::scalar::Scalar;
use crate::stats;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("Empty: no period returns")]
    Empty,
    #[error("TooShort: {len} periods, at least {required} required")]
    TooShort { len: usize, required: usize },
    #[error("InvalidHorizon: horizon must be positive")]
    InvalidHorizon,
    #[error("ZeroVolatility: standard deviation is zero")]
    ZeroVolatility,
    #[error("LengthMismatch: {portfolio} portfolio returns vs {benchmark} benchmark returns")]
    LengthMismatch { portfolio: usize, benchmark: usize },
    #[error("DegenerateBenchmark: benchmark returns have zero variance")]
    DegenerateBenchmark,
    #[error("ZeroBeta: Treynor ratio undefined for beta = 0")]
    ZeroBeta,
    #[error("InvalidDrawdown: {0}% outside [0, 100]")]
    InvalidDrawdown(f64),
}

fn periods_per_year<T: Scalar>(n: usize) -> Result<T, MetricsError> {
    if n == 0 {
        return Err(MetricsError::InvalidHorizon);
    }
    Ok(T::from_count(TRADING_DAYS_PER_YEAR) / T::from_count(n))
}

/// `mean(period_returns) * 252 / n`.
pub fn annualize_return<T: Scalar>(period_returns: &[T], n: usize) -> Result<T, MetricsError> {
    let m = stats::mean(period_returns).ok_or(MetricsError::Empty)?;
    Ok(m * periods_per_year::<T>(n)?)
}

/// Unbiased standard deviation of period returns times `sqrt(252 / n)`.
pub fn annualize_std<T: Scalar>(period_returns: &[T], n: usize) -> Result<T, MetricsError> {
    let var = stats::sample_variance(period_returns).ok_or(MetricsError::TooShort {
        len: period_returns.len(),
        required: 2,
    })?;
    Ok(var.max(T::zero()).sqrt() * periods_per_year::<T>(n)?.sqrt())
}

/// Sharpe ratio with a zero risk-free rate.
pub fn sharpe<T: Scalar>(annual_return: T, annual_std: T) -> Result<T, MetricsError> {
    sharpe_excess(annual_return, annual_std, T::zero())
}

pub fn sharpe_excess<T: Scalar>(
    annual_return: T,
    annual_std: T,
    risk_free: T,
) -> Result<T, MetricsError> {
    if !(annual_std > T::zero()) {
        return Err(MetricsError::ZeroVolatility);
    }
    Ok((annual_return - risk_free) / annual_std)
}

/// `cov(portfolio, benchmark) / var(benchmark)` with sample conventions.
pub fn beta<T: Scalar>(portfolio: &[T], benchmark: &[T]) -> Result<T, MetricsError> {
    if portfolio.len() != benchmark.len() {
        return Err(MetricsError::LengthMismatch {
            portfolio: portfolio.len(),
            benchmark: benchmark.len(),
        });
    }
    let too_short = MetricsError::TooShort {
        len: portfolio.len(),
        required: 2,
    };
    let var = stats::sample_variance(benchmark).ok_or(too_short.clone())?;
    if !(var > T::zero()) {
        return Err(MetricsError::DegenerateBenchmark);
    }
    let cov = stats::sample_covariance(portfolio, benchmark).ok_or(too_short)?;
    Ok(cov / var)
}

/// Treynor ratio scaled by 0.01, zero risk-free rate.
pub fn treynor<T: Scalar>(annual_return: T, beta_value: T) -> Result<T, MetricsError> {
    treynor_excess(annual_return, beta_value, T::zero())
}

pub fn treynor_excess<T: Scalar>(
    annual_return: T,
    beta_value: T,
    risk_free: T,
) -> Result<T, MetricsError> {
    if beta_value == T::zero() {
        return Err(MetricsError::ZeroBeta);
    }
    Ok((annual_return - risk_free) / beta_value * T::lit(0.01))
}

/// Largest peak-to-trough decline of `values`, in percent of the peak.
pub fn max_drawdown<T: Scalar>(values: &[T]) -> Result<T, MetricsError> {
    if values.len() < 2 {
        return Err(MetricsError::TooShort {
            len: values.len(),
            required: 2,
        });
    }
    let mut peak = values[0];
    let mut worst = T::zero();
    for &v in values {
        peak = peak.max(v);
        worst = worst.max((peak - v) / peak);
    }
    Ok(worst * T::lit(100.0))
}

/// Capital protection: `100 - max_drawdown`.
pub fn capital_protection<T: Scalar>(mdd: T) -> Result<T, MetricsError> {
    if !(mdd >= T::zero() && mdd <= T::lit(100.0)) {
        return Err(MetricsError::InvalidDrawdown(mdd.as_f64()));
    }
    Ok(T::lit(100.0) - mdd)
}

/// Relative improvement of `a` over `b` in percent. For metrics where lower
/// is better (volatility, beta) the sign is flipped.
pub fn improvement<T: Scalar>(a: T, b: T, higher_is_better: bool) -> Option<T> {
    if b == T::zero() {
        return None;
    }
    let rel = (a - b) / b.abs() * T::lit(100.0);
    Some(if higher_is_better { rel } else { -rel })
}

/// One row of a performance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PerformanceReport<T> {
    /// Undefined (null) when the annualized STD is zero or unavailable.
    pub sharpe: Option<T>,
    /// Undefined (null) when beta is zero or unavailable.
    pub treynor_x001: Option<T>,
    pub avg_annual_return: T,
    pub protection: T,
    pub max_drawdown: T,
    /// Drawdown over daily marks, for diagnostics.
    pub max_drawdown_daily: T,
    pub annualized_std: Option<T>,
    pub beta: Option<T>,
    pub periods_used: usize,
    pub mode: Compounding,
    pub horizon: usize,
    pub risk_free_rate: T,
    pub period_returns: Vec<T>,
}

/// Assembles a report for `run`, measuring beta against `benchmark`'s
/// per-period net returns.
pub fn build_report<T: Scalar>(
    run: &BacktestRun<T>,
    benchmark: &BacktestRun<T>,
    horizon: usize,
    risk_free_rate: T,
) -> Result<PerformanceReport<T>, MetricsError> {
    let returns = run.net_returns();
    let bench = benchmark.net_returns();
    if returns.len() != bench.len() {
        return Err(MetricsError::LengthMismatch {
            portfolio: returns.len(),
            benchmark: bench.len(),
        });
    }
    let avg_annual_return = annualize_return(&returns, horizon)?;
    let annualized_std = if returns.len() >= 2 {
        Some(annualize_std(&returns, horizon)?)
    } else {
        None
    };
    let sharpe =
        annualized_std.and_then(|s| sharpe_excess(avg_annual_return, s, risk_free_rate).ok());
    let beta = match beta(&returns, &bench) {
        Ok(b) => Some(b),
        Err(MetricsError::DegenerateBenchmark) | Err(MetricsError::TooShort { .. }) => None,
        Err(e) => return Err(e),
    };
    let treynor_x001 = beta.and_then(|b| treynor_excess(avg_annual_return, b, risk_free_rate).ok());
    let mdd = max_drawdown(&run.equity.values)?;
    let protection = capital_protection(mdd)?;
    let max_drawdown_daily = max_drawdown(&run.daily_equity.values)?;
    Ok(PerformanceReport {
        sharpe,
        treynor_x001,
        avg_annual_return,
        protection,
        max_drawdown: mdd,
        max_drawdown_daily,
        annualized_std,
        beta,
        periods_used: returns.len(),
        mode: run.mode,
        horizon,
        risk_free_rate,
        period_returns: returns,
    })
}

const COLUMNS: [&str; 6] = [
    "Sharpe",
    "Treynor x 0.01",
    "Return, %",
    "Protection, %",
    "STD, %",
    "beta",
];

fn table_cells<T: Scalar>(r: &PerformanceReport<T>) -> [Option<T>; 6] {
    [
        r.sharpe,
        r.treynor_x001,
        Some(r.avg_annual_return),
        Some(r.protection),
        r.annualized_std,
        r.beta,
    ]
}

/// Relative improvement row between two reports, per table column.
pub fn improvement_row<T: Scalar>(
    a: &PerformanceReport<T>,
    b: &PerformanceReport<T>,
) -> [Option<T>; 6] {
    let higher_is_better = [true, true, true, true, false, false];
    let (ca, cb) = (table_cells(a), table_cells(b));
    std::array::from_fn(|i| match (ca[i], cb[i]) {
        (Some(x), Some(y)) => improvement(x, y, higher_is_better[i]),
        _ => None,
    })
}

/// Aligned text table with two-decimal cells; an optional last row holds
/// relative improvements in percent.
pub fn render_table<T: Scalar>(
    rows: &[(String, PerformanceReport<T>)],
    improvement: Option<(String, [Option<T>; 6])>,
) -> String {
    let mut lines: Vec<(String, Vec<String>)> = rows
        .iter()
        .map(|(label, r)| {
            (
                label.clone(),
                table_cells(r).iter().map(|c| cell(*c, 2)).collect(),
            )
        })
        .collect();
    if let Some((label, cells)) = improvement {
        lines.push((label, cells.iter().map(|c| cell(*c, 0)).collect()));
    }
    let label_width = lines.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(8);
    let widths: Vec<usize> = COLUMNS
        .iter()
        .enumerate()
        .map(|(i, h)| {
            lines
                .iter()
                .map(|(_, c)| c[i].len())
                .max()
                .unwrap_or(0)
                .max(h.len())
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:label_width$}", "");
    for (h, w) in COLUMNS.iter().zip(&widths) {
        let _ = write!(out, "  {h:>w$}");
    }
    out.push('\n');
    for (label, cells) in lines {
        let _ = write!(out, "{label:label_width$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    out
}

fn cell<T: Scalar>(v: Option<T>, decimals: usize) -> String {
    match v {
        Some(x) => format!("{:.*}", decimals, x.as_f64()),
        None => "n/a".to_string(),
    }
}
