use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    execute_rebalance, BacktestConfig, BacktestError, Compounding, Trade, TRADING_DAYS_PER_YEAR,
};
use crate::allocation::{compute_weights, AllocationError, PortfolioWeights};
use crate::data::{AlignedPanel, AssetSpec};
use crate::scalar::Scalar;

/// Percent returns of one holding period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PeriodReturn<T> {
    pub gross: T,
    pub expense_drag: T,
    pub commission: T,
    pub net: T,
}

/// Marks `holdings` plus `cash` over `window`, whose first row is the entry
/// close and whose remaining rows are the holding days.
///
/// Expense ratios accrue on each asset's share of starting capital for
/// `window.len() - 1` trading days. `commission` (currency) is charged
/// against starting capital.
pub fn period_return<T: Scalar>(
    holdings: &[i64],
    cash: T,
    window: &AlignedPanel<T>,
    specs: &[AssetSpec<T>],
    commission: T,
) -> PeriodReturn<T> {
    let last = window.len() - 1;
    let hundred = T::lit(100.0);
    let start_value = position_value(holdings, window.row(0)) + cash;
    let end_value = position_value(holdings, window.row(last)) + cash;
    let accrual = T::from_count(last) / T::from_count(TRADING_DAYS_PER_YEAR);
    let expense_drag: T = holdings
        .iter()
        .zip(window.row(0))
        .zip(specs)
        .map(|((&h, &p), spec)| {
            let share = T::lit(h as f64) * p / start_value;
            spec.expense_ratio * accrual * share
        })
        .sum();
    let gross = (end_value - start_value) / start_value * hundred;
    let commission = commission / start_value * hundred;
    PeriodReturn {
        gross,
        expense_drag,
        commission,
        net: gross - expense_drag - commission,
    }
}

fn position_value<T: Scalar>(holdings: &[i64], prices: &[T]) -> T {
    holdings
        .iter()
        .zip(prices)
        .map(|(&h, &p)| T::lit(h as f64) * p)
        .sum()
}

/// One out-of-sample holding period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PeriodResult<T> {
    pub index: usize,
    /// Close at which the rebalance executed.
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    pub weights: PortfolioWeights<T>,
    pub trades: Vec<Trade<T>>,
    pub holdings: Vec<i64>,
    pub start_capital: T,
    /// Percent.
    pub gross_return: T,
    /// Percent of starting capital.
    pub expense_drag: T,
    /// Currency.
    pub commission_cost: T,
    /// Percent.
    pub net_return: T,
    pub end_capital: T,
    /// Net portfolio value at each close of the period, entry close first.
    pub daily_values: Vec<T>,
}

/// Capital after each period, starting from the initial capital.
///
/// In fixed-capital mode profits are withdrawn and losses topped up each
/// period, so the curve is `initial * (1 + Σ net / 100)`; in reinvest mode it
/// chains end capitals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EquityCurve<T> {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<T>,
}

impl<T: Scalar> EquityCurve<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<T> {
        self.values.last().copied()
    }

    fn from_periods(
        periods: &[PeriodResult<T>],
        initial: T,
        mode: Compounding,
    ) -> Result<Self, BacktestError> {
        let mut dates = vec![periods[0].start_date];
        let mut values = vec![initial];
        let mut level = initial;
        for p in periods {
            level = match mode {
                Compounding::FixedCapital => level + (p.end_capital - p.start_capital),
                Compounding::Reinvest => p.end_capital,
            };
            if !(level > T::zero()) {
                return Err(BacktestError::NonPositiveEquity {
                    period: p.index,
                    capital: level.as_f64(),
                });
            }
            dates.push(p.end_date);
            values.push(level);
        }
        Ok(EquityCurve { dates, values })
    }

    fn daily_from_periods(periods: &[PeriodResult<T>], initial: T, mode: Compounding) -> Self {
        let mut dates = vec![periods[0].start_date];
        let mut values = vec![initial];
        let mut offset = T::zero();
        for p in periods {
            let shift = match mode {
                Compounding::FixedCapital => offset,
                Compounding::Reinvest => T::zero(),
            };
            let n = p.daily_values.len();
            for v in &p.daily_values[1..] {
                values.push(*v + shift);
            }
            dates.extend(std::iter::repeat_n(p.end_date, n - 1));
            offset += p.end_capital - p.start_capital;
        }
        EquityCurve { dates, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BacktestRun<T> {
    pub mode: Compounding,
    pub periods: Vec<PeriodResult<T>>,
    pub equity: EquityCurve<T>,
    /// Daily-marked equity. Dates repeat the period end date; use
    /// `period.daily_values` when calendar alignment matters.
    pub daily_equity: EquityCurve<T>,
}

impl<T: Scalar> BacktestRun<T> {
    /// Builds the period-end and daily equity curves from finished periods.
    pub fn assemble(
        periods: Vec<PeriodResult<T>>,
        initial_capital: T,
        mode: Compounding,
    ) -> Result<Self, BacktestError> {
        if periods.is_empty() {
            return Err(BacktestError::InvalidConfig(
                "no periods to assemble".into(),
            ));
        }
        let equity = EquityCurve::from_periods(&periods, initial_capital, mode)?;
        let daily_equity = EquityCurve::daily_from_periods(&periods, initial_capital, mode);
        Ok(BacktestRun {
            mode,
            periods,
            equity,
            daily_equity,
        })
    }

    pub fn net_returns(&self) -> Vec<T> {
        self.periods.iter().map(|p| p.net_return).collect()
    }
}

/// Runs the configured strategy variant.
pub fn run_walk_forward<T: Scalar>(
    panel: &AlignedPanel<T>,
    config: &BacktestConfig<T>,
) -> Result<BacktestRun<T>, BacktestError> {
    config.validate()?;
    let allocate = |window: &AlignedPanel<T>| {
        compute_weights(window, config.variant, config.horizon, &config.hurst)
    };
    run_with(panel, config, &allocate)
}

/// Runs a buy-and-hold of the configured benchmark through the same engine,
/// costs included.
pub fn run_benchmark<T: Scalar>(
    panel: &AlignedPanel<T>,
    config: &BacktestConfig<T>,
) -> Result<BacktestRun<T>, BacktestError> {
    if panel.asset_index(&config.benchmark).is_none() {
        return Err(BacktestError::UnknownBenchmark(config.benchmark.clone()));
    }
    let tickers: Vec<String> = panel.tickers().into_iter().map(String::from).collect();
    let allocate =
        |_: &AlignedPanel<T>| PortfolioWeights::single(tickers.clone(), &config.benchmark);
    run_with(panel, config, &allocate)
}

/// Walk-forward loop with a caller-supplied allocator.
///
/// Period `k` optimizes on rows `[kN, (k+1)N)`, trades at the close of row
/// `(k+1)N - 1` and marks to the close of row `(k+2)N - 1`. The allocator
/// only ever receives the lookback slice, never later rows.
pub fn run_with<T, F>(
    panel: &AlignedPanel<T>,
    config: &BacktestConfig<T>,
    allocate: &F,
) -> Result<BacktestRun<T>, BacktestError>
where
    T: Scalar,
    F: Fn(&AlignedPanel<T>) -> Result<PortfolioWeights<T>, AllocationError> + Sync,
{
    config.validate()?;
    let n = config.horizon;
    if panel.len() < 2 * n {
        return Err(BacktestError::InsufficientHistory {
            rows: panel.len(),
            required: 2 * n,
            horizon: n,
        });
    }
    let count = panel.len() / n - 1;
    let zero_book = vec![0i64; panel.n_assets()];

    let periods = match config.compounding {
        Compounding::FixedCapital => (0..count)
            .into_par_iter()
            .map(|k| {
                simulate_period(
                    panel,
                    config,
                    allocate,
                    k,
                    config.initial_capital,
                    &zero_book,
                )
            })
            .collect::<Result<Vec<_>, _>>()?,
        Compounding::Reinvest => {
            let mut out: Vec<PeriodResult<T>> = Vec::with_capacity(count);
            let mut capital = config.initial_capital;
            let mut book = zero_book;
            for k in 0..count {
                let p = simulate_period(panel, config, allocate, k, capital, &book)?;
                if !(p.end_capital > T::zero()) {
                    return Err(BacktestError::NonPositiveEquity {
                        period: k,
                        capital: p.end_capital.as_f64(),
                    });
                }
                capital = p.end_capital;
                book = p.holdings.clone();
                out.push(p);
            }
            out
        }
    };

    BacktestRun::assemble(periods, config.initial_capital, config.compounding)
}

fn simulate_period<T, F>(
    panel: &AlignedPanel<T>,
    config: &BacktestConfig<T>,
    allocate: &F,
    k: usize,
    capital: T,
    prior: &[i64],
) -> Result<PeriodResult<T>, BacktestError>
where
    T: Scalar,
    F: Fn(&AlignedPanel<T>) -> Result<PortfolioWeights<T>, AllocationError>,
{
    let n = config.horizon;
    let entry = (k + 1) * n - 1;
    let lookback = panel.slice_window(entry, n)?;
    let weights =
        allocate(&lookback).map_err(|source| BacktestError::Allocation { period: k, source })?;
    let rebalance = execute_rebalance(
        &weights,
        capital,
        panel.row(entry),
        &config.commission,
        prior,
    )?;
    let hold = panel.slice_window(entry + n, n + 1)?;
    let ret = period_return(
        &rebalance.holdings,
        rebalance.cash,
        &hold,
        panel.assets(),
        rebalance.commission,
    );
    let end_capital = capital * (T::one() + ret.net / T::lit(100.0));

    let drag_amount = ret.expense_drag / T::lit(100.0) * capital;
    let daily_values = (0..hold.len())
        .map(|t| {
            let accrued = drag_amount * T::from_count(t) / T::from_count(n);
            position_value(&rebalance.holdings, hold.row(t)) + rebalance.cash
                - rebalance.commission
                - accrued
        })
        .collect();

    Ok(PeriodResult {
        index: k,
        start_date: panel.dates()[entry],
        end_date: panel.dates()[entry + n],
        weights,
        trades: rebalance.trades,
        holdings: rebalance.holdings,
        start_capital: capital,
        gross_return: ret.gross,
        expense_drag: ret.expense_drag,
        commission_cost: rebalance.commission,
        net_return: ret.net,
        end_capital,
        daily_values,
    })
}
