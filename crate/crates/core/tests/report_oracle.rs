mod common;

use chrono::Duration;
use common::trading_dates;
use fractal_parity::allocation::PortfolioWeights;
use fractal_parity::backtest::{
    run_benchmark, run_walk_forward, BacktestConfig, BacktestRun, CommissionPlan, Compounding,
    PeriodResult,
};
use fractal_parity::data::{align_panel, load_price_csv, AssetSpec, Role};
use fractal_parity::metrics::build_report;
use fractal_parity::StrategyVariant;
use std::path::PathBuf;

fn period(index: usize, net: f64) -> PeriodResult<f64> {
    let start = trading_dates(1)[0] + Duration::days(182 * index as i64);
    let start_capital = 1e6;
    let end_capital = start_capital * (1.0 + net / 100.0);
    PeriodResult {
        index,
        start_date: start,
        end_date: start + Duration::days(182),
        weights: PortfolioWeights::all_cash(vec!["X".into()]),
        trades: Vec::new(),
        holdings: vec![0],
        start_capital,
        gross_return: net,
        expense_drag: 0.0,
        commission_cost: 0.0,
        net_return: net,
        end_capital,
        daily_values: vec![start_capital, end_capital],
    }
}

fn run(returns: &[f64]) -> BacktestRun<f64> {
    let periods = returns
        .iter()
        .enumerate()
        .map(|(i, &r)| period(i, r))
        .collect();
    BacktestRun::assemble(periods, 1e6, Compounding::FixedCapital).unwrap()
}

const STRATEGY: [f64; 10] = [4.0, -2.5, 6.1, 1.2, -8.0, 3.3, 0.0, 5.5, -1.1, 2.7];
const BENCH: [f64; 10] = [3.0, -4.0, 5.0, 2.0, -10.0, 4.0, 1.0, 3.5, -2.0, 1.5];

#[test]
fn ten_period_report_matches_hand_computation() {
    // Reference values computed independently with Python's statistics module.
    let report = build_report(&run(&STRATEGY), &run(&BENCH), 126, 0.0).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    assert!(close(report.avg_annual_return, 2.24));
    assert!(close(report.annualized_std.unwrap(), 5.9999259254686725));
    assert!(close(report.sharpe.unwrap(), 0.3733379424721859));
    assert!(close(report.beta.unwrap(), 0.9000532197977648));
    assert!(close(report.treynor_x001.unwrap(), 0.024887417218543047));
    assert!(close(report.max_drawdown, 7.352941176470589));
    assert!(close(report.protection, 92.6470588235294));
    assert_eq!(report.protection + report.max_drawdown, 100.0);
    assert_eq!(report.periods_used, 10);
    assert_eq!(report.period_returns, STRATEGY.to_vec());
}

#[test]
fn self_benchmark_identities() {
    let bench = run(&BENCH);
    let report = build_report(&bench, &bench, 126, 0.0).unwrap();
    assert_eq!(report.beta, Some(1.0));
    assert_eq!(
        report.sharpe.unwrap(),
        report.avg_annual_return / report.annualized_std.unwrap()
    );
    assert_eq!(
        report.treynor_x001.unwrap(),
        report.avg_annual_return * 0.01
    );
}

#[test]
fn all_cash_strategy() {
    let cash = run(&[0.0; 10]);
    let report = build_report(&cash, &run(&BENCH), 126, 0.0).unwrap();
    assert_eq!(report.beta, Some(0.0));
    assert_eq!(report.avg_annual_return, 0.0);
    assert_eq!(report.protection, 100.0);
    assert_eq!(report.treynor_x001, None);
    assert_eq!(report.sharpe, None);
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

#[test]
fn constructed_benchmark_crash_gives_protection_64() {
    let specs: Vec<AssetSpec<f64>> = common::TICKERS
        .iter()
        .map(|t| AssetSpec::new(*t, 0.0, Role::PortfolioAsset).unwrap())
        .collect();
    let series: Vec<_> = common::TICKERS
        .iter()
        .map(|t| load_price_csv(&fixture_dir().join(format!("{t}.csv")), t).unwrap())
        .collect();
    let panel = align_panel(&series, &specs).unwrap();
    for mode in [Compounding::FixedCapital, Compounding::Reinvest] {
        let mut cfg = BacktestConfig::new(StrategyVariant::FractalBiased);
        cfg.commission = CommissionPlan::free();
        cfg.compounding = mode;
        let bench = run_benchmark(&panel, &cfg).unwrap();
        // 1e6 buys exactly 10_000 shares at 100 and, in reinvest mode, at 64.
        assert_eq!(bench.net_returns()[..2], [-36.0, 9.375]);
        assert!(bench.net_returns().iter().skip(1).all(|r| *r > 0.0));
        let report = build_report(&bench, &bench, 126, 0.0).unwrap();
        assert!((report.protection - 64.0).abs() < 1e-9);
        assert!((report.max_drawdown_daily - 36.0).abs() < 1e-9);
        assert!((report.beta.unwrap() - 1.0).abs() < 1e-9);
        let strategy = run_walk_forward(&panel, &cfg).unwrap();
        assert_eq!(strategy.periods.len(), 4);
        build_report(&strategy, &bench, 126, 0.0).unwrap();
    }
}
