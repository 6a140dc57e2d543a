//! Subcommand implementations. Each returns the text destined for standard
//! output; `main` handles printing and exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, SecondsFormat, Utc};
use fractal_parity::backtest::{run_benchmark, run_walk_forward, BacktestRun};
use fractal_parity::data::{align_panel, load_price_csv_with, CsvColumns, PriceSeries};
use fractal_parity::fractal::{
    build_path, estimate_hurst, stable_cdf_with, HurstConfig, StableCdfOptions, StableParams,
};
use fractal_parity::metrics::{build_report, improvement_row, render_table};
use fractal_parity::riskmodel::log_returns;
use fractal_parity::StrategyVariant;

use crate::artifacts::{self, *};
use crate::config::RunConfig;
use crate::synthetic;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct BacktestArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub horizon: Option<usize>,
    pub variants: Vec<StrategyVariant>,
    /// Replace the configured price files with a seeded synthetic panel.
    pub synthetic_rows: Option<usize>,
    pub seed: u64,
}

fn letter(v: StrategyVariant) -> &'static str {
    match v {
        StrategyVariant::FractalBiased => "A",
        StrategyVariant::StandardBiased => "B",
        StrategyVariant::NaiveRiskParity => "C",
    }
}

/// Cumulative return in percent of initial capital along the period-end equity curve.
fn cumulative(run: &BacktestRun<f64>, initial: f64) -> Vec<f64> {
    run.equity
        .values
        .iter()
        .map(|v| (v / initial - 1.0) * 100.0)
        .collect()
}

fn load_inputs(
    cfg: &RunConfig,
    dir: &Path,
    args: &BacktestArgs,
) -> Result<(Vec<PriceSeries<f64>>, Vec<InputDigest>), CliError> {
    if let Some(rows) = args.synthetic_rows {
        let tickers: Vec<String> = cfg.assets.iter().map(|a| a.ticker.clone()).collect();
        return Ok((
            synthetic::price_panel(&tickers, rows, args.seed)?,
            Vec::new(),
        ));
    }
    let mut series = Vec::with_capacity(cfg.assets.len());
    let mut digests = Vec::with_capacity(cfg.assets.len());
    for asset in &cfg.assets {
        let path = dir.join(&asset.csv);
        series.push(load_price_csv_with(&path, &asset.ticker, &cfg.csv)?);
        digests.push(InputDigest {
            ticker: asset.ticker.clone(),
            path: asset.csv.display().to_string(),
            sha256: artifacts::sha256_file(&path)?,
        });
    }
    Ok((series, digests))
}

/// Runs every configured variant plus the benchmark and writes the artifacts
/// into `args.out`. Returns the rendered report table.
pub fn backtest(args: &BacktestArgs) -> Result<String, CliError> {
    let (mut cfg, dir) = RunConfig::load(&args.config)?;
    if let Some(h) = args.horizon {
        cfg.horizon = h;
    }
    if !args.variants.is_empty() {
        cfg.variants = args.variants.clone();
        if cfg
            .compare
            .is_some_and(|pair| pair.iter().any(|v| !cfg.variants.contains(v)))
        {
            cfg.compare = None;
        }
    }
    cfg.validate()?;

    let (series, inputs) = load_inputs(&cfg, &dir, args)?;
    let panel = align_panel(&series, &cfg.asset_specs()?)?;

    let bench_cfg = cfg.backtest_config(cfg.variants[0]);
    let bench_run = run_benchmark(&panel, &bench_cfg)?;
    let runs = cfg
        .variants
        .iter()
        .map(|&v| run_walk_forward(&panel, &cfg.backtest_config(v)))
        .collect::<Result<Vec<_>, _>>()?;

    let horizon = cfg.horizon;
    let rf = cfg.risk_free_rate;
    let strategies = cfg
        .variants
        .iter()
        .zip(&runs)
        .map(|(&variant, run)| {
            Ok(StrategyReport {
                variant,
                label: variant.label().to_string(),
                report: build_report(run, &bench_run, horizon, rf)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let benchmark = BenchmarkReport {
        ticker: cfg.benchmark.clone(),
        report: build_report(&bench_run, &bench_run, horizon, rf)?,
    };
    let pair = cfg.compare_pair();
    let position = |v: StrategyVariant| {
        cfg.variants
            .iter()
            .position(|x| *x == v)
            .expect("validated")
    };
    let improvement = pair.map(|[a, b]| {
        let row = improvement_row(
            &strategies[position(a)].report,
            &strategies[position(b)].report,
        );
        Improvement::from_row(a, b, row)
    });
    let report = RunReport {
        horizon,
        compounding: cfg.compounding,
        strategies,
        benchmark,
        improvement,
    };

    let mut table_rows: Vec<_> = report
        .strategies
        .iter()
        .map(|s| (s.label.clone(), s.report.clone()))
        .collect();
    table_rows.push((
        format!("Benchmark ({})", report.benchmark.ticker),
        report.benchmark.report.clone(),
    ));
    let table = render_table(
        &table_rows,
        report.improvement.as_ref().map(|imp| {
            (
                format!("Improvement {}-{}, %", letter(imp.a), letter(imp.b)),
                imp.row(),
            )
        }),
    );

    let mut columns: Vec<String> = cfg
        .variants
        .iter()
        .map(|v| v.as_str().to_string())
        .collect();
    columns.push("benchmark".into());
    let all_runs: Vec<&BacktestRun<f64>> = runs.iter().chain([&bench_run]).collect();
    let periods = PeriodTable {
        columns: columns.clone(),
        rows: bench_run
            .periods
            .iter()
            .enumerate()
            .map(|(k, p)| PeriodRow {
                period: p.index,
                start: p.start_date,
                end: p.end_date,
                values: all_runs.iter().map(|r| r.periods[k].net_return).collect(),
            })
            .collect(),
    };
    let curves: Vec<Vec<f64>> = all_runs
        .iter()
        .map(|r| cumulative(r, cfg.initial_capital))
        .collect();
    let cumulative = CumulativeTable {
        columns,
        dates: bench_run.equity.dates.clone(),
        values: (0..bench_run.equity.len())
            .map(|i| curves.iter().map(|c| c[i]).collect())
            .collect(),
    };

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", args.out.display())))?;
    let mut outputs = vec![REPORT_JSON, REPORT_TXT, PERIODS_CSV, CUMULATIVE_CSV];
    write_text(&args.out.join(REPORT_JSON), &to_json(&report))?;
    write_text(&args.out.join(REPORT_TXT), &table)?;
    write_text(&args.out.join(PERIODS_CSV), &periods.to_csv())?;
    write_text(&args.out.join(CUMULATIVE_CSV), &cumulative.to_csv())?;
    if let Some([a, b]) = pair {
        let (ra, rb) = (
            runs[position(a)].net_returns(),
            runs[position(b)].net_returns(),
        );
        let idx: Vec<usize> = periods.rows.iter().map(|r| r.period).collect();
        let ends: Vec<NaiveDate> = periods.rows.iter().map(|r| r.end).collect();
        let diff = DifferenceTable::new(a.as_str(), b.as_str(), &idx, &ends, &ra, &rb);
        write_text(&args.out.join(DIFFERENCE_CSV), &diff.to_csv())?;
        outputs.push(DIFFERENCE_CSV);
    }
    outputs.push(MANIFEST_JSON);
    let manifest = RunManifest {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        created_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        config: cfg,
        synthetic: args.synthetic_rows.map(|rows| SyntheticInput {
            rows,
            seed: args.seed,
        }),
        inputs,
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    };
    write_text(&args.out.join(MANIFEST_JSON), &to_json(&manifest))?;
    Ok(table)
}

/// How the values read by `hurst` are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesKind {
    /// Prices: estimated on the cumulative sum of percentage log returns.
    #[default]
    Price,
    /// Returns: estimated on their cumulative sum.
    Returns,
    /// The path itself.
    Path,
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "price" => Ok(SeriesKind::Price),
            "returns" => Ok(SeriesKind::Returns),
            "path" => Ok(SeriesKind::Path),
            other => Err(format!(
                "unknown series kind `{other}` (price, returns, path)"
            )),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub enum HurstInput {
    Csv {
        path: PathBuf,
        columns: CsvColumns,
        kind: SeriesKind,
    },
    /// Seeded Gaussian random walk of the given length.
    SyntheticWalk { len: usize, seed: u64 },
    #[default]
    None,
}

fn read_column(path: &Path, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::NotFound => {
            CliError::data(format!("FileNotFound: {}", path.display()))
        }
        _ => CliError::data(format!("{}: {e}", path.display())),
    })?;
    let headers = rdr.headers().map_err(|e| CliError::data(e.to_string()))?;
    let idx = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(column))
        .ok_or_else(|| CliError::data(format!("MissingColumn: `{column}` not found in header")))?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| CliError::data(format!("MalformedRow: {e}")))?;
            let field = rec.get(idx).unwrap_or("");
            field.trim().parse::<f64>().map_err(|_| {
                CliError::data(format!(
                    "MalformedRow: line {}: `{field}` is not a number",
                    i + 2
                ))
            })
        })
        .collect()
}

pub fn hurst(input: &HurstInput, config: &HurstConfig<f64>) -> Result<String, CliError> {
    let path = match input {
        HurstInput::SyntheticWalk { len, seed } => synthetic::random_walk(*len, *seed),
        HurstInput::Csv {
            path,
            columns,
            kind,
        } => match kind {
            SeriesKind::Price => {
                let series = load_price_csv_with(path, "series", columns)?;
                build_path(&log_returns("series", series.closes())?)?
            }
            SeriesKind::Returns => build_path(&read_column(path, &columns.price_column)?)?,
            SeriesKind::Path => read_column(path, &columns.price_column)?,
        },
        HurstInput::None => {
            return Err(CliError::config("give --csv PATH or --synthetic-walk LEN"));
        }
    };
    let est = estimate_hurst(&path, config)?;
    let mut out = String::from("h,mu_index,r_squared\n");
    writeln!(
        out,
        "{},{},{}",
        fmt6(est.h),
        fmt6(est.mu_index),
        fmt6(est.r_squared)
    )
    .unwrap();
    out.push_str("delta,variation\n");
    for (d, v) in est.scales.iter().zip(&est.variations) {
        writeln!(out, "{d},{}", fmt6(*v)).unwrap();
    }
    Ok(out)
}

pub fn stable_cdf(
    r: f64,
    params: &StableParams<f64>,
    abs_tol: Option<f64>,
) -> Result<String, CliError> {
    let mut options = StableCdfOptions::default();
    if let Some(tol) = abs_tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::config("--abs-tol must be positive"));
        }
        options.abs_tol = tol;
    }
    let c = stable_cdf_with(r, params, &options)?;
    Ok(format!(
        "cdf,abs_error\n{},{:.6e}\n",
        fmt6(c.probability),
        c.abs_error
    ))
}
