use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fractal_parity::data::CsvColumns;
use fractal_parity::fractal::{HurstConfig, StableParams};
use fractal_parity::StrategyVariant;
use fractal_parity_cli::commands::{self, BacktestArgs, HurstInput, SeriesKind};
use fractal_parity_cli::CliError;

#[derive(Parser)]
#[command(
    name = "fractal-parity",
    version,
    about = "Fractal biased risk parity backtester"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the walk-forward backtest described by a config file.
    Backtest(BacktestCmd),
    /// Estimate the Hurst exponent of a series by the minimal-cover method.
    Hurst(HurstCmd),
    /// Evaluate an alpha-stable distribution function.
    StableCdf(StableCmd),
}

#[derive(Args)]
struct BacktestCmd {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Holding period in trading days (126 half-year, 252 annual).
    #[arg(long)]
    horizon: Option<usize>,
    /// Strategy to run; repeat to compare several. Overrides the config list.
    #[arg(long = "variant")]
    variants: Vec<StrategyVariant>,
    /// Use a seeded synthetic panel of this many rows instead of the price files.
    #[arg(long, requires = "seed")]
    synthetic_rows: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct HurstCmd {
    #[arg(long, conflicts_with = "synthetic_walk")]
    csv: Option<PathBuf>,
    /// Value column to read.
    #[arg(long, default_value = "adj_close")]
    column: String,
    #[arg(long, default_value = "date")]
    date_column: String,
    /// price, returns or path.
    #[arg(long, default_value = "price")]
    series: SeriesKind,
    /// Estimate on a seeded Gaussian random walk of this length.
    #[arg(long, requires = "seed")]
    synthetic_walk: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    min_delta: Option<usize>,
    #[arg(long)]
    max_delta: Option<usize>,
    #[arg(long)]
    min_windows: Option<usize>,
    #[arg(long)]
    min_scales: Option<usize>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
}

#[derive(Args)]
struct StableCmd {
    /// Point at which to evaluate P(R <= r).
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long)]
    abs_tol: Option<f64>,
}

fn hurst_config(cmd: &HurstCmd) -> HurstConfig<f64> {
    let mut cfg = HurstConfig::default();
    cfg.min_delta = cmd.min_delta.unwrap_or(cfg.min_delta);
    cfg.max_delta = cmd.max_delta.or(cfg.max_delta);
    cfg.min_windows = cmd.min_windows.unwrap_or(cfg.min_windows);
    cfg.min_scales = cmd.min_scales.unwrap_or(cfg.min_scales);
    cfg.h_min = cmd.h_min.unwrap_or(cfg.h_min);
    cfg.h_max = cmd.h_max.unwrap_or(cfg.h_max);
    cfg
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Backtest(cmd) => commands::backtest(&BacktestArgs {
            config: cmd.config,
            out: cmd.out,
            horizon: cmd.horizon,
            variants: cmd.variants,
            synthetic_rows: cmd.synthetic_rows,
            seed: cmd.seed.unwrap_or(0),
        }),
        Command::Hurst(cmd) => {
            let config = hurst_config(&cmd);
            let input = match (&cmd.csv, cmd.synthetic_walk) {
                (Some(path), _) => HurstInput::Csv {
                    path: path.clone(),
                    columns: CsvColumns {
                        date_column: cmd.date_column.clone(),
                        price_column: cmd.column.clone(),
                    },
                    kind: cmd.series,
                },
                (None, Some(len)) => HurstInput::SyntheticWalk {
                    len,
                    seed: cmd.seed.unwrap_or(0),
                },
                (None, None) => HurstInput::None,
            };
            commands::hurst(&input, &config)
        }
        Command::StableCdf(cmd) => {
            let params = StableParams::new(cmd.alpha, cmd.beta, cmd.sigma, cmd.mu)?;
            commands::stable_cdf(cmd.r, &params, cmd.abs_tol)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
