//! Run configuration, read from a TOML document.
//!
//! ```toml
//! horizon = 126
//! variants = ["fractal_biased", "standard_biased", "naive_risk_parity"]
//! benchmark = "SPY"
//!
//! [[assets]]
//! ticker = "SPY"
//! csv = "data/SPY.csv"
//! expense_ratio = 0.09
//! ```

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use fractal_parity::backtest::{BacktestConfig, CommissionPlan, Compounding};
use fractal_parity::data::{AssetSpec, CsvColumns, Role};
use fractal_parity::fractal::HurstConfig;
use fractal_parity::StrategyVariant;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetEntry {
    pub ticker: String,
    /// Price file, relative to the directory holding the config.
    pub csv: PathBuf,
    /// Annual fund expense ratio in percent.
    #[serde(default)]
    pub expense_ratio: f64,
    #[serde(default)]
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_variants")]
    pub variants: Vec<StrategyVariant>,
    #[serde(default = "default_capital")]
    pub initial_capital: f64,
    #[serde(default)]
    pub compounding: Compounding,
    #[serde(default = "default_benchmark")]
    pub benchmark: String,
    #[serde(default)]
    pub risk_free_rate: f64,
    /// Strategy pair for the improvement row and the difference series.
    #[serde(default)]
    pub compare: Option<[StrategyVariant; 2]>,
    #[serde(default)]
    pub csv: CsvColumns,
    #[serde(default)]
    pub commission: CommissionPlan<f64>,
    #[serde(default)]
    pub hurst: HurstConfig<f64>,
    pub assets: Vec<AssetEntry>,
}

fn default_horizon() -> usize {
    126
}

fn default_variants() -> Vec<StrategyVariant> {
    StrategyVariant::ALL.to_vec()
}

fn default_capital() -> f64 {
    1_000_000.0
}

fn default_benchmark() -> String {
    "SPY".into()
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads a config file; relative asset paths resolve against its directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg = Self::from_toml(&text)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, dir))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.variants.is_empty() {
            return Err(CliError::config("at least one variant is required"));
        }
        let mut seen = HashSet::new();
        if let Some(v) = self.variants.iter().find(|v| !seen.insert(**v)) {
            return Err(CliError::config(format!("variant {v} listed twice")));
        }
        if let Some([a, b]) = self.compare {
            if a == b || !self.variants.contains(&a) || !self.variants.contains(&b) {
                return Err(CliError::config(
                    "compare must name two different variants from the run",
                ));
            }
        }
        if self.assets.is_empty() {
            return Err(CliError::config("no assets configured"));
        }
        if !self.assets.iter().any(|a| a.ticker == self.benchmark) {
            return Err(CliError::config(format!(
                "benchmark {} is not among the assets",
                self.benchmark
            )));
        }
        if !(self.risk_free_rate.is_finite()) {
            return Err(CliError::config("risk_free_rate must be finite"));
        }
        self.backtest_config(self.variants[0]).validate()?;
        self.hurst.validate()?;
        for spec in self.asset_specs()? {
            spec.validate()?;
        }
        Ok(())
    }

    /// The comparison pair: explicit, or the first two variants when present.
    pub fn compare_pair(&self) -> Option<[StrategyVariant; 2]> {
        self.compare.or(match self.variants.as_slice() {
            [a, b, ..] => Some([*a, *b]),
            _ => None,
        })
    }

    pub fn asset_specs(&self) -> Result<Vec<AssetSpec<f64>>, CliError> {
        self.assets
            .iter()
            .map(|a| {
                AssetSpec::new(a.ticker.clone(), a.expense_ratio, a.role).map_err(CliError::from)
            })
            .collect()
    }

    pub fn backtest_config(&self, variant: StrategyVariant) -> BacktestConfig<f64> {
        BacktestConfig {
            horizon: self.horizon,
            variant,
            initial_capital: self.initial_capital,
            commission: self.commission,
            compounding: self.compounding,
            benchmark: self.benchmark.clone(),
            hurst: self.hurst,
        }
    }
}
