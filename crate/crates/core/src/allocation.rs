//! Lookback window → long-only portfolio weights.
//!
//! Three variants share one pipeline: daily log returns, an optional trend
//! filter (`mu <= 0` drops the asset), per-asset daily volatility rescaled to
//! the horizon, and inverse-volatility weights normalized to full investment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::AlignedPanel;
use crate::fractal::{build_path, estimate_hurst, FractalError, HurstConfig, HurstEstimate};
use crate::riskmodel::{log_returns, RiskError, RiskEstimate};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocationError {
    #[error("WindowLength: lookback window has {actual} rows, horizon requires {expected}")]
    WindowLength { expected: usize, actual: usize },
    #[error("NoPortfolioAssets: window contains no tradable asset")]
    NoPortfolioAssets,
    #[error("DegenerateVolatility: {ticker} has zero volatility over the window")]
    DegenerateVolatility { ticker: String },
    #[error("UnknownTicker: {ticker}")]
    UnknownTicker { ticker: String },
    #[error("{ticker}: {source}")]
    Risk { ticker: String, source: RiskError },
    #[error("{ticker}: {source}")]
    Hurst {
        ticker: String,
        source: FractalError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyVariant {
    /// Trend filter plus horizon rescaling with each asset's estimated H.
    FractalBiased,
    /// Trend filter plus square-root-of-time rescaling (H = 0.5).
    StandardBiased,
    /// Unfiltered inverse daily volatility.
    NaiveRiskParity,
}

impl StrategyVariant {
    pub const ALL: [StrategyVariant; 3] = [
        StrategyVariant::FractalBiased,
        StrategyVariant::StandardBiased,
        StrategyVariant::NaiveRiskParity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyVariant::FractalBiased => "fractal_biased",
            StrategyVariant::StandardBiased => "standard_biased",
            StrategyVariant::NaiveRiskParity => "naive_risk_parity",
        }
    }

    /// Row label used in report tables.
    pub fn label(&self) -> &'static str {
        match self {
            StrategyVariant::FractalBiased => "Fractal biased (A)",
            StrategyVariant::StandardBiased => "Standard biased (B)",
            StrategyVariant::NaiveRiskParity => "Naive risk parity (C)",
        }
    }

    pub fn is_biased(&self) -> bool {
        !matches!(self, StrategyVariant::NaiveRiskParity)
    }
}

impl fmt::Display for StrategyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| {
                format!("unknown variant `{s}` (expected fractal_biased, standard_biased or naive_risk_parity)")
            })
    }
}

/// What the allocator saw for one tradable asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AssetDiagnostics<T> {
    pub risk: RiskEstimate<T>,
    pub hurst: Option<HurstEstimate<T>>,
    pub active: bool,
}

/// Long-only weights aligned with the window's asset order, plus the cash
/// fraction. Benchmark-only assets always carry zero weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PortfolioWeights<T> {
    pub tickers: Vec<String>,
    pub weights: Vec<T>,
    pub cash: T,
    pub diagnostics: Vec<Option<AssetDiagnostics<T>>>,
}

impl<T: Scalar> PortfolioWeights<T> {
    /// Everything in cash.
    pub fn all_cash(tickers: Vec<String>) -> Self {
        let n = tickers.len();
        PortfolioWeights {
            tickers,
            weights: vec![T::zero(); n],
            cash: T::one(),
            diagnostics: vec![None; n],
        }
    }

    /// Fully invested in a single asset.
    pub fn single(tickers: Vec<String>, ticker: &str) -> Result<Self, AllocationError> {
        let idx = tickers.iter().position(|t| t == ticker).ok_or_else(|| {
            AllocationError::UnknownTicker {
                ticker: ticker.to_string(),
            }
        })?;
        let mut w = Self::all_cash(tickers);
        w.weights[idx] = T::one();
        w.cash = T::zero();
        Ok(w)
    }

    pub fn weight_of(&self, ticker: &str) -> Option<T> {
        self.tickers
            .iter()
            .position(|t| t == ticker)
            .map(|i| self.weights[i])
    }

    pub fn invested(&self) -> T {
        self.weights.iter().copied().sum()
    }
}

/// Active mask: an asset stays in the portfolio only if its mean return is
/// strictly positive.
pub fn trend_filter<T: Scalar>(risk: &[RiskEstimate<T>]) -> Vec<bool> {
    risk.iter().map(|r| r.mu > T::zero()).collect()
}

/// Inverse-volatility weights over the masked assets. Returns the weights and
/// the cash fraction (1 when nothing is active). The normalizer is summed in
/// sorted order so that permuting assets permutes the weights exactly.
pub fn inverse_volatility_weights<T: Scalar>(vols: &[T], active: &[bool]) -> (Vec<T>, T) {
    let inverse: Vec<T> = vols
        .iter()
        .zip(active)
        .map(|(&v, &on)| if on { v.recip() } else { T::zero() })
        .collect();
    let mut sorted: Vec<T> = inverse.iter().copied().filter(|x| *x > T::zero()).collect();
    if sorted.is_empty() {
        return (vec![T::zero(); vols.len()], T::one());
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite inverse volatility"));
    let total: T = sorted.into_iter().sum();
    (inverse.into_iter().map(|x| x / total).collect(), T::zero())
}

/// Computes the variant's weights from a lookback window of exactly
/// `horizon` rows.
pub fn compute_weights<T: Scalar>(
    window: &AlignedPanel<T>,
    variant: StrategyVariant,
    horizon: usize,
    hurst: &HurstConfig<T>,
) -> Result<PortfolioWeights<T>, AllocationError> {
    if window.len() != horizon {
        return Err(AllocationError::WindowLength {
            expected: horizon,
            actual: window.len(),
        });
    }
    let tradable: Vec<usize> = (0..window.n_assets())
        .filter(|&j| window.assets()[j].is_portfolio_asset())
        .collect();
    if tradable.is_empty() {
        return Err(AllocationError::NoPortfolioAssets);
    }
    let half = T::lit(0.5);

    let mut returns = Vec::with_capacity(tradable.len());
    let mut risk = Vec::with_capacity(tradable.len());
    for &j in &tradable {
        let ticker = &window.assets()[j].ticker;
        let wrap = |source| AllocationError::Risk {
            ticker: ticker.clone(),
            source,
        };
        let r = log_returns(ticker, &window.column(j)).map_err(wrap)?;
        risk.push(RiskEstimate::from_returns(&r, horizon, half).map_err(wrap)?);
        returns.push(r);
    }

    let active = if variant.is_biased() {
        trend_filter(&risk)
    } else {
        vec![true; risk.len()]
    };

    let mut estimates: Vec<Option<HurstEstimate<T>>> = vec![None; risk.len()];
    for i in 0..risk.len() {
        if !active[i] {
            continue;
        }
        if risk[i].std0 <= T::zero() {
            return Err(AllocationError::DegenerateVolatility {
                ticker: risk[i].ticker.clone(),
            });
        }
        if variant == StrategyVariant::FractalBiased {
            let ticker = risk[i].ticker.clone();
            let est = build_path(&returns[i])
                .and_then(|path| estimate_hurst(&path, hurst))
                .map_err(|source| AllocationError::Hurst {
                    ticker: ticker.clone(),
                    source,
                })?;
            risk[i] = risk[i]
                .with_hurst(est.h)
                .map_err(|source| AllocationError::Risk { ticker, source })?;
            estimates[i] = Some(est);
        }
    }

    let vols: Vec<T> = risk
        .iter()
        .map(|r| match variant {
            StrategyVariant::NaiveRiskParity => r.std0,
            _ => r.std_n,
        })
        .collect();
    let (tradable_weights, cash) = inverse_volatility_weights(&vols, &active);

    let tickers: Vec<String> = window.assets().iter().map(|a| a.ticker.clone()).collect();
    let mut out = PortfolioWeights::all_cash(tickers);
    out.cash = cash;
    for (k, (((&j, w), r), est)) in tradable
        .iter()
        .zip(tradable_weights)
        .zip(risk)
        .zip(estimates)
        .enumerate()
    {
        out.weights[j] = w;
        out.diagnostics[j] = Some(AssetDiagnostics {
            risk: r,
            hurst: est,
            active: active[k],
        });
    }
    Ok(out)
}
