//! Per-asset return statistics and horizon rescaling of volatility.
//!
//! Returns are daily log returns in percent, so every mean and standard
//! deviation here is in percent per day (or per horizon after rescaling).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::stats;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiskError {
    #[error("TooShort: {len} values, at least {required} required")]
    TooShort { len: usize, required: usize },
    #[error("Empty: no returns")]
    Empty,
    #[error("InvalidHurst: {h} outside (0, 1]")]
    InvalidHurst { h: f64 },
    #[error("InvalidHorizon: horizon must be at least 1 day")]
    InvalidHorizon,
    #[error("NegativeVolatility: {std0}")]
    NegativeVolatility { std0: f64 },
    #[error("NonFinite: non-finite price or return")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ReturnSeries<T> {
    pub ticker: String,
    pub values: Vec<T>,
}

impl<T> std::ops::Deref for ReturnSeries<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.values
    }
}

/// `values[k] = 100 * (ln p[k+1] - ln p[k])`.
pub fn log_returns<T: Scalar>(ticker: &str, prices: &[T]) -> Result<ReturnSeries<T>, RiskError> {
    if prices.len() < 2 {
        return Err(RiskError::TooShort {
            len: prices.len(),
            required: 2,
        });
    }
    let hundred = T::lit(100.0);
    let values: Vec<T> = prices
        .windows(2)
        .map(|w| hundred * (w[1].ln() - w[0].ln()))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(RiskError::NonFinite);
    }
    Ok(ReturnSeries {
        ticker: ticker.to_string(),
        values,
    })
}

pub fn mean_return<T: Scalar>(returns: &[T]) -> Result<T, RiskError> {
    stats::mean(returns).ok_or(RiskError::Empty)
}

/// Sample standard deviation with the `n - 1` denominator.
pub fn unbiased_std<T: Scalar>(returns: &[T]) -> Result<T, RiskError> {
    stats::sample_variance(returns)
        .map(|v| v.max(T::zero()).sqrt())
        .ok_or(RiskError::TooShort {
            len: returns.len(),
            required: 2,
        })
}

/// Rescales a one-day standard deviation to an `n`-day horizon: `std0 * n^h`.
/// With `h = 0.5` this is the square-root-of-time rule.
pub fn rescale_volatility<T: Scalar>(std0: T, n: usize, h: T) -> Result<T, RiskError> {
    if !(h > T::zero() && h <= T::one()) {
        return Err(RiskError::InvalidHurst { h: h.as_f64() });
    }
    if n == 0 {
        return Err(RiskError::InvalidHorizon);
    }
    if !(std0 >= T::zero()) {
        return Err(RiskError::NegativeVolatility {
            std0: std0.as_f64(),
        });
    }
    Ok(std0 * T::from_count(n).powf(h))
}

/// Return and risk figures of one asset over one lookback window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RiskEstimate<T> {
    pub ticker: String,
    /// Mean daily return, percent.
    pub mu: T,
    /// Unbiased daily standard deviation, percent.
    pub std0: T,
    pub h: T,
    /// Standard deviation rescaled to the horizon, percent.
    pub std_n: T,
    pub horizon: usize,
}

impl<T: Scalar> RiskEstimate<T> {
    pub fn from_returns(
        returns: &ReturnSeries<T>,
        horizon: usize,
        h: T,
    ) -> Result<Self, RiskError> {
        let mu = mean_return(returns)?;
        let std0 = unbiased_std(returns)?;
        let std_n = rescale_volatility(std0, horizon, h)?;
        Ok(RiskEstimate {
            ticker: returns.ticker.clone(),
            mu,
            std0,
            h,
            std_n,
            horizon,
        })
    }

    /// Same return and daily risk, rescaled with a different Hurst exponent.
    pub fn with_hurst(&self, h: T) -> Result<Self, RiskError> {
        Ok(RiskEstimate {
            h,
            std_n: rescale_volatility(self.std0, self.horizon, h)?,
            ..self.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PCT_LN_101: f64 = 0.995_033_085_316_808_3;

    #[test]
    fn log_return_examples() {
        let r = log_returns("X", &[100.0, 101.0]).unwrap();
        assert!((r[0] - PCT_LN_101).abs() < 1e-12);
        let r = log_returns("X", &[100.0, 101.0, 100.0]).unwrap();
        assert!((r[0] - PCT_LN_101).abs() < 1e-12);
        assert!((r[1] + PCT_LN_101).abs() < 1e-12);
        assert_eq!(log_returns("X", &[5.0; 4]).unwrap().values, vec![0.0; 3]);
        assert!(matches!(
            log_returns("X", &[5.0]),
            Err(RiskError::TooShort { .. })
        ));
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_return(&[1.0, 2.0, 3.0]), Ok(2.0));
        assert_eq!(mean_return(&[-1.0, 1.0]), Ok(0.0));
        assert_eq!(mean_return::<f64>(&[]), Err(RiskError::Empty));
    }

    #[test]
    fn std_examples() {
        assert!((unbiased_std(&[1.0, -1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(unbiased_std(&[0.3; 5]).unwrap(), 0.0);
        assert!((unbiased_std(&[0.0, 0.0, 3.0]).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            unbiased_std(&[1.0]),
            Err(RiskError::TooShort { .. })
        ));
    }

    #[test]
    fn rescale_examples() {
        let sqrt_rule = rescale_volatility(0.5, 252, 0.5).unwrap();
        assert!((sqrt_rule - 0.5 * 252f64.sqrt()).abs() < 1e-12);
        assert!((sqrt_rule - 7.937_253_933_193_772).abs() < 1e-12);
        assert_eq!(rescale_volatility(1.0, 1, 0.73).unwrap(), 1.0);
        // 0.5 * 252^0.6 = 0.5 * exp(0.6 ln 252), evaluated at high precision
        let fractal = rescale_volatility(0.5f64, 252, 0.6).unwrap();
        assert!((fractal - 13.797_815_353_957_126).abs() < 1e-9, "{fractal}");
        assert!(matches!(
            rescale_volatility(1.0, 10, 0.0),
            Err(RiskError::InvalidHurst { .. })
        ));
        assert!(matches!(
            rescale_volatility(1.0, 10, 1.5),
            Err(RiskError::InvalidHurst { .. })
        ));
        assert_eq!(
            rescale_volatility(1.0, 0, 0.5),
            Err(RiskError::InvalidHorizon)
        );
    }

    #[test]
    fn estimate_holds_rescale_identity() {
        let r = log_returns("X", &[100.0, 101.0, 99.5, 102.0, 103.0]).unwrap();
        let e = RiskEstimate::from_returns(&r, 126, 0.62).unwrap();
        assert_eq!(e.std_n, e.std0 * 126f64.powf(0.62));
        let e2 = e.with_hurst(0.5).unwrap();
        assert_eq!((e2.mu, e2.std0), (e.mu, e.std0));
    }

    proptest! {
        #[test]
        fn rescale_is_monotone(std0 in 0.01f64..10.0, n in 2usize..600, h1 in 0.05f64..1.0, dh in 0.001f64..0.5) {
            let h2 = (h1 + dh).min(1.0);
            prop_assume!(h2 > h1);
            prop_assert!(rescale_volatility(std0, n, h2).unwrap() > rescale_volatility(std0, n, h1).unwrap());
            prop_assert!(rescale_volatility(std0, n + 1, h1).unwrap() > rescale_volatility(std0, n, h1).unwrap());
        }

        #[test]
        fn log_returns_scale_invariant(
            prices in proptest::collection::vec(1.0f64..500.0, 2..50),
            c in 0.01f64..100.0,
        ) {
            let base = log_returns("X", &prices).unwrap();
            let scaled: Vec<f64> = prices.iter().map(|p| p * c).collect();
            let other = log_returns("X", &scaled).unwrap();
            for (a, b) in base.iter().zip(other.iter()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
