use serde::{Deserialize, Serialize};

use super::BacktestError;
use crate::allocation::PortfolioWeights;
use crate::scalar::Scalar;

/// Per-share commission with a per-order floor and a cap expressed as a
/// percentage of the order value. Defaults follow a US broker's tiered plan:
/// $0.0035/share, $0.35 minimum, 1% of trade value maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", default)]
pub struct CommissionPlan<T> {
    pub per_share: T,
    pub min_per_order: T,
    pub max_pct_of_value: T,
}

impl<T: Scalar> Default for CommissionPlan<T> {
    fn default() -> Self {
        CommissionPlan {
            per_share: T::lit(0.0035),
            min_per_order: T::lit(0.35),
            max_pct_of_value: T::one(),
        }
    }
}

impl<T: Scalar> CommissionPlan<T> {
    pub fn free() -> Self {
        CommissionPlan {
            per_share: T::zero(),
            min_per_order: T::zero(),
            max_pct_of_value: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<(), BacktestError> {
        let fields = [self.per_share, self.min_per_order, self.max_pct_of_value];
        if fields.iter().all(|f| *f >= T::zero()) {
            Ok(())
        } else {
            Err(BacktestError::InvalidConfig(
                "commission plan fields must be non-negative".into(),
            ))
        }
    }
}

/// Commission for one order: `per_share * shares`, raised to the minimum and
/// then capped at `max_pct_of_value` percent of the order value.
pub fn commission_for<T: Scalar>(shares: u64, price: T, plan: &CommissionPlan<T>) -> T {
    if shares == 0 {
        return T::zero();
    }
    let qty = T::lit(shares as f64);
    let raw = plan.per_share * qty;
    let cap = plan.max_pct_of_value / T::lit(100.0) * qty * price;
    raw.max(plan.min_per_order).min(cap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Trade<T> {
    pub ticker: String,
    /// Positive buys, negative sells.
    pub shares: i64,
    pub price: T,
    pub commission: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Rebalance<T> {
    pub trades: Vec<Trade<T>>,
    pub holdings: Vec<i64>,
    pub commission: T,
    /// Capital not invested in shares, before commissions.
    pub cash: T,
}

/// Converts target weights into whole-share holdings and the trades needed
/// to get there from `prior_holdings`.
pub fn execute_rebalance<T: Scalar>(
    weights: &PortfolioWeights<T>,
    capital: T,
    prices: &[T],
    plan: &CommissionPlan<T>,
    prior_holdings: &[i64],
) -> Result<Rebalance<T>, BacktestError> {
    let n = weights.weights.len();
    if prices.len() != n || prior_holdings.len() != n {
        return Err(BacktestError::InvalidConfig(format!(
            "rebalance over {n} assets given {} prices and {} prior holdings",
            prices.len(),
            prior_holdings.len()
        )));
    }
    if !(capital > T::zero()) {
        return Err(BacktestError::InsufficientCapital {
            capital: capital.as_f64(),
            commission: 0.0,
        });
    }
    if prices.iter().any(|p| !(*p > T::zero())) {
        return Err(BacktestError::InvalidConfig(
            "prices must be positive".into(),
        ));
    }

    let mut holdings = Vec::with_capacity(n);
    let mut trades = Vec::new();
    let mut commission = T::zero();
    let mut invested = T::zero();
    for j in 0..n {
        let w = weights.weights[j].max(T::zero());
        let target = (w * capital / prices[j])
            .floor()
            .to_i64()
            .expect("share count fits in i64");
        let delta = target - prior_holdings[j];
        if delta != 0 {
            let fee = commission_for(delta.unsigned_abs(), prices[j], plan);
            commission += fee;
            trades.push(Trade {
                ticker: weights.tickers[j].clone(),
                shares: delta,
                price: prices[j],
                commission: fee,
            });
        }
        invested += T::lit(target as f64) * prices[j];
        holdings.push(target);
    }
    if commission >= capital {
        return Err(BacktestError::InsufficientCapital {
            capital: capital.as_f64(),
            commission: commission.as_f64(),
        });
    }
    Ok(Rebalance {
        trades,
        holdings,
        commission,
        cash: capital - invested,
    })
}
