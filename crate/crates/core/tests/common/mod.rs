//! Test-only oracles and synthetic data.
#![allow(dead_code)]

use chrono::NaiveDate;
use fractal_parity::data::{AlignedPanel, AssetSpec, Role};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Lower Cholesky factor of the fractional Gaussian noise covariance
/// `γ(k) = ½(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H})` for `n` increments.
pub fn fgn_cholesky(n: usize, h: f64) -> Vec<Vec<f64>> {
    let gamma = |k: usize| {
        let k = k as f64;
        0.5 * ((k + 1.0).powf(2.0 * h) - 2.0 * k.powf(2.0 * h) + (k - 1.0).abs().powf(2.0 * h))
    };
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s = gamma(i - j) - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                l[i][j] = s.max(0.0).sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    l
}

/// Exact fractional Brownian motion path of `l.len() + 1` points starting at 0.
pub fn fbm_path(l: &[Vec<f64>], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<f64> = (0..l.len()).map(|_| rng.sample(StandardNormal)).collect();
    let mut path = Vec::with_capacity(l.len() + 1);
    let mut acc = 0.0;
    path.push(acc);
    for row in l {
        acc += row.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
        path.push(acc);
    }
    path
}

/// Gaussian random walk of `len` points starting at 0.
pub fn random_walk(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    let mut path = vec![acc];
    for _ in 1..len {
        acc += rng.sample::<f64, _>(StandardNormal);
        path.push(acc);
    }
    path
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn trading_dates(rows: usize) -> Vec<NaiveDate> {
    let mut d = NaiveDate::from_ymd_opt(2005, 1, 3).unwrap();
    let mut out = Vec::with_capacity(rows);
    while out.len() < rows {
        use chrono::Datelike;
        if d.weekday().number_from_monday() <= 5 {
            out.push(d);
        }
        d = d.succ_opt().unwrap();
    }
    out
}

pub const TICKERS: [&str; 4] = ["SPY", "TLT", "IYR", "GLD"];

/// Geometric random walks with per-asset drift and volatility drawn from the seed.
pub fn synthetic_panel(
    seed: u64,
    assets: usize,
    rows: usize,
    expense: &[f64],
) -> AlignedPanel<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<(f64, f64, f64)> = (0..assets)
        .map(|_| {
            (
                rng.gen_range(20.0..200.0),
                rng.gen_range(-0.0005..0.0008),
                rng.gen_range(0.004..0.02),
            )
        })
        .collect();
    let mut level: Vec<f64> = params.iter().map(|p| p.0.ln()).collect();
    let mut prices = Vec::with_capacity(rows * assets);
    for r in 0..rows {
        for (j, &(_, drift, vol)) in params.iter().enumerate() {
            if r > 0 {
                level[j] += drift + vol * rng.sample::<f64, _>(StandardNormal);
            }
            prices.push(level[j].exp());
        }
    }
    let specs = (0..assets)
        .map(|j| {
            let ticker = TICKERS
                .get(j)
                .map(|t| t.to_string())
                .unwrap_or(format!("X{j}"));
            AssetSpec::new(ticker, expense[j % expense.len()], Role::PortfolioAsset).unwrap()
        })
        .collect();
    AlignedPanel::new(trading_dates(rows), specs, prices).unwrap()
}

/// Normal(0, 2) distribution function, the alpha = 2 stable law.
pub fn normal_var2_cdf(x: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    Normal::new(0.0, 2f64.sqrt()).unwrap().cdf(x)
}

/// Standard Cauchy distribution function.
pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / std::f64::consts::PI
}
