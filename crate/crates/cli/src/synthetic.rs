//! Seeded synthetic inputs for fixtures and smoke tests.

use chrono::{Datelike, NaiveDate, Weekday};
use fractal_parity::data::PriceSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::CliError;

/// Gaussian random walk of `len` points starting at zero.
pub fn random_walk(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    let mut path = Vec::with_capacity(len);
    for i in 0..len {
        if i > 0 {
            level += rng.sample::<f64, _>(StandardNormal);
        }
        path.push(level);
    }
    path
}

/// `rows` consecutive weekdays starting 2005-01-03.
pub fn weekdays(rows: usize) -> Vec<NaiveDate> {
    let mut day = NaiveDate::from_ymd_opt(2005, 1, 3).expect("valid date");
    let mut out = Vec::with_capacity(rows);
    while out.len() < rows {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(day);
        }
        day = day.succ_opt().expect("date in range");
    }
    out
}

/// Geometric random walks, one per ticker, with drift and volatility drawn
/// from the seed.
pub fn price_panel(
    tickers: &[String],
    rows: usize,
    seed: u64,
) -> Result<Vec<PriceSeries<f64>>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dates = weekdays(rows);
    tickers
        .iter()
        .map(|ticker| {
            let start: f64 = rng.gen_range(20.0..200.0);
            let drift: f64 = rng.gen_range(-0.0003..0.0006);
            let vol: f64 = rng.gen_range(0.004..0.02);
            let mut log_p = start.ln();
            let closes = (0..rows)
                .map(|i| {
                    if i > 0 {
                        log_p += drift + vol * rng.sample::<f64, _>(StandardNormal);
                    }
                    log_p.exp()
                })
                .collect();
            PriceSeries::new(ticker.clone(), dates.clone(), closes).map_err(CliError::from)
        })
        .collect()
}
