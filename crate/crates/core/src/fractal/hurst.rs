use serde::{Deserialize, Serialize};

use super::FractalError;
use crate::scalar::Scalar;
use crate::stats::linear_fit;

/// Minimum number of returns accepted by [`build_path`].
const MIN_RETURNS: usize = 8;

/// Scale ladder and clamp bounds for [`estimate_hurst`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", default)]
pub struct HurstConfig<T> {
    pub h_min: T,
    pub h_max: T,
    /// Preferred smallest window width. The ladder starts here and doubles;
    /// it starts lower (halving down to 2) only when the path is too short to
    /// give `min_scales` points otherwise.
    pub min_delta: usize,
    /// Optional cap on the largest window width.
    pub max_delta: Option<usize>,
    /// Every scale on the ladder must yield at least this many windows.
    pub min_windows: usize,
    pub min_scales: usize,
}

impl<T: Scalar> Default for HurstConfig<T> {
    fn default() -> Self {
        HurstConfig {
            h_min: T::lit(0.1),
            h_max: T::one(),
            min_delta: 16,
            max_delta: None,
            min_windows: 2,
            min_scales: 3,
        }
    }
}

impl<T: Scalar> HurstConfig<T> {
    /// Configuration whose clamp pins every estimate to `h`.
    pub fn fixed(h: T) -> Self {
        HurstConfig {
            h_min: h,
            h_max: h,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), FractalError> {
        let bad = |reason: String| Err(FractalError::InvalidConfig { reason });
        if !(self.h_min > T::zero() && self.h_min <= self.h_max && self.h_max <= T::one()) {
            return bad(format!(
                "clamp bounds must satisfy 0 < h_min <= h_max <= 1, got [{}, {}]",
                self.h_min, self.h_max
            ));
        }
        if self.min_delta < 2 {
            return bad(format!("min_delta must be >= 2, got {}", self.min_delta));
        }
        if let Some(max) = self.max_delta {
            if max < self.min_delta.min(2) {
                return bad(format!(
                    "max_delta {max} is below the smallest window width"
                ));
            }
        }
        if self.min_windows == 0 {
            return bad("min_windows must be >= 1".into());
        }
        if self.min_scales < 2 {
            return bad(format!("min_scales must be >= 2, got {}", self.min_scales));
        }
        Ok(())
    }
}

/// Minimal-cover Hurst estimate with its log-log fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct HurstEstimate<T> {
    /// Hurst exponent after clamping.
    pub h: T,
    /// `1 - mu_index` before clamping.
    pub unclamped_h: T,
    /// Negated slope of `ln V` against `ln delta`.
    pub mu_index: T,
    pub r_squared: T,
    pub scales: Vec<usize>,
    pub variations: Vec<T>,
}

impl<T: Scalar> HurstEstimate<T> {
    /// Minimal-cover fractal dimension `1 + mu_index`.
    pub fn dimension(&self) -> T {
        T::one() + self.mu_index
    }

    pub fn was_clamped(&self) -> bool {
        self.h != self.unclamped_h
    }
}

/// Integrates returns into a path starting at zero: `path[k] = path[k-1] + r[k-1]`.
pub fn build_path<T: Scalar>(returns: &[T]) -> Result<Vec<T>, FractalError> {
    if returns.len() < MIN_RETURNS {
        return Err(FractalError::TooShort {
            len: returns.len(),
            required: MIN_RETURNS,
        });
    }
    if returns.iter().any(|r| !r.is_finite()) {
        return Err(FractalError::NonFinite);
    }
    let mut path = Vec::with_capacity(returns.len() + 1);
    let mut acc = T::zero();
    path.push(acc);
    for &r in returns {
        acc += r;
        path.push(acc);
    }
    Ok(path)
}

/// Sum over consecutive windows of `delta` intervals of the window amplitude
/// (max − min). Adjacent windows share their boundary sample; a trailing
/// remainder shorter than `delta` intervals is discarded.
pub fn minimal_cover_variation<T: Scalar>(path: &[T], delta: usize) -> Result<T, FractalError> {
    if delta < 2 {
        return Err(FractalError::InvalidDelta { delta });
    }
    if path.len() < 2 * delta {
        return Err(FractalError::DeltaTooLarge {
            delta,
            len: path.len(),
        });
    }
    let windows = (path.len() - 1) / delta;
    let total = (0..windows)
        .map(|j| {
            let window = &path[j * delta..=(j + 1) * delta];
            let (lo, hi) = window.iter().fold((window[0], window[0]), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
            hi - lo
        })
        .sum();
    Ok(total)
}

/// Dyadic window widths usable on a path of `path_len` samples.
pub fn scale_ladder<T: Scalar>(
    path_len: usize,
    config: &HurstConfig<T>,
) -> Result<Vec<usize>, FractalError> {
    config.validate()?;
    let intervals = path_len.saturating_sub(1);
    let cap = config.max_delta.unwrap_or(usize::MAX);
    let build = |start: usize| {
        let mut ladder = Vec::new();
        let mut delta = start;
        while delta <= cap && intervals / delta >= config.min_windows {
            ladder.push(delta);
            delta *= 2;
        }
        ladder
    };
    let mut start = config.min_delta;
    let mut ladder = build(start);
    while ladder.len() < config.min_scales && start > 2 {
        start = (start / 2).max(2);
        ladder = build(start);
    }
    if ladder.len() < config.min_scales {
        let required = 2usize.pow(config.min_scales as u32) * config.min_windows + 1;
        return Err(FractalError::TooShort {
            len: path_len,
            required,
        });
    }
    Ok(ladder)
}

/// Estimates the Hurst exponent of a path by the minimal-cover method.
///
/// `V(delta)` scales as `delta^(-mu_index)` on a fixed interval; samples past
/// the span tiled by the coarsest window are ignored. The least-squares slope of
/// `ln V` on `ln delta` gives `mu_index`, the minimal-cover dimension
/// `1 + mu_index` and `H = 1 - mu_index`, clamped into `[h_min, h_max]`.
pub fn estimate_hurst<T: Scalar>(
    path: &[T],
    config: &HurstConfig<T>,
) -> Result<HurstEstimate<T>, FractalError> {
    if path.iter().any(|x| !x.is_finite()) {
        return Err(FractalError::NonFinite);
    }
    let scales = scale_ladder(path.len(), config)?;
    // Every scale is measured over the same leading span: the longest one the
    // coarsest window tiles exactly. Dyadic widths all divide that span.
    let coarsest = *scales.last().expect("ladder is never empty");
    let span = (path.len() - 1) / coarsest * coarsest;
    let path = &path[..=span];
    let variations = scales
        .iter()
        .map(|&delta| {
            let v = minimal_cover_variation(path, delta)?;
            if v <= T::zero() {
                Err(FractalError::DegeneratePath { delta })
            } else {
                Ok(v)
            }
        })
        .collect::<Result<Vec<T>, _>>()?;

    let log_scales: Vec<T> = scales.iter().map(|&d| T::from_count(d).ln()).collect();
    let log_vars: Vec<T> = variations.iter().map(|v| v.ln()).collect();
    let fit = linear_fit(&log_scales, &log_vars).expect("ladder has distinct scales");
    let mu_index = -fit.slope;
    let unclamped_h = T::one() - mu_index;
    let h = unclamped_h.max(config.h_min).min(config.h_max);
    Ok(HurstEstimate {
        h,
        unclamped_h,
        mu_index,
        r_squared: fit.r_squared,
        scales,
        variations,
    })
}

/// Stability index implied by a Hurst exponent, `alpha = 1 / H`, restricted
/// to the stable range `0 < alpha <= 2`.
pub fn alpha_from_hurst<T: Scalar>(h: T) -> Result<T, FractalError> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(FractalError::InvalidHurst { h: h.as_f64() });
    }
    let alpha = h.recip();
    if alpha > T::lit(2.0) {
        return Err(FractalError::OutOfStableRange {
            h: h.as_f64(),
            alpha: alpha.as_f64(),
        });
    }
    Ok(alpha)
}
