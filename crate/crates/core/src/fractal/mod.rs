//! Fractal numerics: minimal-cover Hurst exponent estimation and the
//! alpha-stable distribution function.

mod hurst;
pub mod quadrature;
mod stable;

use thiserror::Error;

pub use self::hurst::{
    alpha_from_hurst, build_path, estimate_hurst, minimal_cover_variation, scale_ladder,
    HurstConfig, HurstEstimate,
};
pub use self::stable::{stable_cdf, stable_cdf_with, StableCdf, StableCdfOptions, StableParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FractalError {
    #[error("TooShort: series of length {len}, at least {required} required")]
    TooShort { len: usize, required: usize },
    #[error("InvalidDelta: window width {delta} must be at least 2")]
    InvalidDelta { delta: usize },
    #[error("DeltaTooLarge: window width {delta} needs a path of at least {} points, got {len}", 2 * delta)]
    DeltaTooLarge { delta: usize, len: usize },
    #[error("DegeneratePath: zero variation at window width {delta}")]
    DegeneratePath { delta: usize },
    #[error("NonFinite: path contains NaN or infinite values")]
    NonFinite,
    #[error("InvalidHurst: {h} must be positive")]
    InvalidHurst { h: f64 },
    #[error("OutOfStableRange: H = {h} gives alpha = {alpha}, outside (0, 2]")]
    OutOfStableRange { h: f64, alpha: f64 },
    #[error("InvalidParams: {reason}")]
    InvalidParams { reason: String },
    #[error("InvalidConfig: {reason}")]
    InvalidConfig { reason: String },
    #[error("QuadratureFailure: achieved error estimate {achieved:e}, requested {requested:e}")]
    QuadratureFailure { achieved: f64, requested: f64 },
}
