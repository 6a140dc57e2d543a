use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, QuadratureSettings};
use super::FractalError;
use crate::scalar::Scalar;

/// Beyond `t^alpha = 40` the damping factor makes the remaining integral
/// smaller than `exp(-40) / 40`.
const UPPER_LIMIT: f64 = 40.0;

/// Parameters of an alpha-stable law: stability `alpha`, skewness `beta`,
/// scale `sigma` and location `mu_loc`.
///
/// The characteristic function uses the parameterization that is continuous
/// in `alpha`: for `t > 0` and standardized variable `z = (r - mu_loc) / sigma`,
/// `ln phi(t) = -t^alpha - i beta tan(pi alpha / 2) (t - t^alpha)` and, at
/// `alpha = 1`, `ln phi(t) = -t - i beta (2 / pi) t ln t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StableParams<T> {
    pub alpha: T,
    pub beta: T,
    pub sigma: T,
    pub mu_loc: T,
}

impl<T: Scalar> StableParams<T> {
    pub fn new(alpha: T, beta: T, sigma: T, mu_loc: T) -> Result<Self, FractalError> {
        let p = StableParams {
            alpha,
            beta,
            sigma,
            mu_loc,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FractalError> {
        let bad = |reason: String| Err(FractalError::InvalidParams { reason });
        if !(self.alpha > T::zero() && self.alpha <= T::lit(2.0)) {
            return bad(format!("alpha = {} outside 0 < alpha <= 2", self.alpha));
        }
        if !(self.beta >= -T::one() && self.beta <= T::one()) {
            return bad(format!("beta = {} outside [-1, 1]", self.beta));
        }
        if !(self.sigma > T::zero() && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be positive", self.sigma));
        }
        if !self.mu_loc.is_finite() {
            return bad(format!("mu = {} must be finite", self.mu_loc));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableCdfOptions<T> {
    /// Absolute tolerance on the returned probability.
    pub abs_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for StableCdfOptions<T> {
    fn default() -> Self {
        StableCdfOptions {
            abs_tol: T::quadrature_tolerance(),
            max_intervals: 20_000,
        }
    }
}

/// A distribution-function value and the quadrature's error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StableCdf<T> {
    pub probability: T,
    pub abs_error: T,
}

pub fn stable_cdf<T: Scalar>(r: T, params: &StableParams<T>) -> Result<StableCdf<T>, FractalError> {
    stable_cdf_with(r, params, &StableCdfOptions::default())
}

/// Evaluates `P(R <= r)` by Fourier inversion of the characteristic function:
///
/// `F(z) = 1/2 + (1/pi) ∫_0^∞ exp(-t^alpha) sin(z t + skew(t)) / t dt`
///
/// truncated where the damping factor drops below `exp(-40)`.
pub fn stable_cdf_with<T: Scalar>(
    r: T,
    params: &StableParams<T>,
    options: &StableCdfOptions<T>,
) -> Result<StableCdf<T>, FractalError> {
    params.validate()?;
    if !r.is_finite() {
        return Ok(StableCdf {
            probability: if r > T::zero() { T::one() } else { T::zero() },
            abs_error: T::zero(),
        });
    }
    let alpha = params.alpha;
    let z = (r - params.mu_loc) / params.sigma;
    let inv_alpha = alpha.recip();
    let unit_alpha = alpha == T::one();
    let skew_coef = if unit_alpha {
        params.beta * T::lit(2.0) / T::PI()
    } else {
        params.beta * (T::FRAC_PI_2() * alpha).tan()
    };
    let alpha_minus_one = alpha - T::one();
    let settings = |scale: T| QuadratureSettings {
        abs_tol: options.abs_tol / scale,
        rel_tol: T::zero(),
        max_intervals: options.max_intervals,
    };

    let skew = |t: T| -> T {
        let ln_t = t.ln();
        if unit_alpha {
            skew_coef * t * ln_t
        } else {
            // t - t^alpha, written to stay accurate as alpha -> 1
            skew_coef * (-t * (alpha_minus_one * ln_t).exp_m1())
        }
    };
    let limit = T::lit(UPPER_LIMIT);

    // For alpha >= 1 the integrand is bounded near t = 0. For alpha < 1 the
    // substitution u = t^alpha removes the t^(alpha - 1) singularity and the
    // slow exp(-t^alpha) decay.
    let (integral, scale) = if alpha >= T::one() {
        let upper = limit.powf(inv_alpha);
        let f = |t: T| (z * t + skew(t)).sin() * (-t.powf(alpha)).exp() / t;
        (
            integrate(f, T::zero(), upper, &settings(T::PI().recip())),
            T::PI().recip(),
        )
    } else {
        let scale = inv_alpha / T::PI();
        let f = |u: T| {
            let t = u.powf(inv_alpha);
            (z * t + skew(t)).sin() * (-u).exp() / u
        };
        (integrate(f, T::zero(), limit, &settings(scale)), scale)
    };
    let abs_error = integral.abs_error * scale;
    if !integral.converged || !integral.value.is_finite() {
        return Err(FractalError::QuadratureFailure {
            achieved: abs_error.as_f64(),
            requested: options.abs_tol.as_f64(),
        });
    }
    let probability = (T::lit(0.5) + scale * integral.value)
        .max(T::zero())
        .min(T::one());
    Ok(StableCdf {
        probability,
        abs_error,
    })
}
