//! Small descriptive-statistics helpers shared by the risk model and metrics.

use crate::scalar::Scalar;

pub(crate) fn mean<T: Scalar>(xs: &[T]) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().copied().sum::<T>() / T::from_count(xs.len()))
}

/// Sample covariance with the `n - 1` denominator. Requires `n >= 2`.
pub(crate) fn sample_covariance<T: Scalar>(xs: &[T], ys: &[T]) -> Option<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let s: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    Some(s / T::from_count(xs.len() - 1))
}

pub(crate) fn sample_variance<T: Scalar>(xs: &[T]) -> Option<T> {
    sample_covariance(xs, xs)
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Fits a line through `(xs, ys)`. Both inputs are shifted by their first
/// element before the fit so that identical `ys` yield an exactly zero slope.
pub(crate) fn linear_fit<T: Scalar>(xs: &[T], ys: &[T]) -> Option<LinearFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (x0, y0) = (xs[0], ys[0]);
    let dx: Vec<T> = xs.iter().map(|&x| x - x0).collect();
    let dy: Vec<T> = ys.iter().map(|&y| y - y0).collect();
    let mx = mean(&dx)?;
    let my = mean(&dy)?;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (&x, &y) in dx.iter().zip(&dy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = y0 + my - slope * (x0 + mx);
    let r_squared = if syy <= T::zero() {
        T::one()
    } else {
        let ss_res = syy - slope * sxy;
        (T::one() - ss_res / syy).max(T::zero()).min(T::one())
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_ys_give_zero_slope_exactly() {
        let xs: Vec<f64> = [2.0f64, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|x| x.ln())
            .collect();
        let ys = vec![1023f64.ln(); 5];
        let fit = linear_fit(&xs, &ys).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn variance_uses_n_minus_one() {
        assert_eq!(sample_variance(&[0.0, 0.0, 3.0]), Some(3.0));
        assert_eq!(sample_variance(&[1.0f64]), None);
        assert_eq!(mean::<f64>(&[]), None);
    }
}
