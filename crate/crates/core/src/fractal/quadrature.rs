//! Globally adaptive Gauss–Kronrod (7/15 point) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadratureSettings<T> {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: T::quadrature_tolerance(),
            rel_tol: T::zero(),
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Scalar> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Segment<T> {}

impl<T: Scalar> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod15<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = radius * T::lit(x);
        let pair = f(center - dx) + f(center + dx);
        kronrod += T::lit(w) * pair;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * pair;
        }
    }
    let value = kronrod * radius;
    let error = ((kronrod - gauss) * radius).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, repeatedly bisecting the sub-interval with
/// the largest error estimate. The integrand is never evaluated at the
/// endpoints, so integrable endpoint singularities are allowed.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    settings: &QuadratureSettings<T>,
) -> Integral<T> {
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<Segment<T>> = Vec::new();
    heap.push(kronrod15(&f, a, b));
    let min_width = T::epsilon() * T::lit(64.0) * (b - a).abs().max(T::one());

    loop {
        let (value, error) = totals(heap.iter().chain(finished.iter()));
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        let count = heap.len() + finished.len();
        if error <= target || count >= settings.max_intervals || heap.is_empty() {
            return Integral {
                value,
                abs_error: error,
                intervals: count,
                converged: error <= target,
            };
        }
        let worst = heap.pop().expect("heap not empty");
        if (worst.b - worst.a).abs() <= min_width {
            finished.push(worst);
            continue;
        }
        let mid = T::lit(0.5) * (worst.a + worst.b);
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
    }
}

fn totals<'a, T: Scalar>(segments: impl Iterator<Item = &'a Segment<T>>) -> (T, T) {
    segments.fold((T::zero(), T::zero()), |(v, e), s| {
        (v + s.value, e + s.error)
    })
}
