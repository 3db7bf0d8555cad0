//! Gaussian tail helpers.

use std::f64::consts::SQRT_2;

/// Standard complementary error function, `2/sqrt(pi) * int_x^inf exp(-s^2) ds`.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `P(N > a)` for `N ~ Normal(0, sigma^2)`.
#[inline]
pub fn gaussian_tail(a: f64, sigma: f64) -> f64 {
    0.5 * erfc(a / (SQRT_2 * sigma))
}

/// `ln(exp(a) + exp(b))` without overflow; `-inf` is the additive identity.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum exp(v))` over a slice.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = values.into_iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}
