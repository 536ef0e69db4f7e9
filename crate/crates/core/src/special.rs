//! Error function and its complement.
//!
//! Below `z = 1` the error function is summed from the positive-term series
//!
//! ```text
//! erf(z) = 2/sqrt(pi) * exp(-z^2) * sum_n 2^n z^(2n+1) / (1*3*...*(2n+1))
//! ```
//!
//! which has no cancellation. Above it `erfc` comes from the Laplace continued
//! fraction evaluated with the modified Lentz algorithm, so the tail keeps full
//! relative precision until it underflows near `z = 27`.

use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_LIMIT: f64 = 1.0;
const LENTZ_TINY: f64 = 1e-300;
const MAX_CF_TERMS: usize = 10_000;

/// `exp(-z*z)` without the rounding error of forming `z*z` directly.
fn exp_neg_sq(z: f64) -> f64 {
    // Keep 21 mantissa bits so hi*hi is exact.
    let hi = f64::from_bits(z.to_bits() & 0xffff_ffff_0000_0000);
    let lo_term = (hi - z) * (hi + z);
    (-hi * hi).exp() * lo_term.exp()
}

fn erf_series(z: f64) -> f64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * z2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    FRAC_2_SQRT_PI * exp_neg_sq(z) * sum
}

/// erfc(z) for z >= SERIES_LIMIT.
fn erfc_continued_fraction(z: f64) -> f64 {
    // erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    let mut f = z;
    let mut c = f;
    let mut d = 0.0;
    for k in 1..MAX_CF_TERMS {
        let a = 0.5 * k as f64;
        d = z + a * d;
        if d.abs() < LENTZ_TINY {
            d = LENTZ_TINY;
        }
        d = 1.0 / d;
        c = z + a / c;
        if c.abs() < LENTZ_TINY {
            c = LENTZ_TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    exp_neg_sq(z) / (PI.sqrt() * f)
}

/// Returns `(erf(z), erfc(z))`.
pub fn erf_erfc(z: f64) -> (f64, f64) {
    if z.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    let a = z.abs();
    let (erf_a, erfc_a) = if a < SERIES_LIMIT {
        let e = erf_series(a);
        (e, 1.0 - e)
    } else if a < 27.3 {
        let c = erfc_continued_fraction(a);
        (1.0 - c, c)
    } else {
        (1.0, 0.0)
    };
    if z < 0.0 {
        (-erf_a, 2.0 - erfc_a)
    } else {
        (erf_a, erfc_a)
    }
}

pub fn erf(z: f64) -> f64 {
    erf_erfc(z).0
}

pub fn erfc(z: f64) -> f64 {
    erf_erfc(z).1
}
