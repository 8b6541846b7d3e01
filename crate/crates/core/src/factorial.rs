//! Exact and floating-point factorial helpers.
//!
//! Clebsch-Gordan sums and the various closed-form prefactors of the crate
//! are ratios of factorials. Those are computed exactly with big integers
//! and converted to `f64` at the very end, which keeps them free of
//! catastrophic cancellation up to spins of order 20. Plain `f64`
//! factorials are available for the places where only a well-conditioned
//! single factor is needed (they stay finite up to 170!).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// n! as a big integer.
pub(crate) fn big_factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Factorial of half of a doubled integer; the argument must be even and
/// nonnegative (callers guarantee this through selection rules).
pub(crate) fn big_factorial_halved(two_n: i64) -> BigInt {
    debug_assert!(two_n >= 0 && two_n % 2 == 0);
    big_factorial(two_n / 2)
}

/// n! in f64. Exact for n <= 22, accurate to a few ulps beyond.
pub(crate) fn factorial_f64(n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=n as u64 {
        acc *= k as f64;
    }
    acc
}

/// Binomial coefficient in f64 via the multiplicative formula.
pub(crate) fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Convert an exact rational to f64. Falls back on a scaling division when
/// numerator or denominator exceed the f64 range.
pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down by a common power of two.
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = (bits - 900).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// sqrt of a nonnegative exact rational, as f64.
pub(crate) fn sqrt_ratio(r: &BigRational) -> f64 {
    debug_assert!(!r.is_negative());
    ratio_to_f64(r).sqrt()
}

/// l(s, sigma) = sqrt((2s+sigma+1)! (2s-sigma)! / (2sigma+1)!) * sigma! / (2s)!
///
/// The embedding factor between the spin-sigma/2 and spin-s polynomials of
/// the same rank-sigma tensor operator.
pub(crate) fn embedding_factor(two_s: u32, sigma: u32) -> f64 {
    let two_s = two_s as i64;
    let sigma = sigma as i64;
    let under_sqrt = BigRational::new(
        big_factorial(two_s + sigma + 1) * big_factorial(two_s - sigma),
        big_factorial(2 * sigma + 1),
    );
    let outer = BigRational::new(big_factorial(sigma), big_factorial(two_s));
    sqrt_ratio(&under_sqrt) * ratio_to_f64(&outer)
}
