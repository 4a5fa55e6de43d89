//! Simultaneous sine and cosine on `[0, 2]` by Taylor series.
//!
//! The series runs in binary fixed point. The argument is first halved `k`
//! times (no multiple of π is ever subtracted), the two series share one
//! `y^2` per term, and the results are recovered with the double-angle
//! recurrences on `s = sin y` and `v = 1 - cos y`:
//!
//! ```text
//! s' = 2 s (1 - v)        v' = 4 v - 2 v^2
//! ```
//!
//! Both recurrences keep relative error flat, so `2k` extra bits cover the
//! growth of absolute error.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Roots;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bigreal::{pow10, BigReal, PrecisionContext};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigError {
    #[error("argument {0} outside the supported domain [0, 2]")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinCosPair {
    pub sin: BigReal,
    pub cos: BigReal,
}

/// `sin x` and `cos x` for `0 <= x <= 2`, truncated to the working digits of
/// `ctx`.
pub fn sin_cos(x: &BigReal, ctx: &PrecisionContext) -> Result<SinCosPair, TrigError> {
    if x.is_negative() || *x > BigReal::from(2u64) {
        return Err(TrigError::Domain(x.format_decimal(20)));
    }
    if x.is_zero() {
        return Ok(SinCosPair {
            sin: BigReal::zero(),
            cos: BigReal::one(),
        });
    }
    let w = ctx.working();
    let mag = x.mag10().expect("nonzero");
    // sin x ~ x, so tiny arguments need extra absolute precision.
    let abs_digits = w + (-mag).max(0) as usize + 2;
    let base_bits = (abs_digits as f64 * LOG2_10).ceil() as u64;
    let halvings = base_bits.sqrt() / 2;
    let bits = base_bits + 2 * halvings + 2 * (64 - halvings.leading_zeros() as u64) + 32;

    let scaled = to_fixed(x, bits);
    let y = scaled >> halvings;
    let (mut s, mut v) = series(&y, bits);

    for _ in 0..halvings {
        let sv = fixed_mul(&s, &v, bits);
        let vv = fixed_mul(&v, &v, bits);
        s = (&s << 1u32) - (sv << 1u32);
        v = (&v << 2u32) - (vv << 1u32);
    }

    let one = BigInt::one() << bits;
    let c = one - v;
    Ok(SinCosPair {
        sin: from_fixed(s, bits, abs_digits).truncate(w),
        cos: from_fixed(c, bits, abs_digits).truncate(w),
    })
}

/// Taylor sums for `sin y` and `1 - cos y`, `y = y_fixed / 2^bits`.
///
/// Terms `y^n/n!` are generated from a shared `y^2`; each sequence stops at
/// its first term that vanishes at this scale, which bounds the alternating
/// remainder below one unit.
fn series(y_fixed: &BigUint, bits: u64) -> (BigInt, BigInt) {
    let y2 = (y_fixed * y_fixed) >> bits;
    let mut sin_sum = BigInt::from(y_fixed.clone());
    let mut vers_sum = BigInt::zero();
    let mut sin_term = y_fixed.clone();
    let mut vers_term: BigUint = &y2 >> 1u32;
    let mut n: u64 = 2;
    let mut negative = false;
    while !vers_term.is_zero() {
        add_signed(&mut vers_sum, &vers_term, negative);
        // sin term of order n + 1
        sin_term = mul_truncated(&sin_term, &y2, bits) / (n * (n + 1));
        negative = !negative;
        add_signed(&mut sin_sum, &sin_term, negative);
        // 1 - cos term of order n + 2
        vers_term = mul_truncated(&vers_term, &y2, bits) / ((n + 1) * (n + 2));
        n += 2;
    }
    // The sine sequence trails cosine by one order and may still be live.
    while !sin_term.is_zero() {
        sin_term = mul_truncated(&sin_term, &y2, bits) / (n * (n + 1));
        negative = !negative;
        add_signed(&mut sin_sum, &sin_term, negative);
        n += 2;
    }
    (sin_sum, vers_sum)
}

fn add_signed(acc: &mut BigInt, term: &BigUint, negative: bool) {
    let t = BigInt::from_biguint(
        if negative { Sign::Minus } else { Sign::Plus },
        term.clone(),
    );
    *acc += t;
}

// `term * y2 / 2^bits` where `y2` is cut down to the precision `term` still
// carries; the dropped part weighs less than one unit of the result.
fn mul_truncated(term: &BigUint, y2: &BigUint, bits: u64) -> BigUint {
    let keep = term.bits() + 32;
    let y2_bits = y2.bits();
    if y2_bits > keep {
        let shift = y2_bits - keep;
        let y2_cut = y2 >> shift;
        if shift >= bits {
            return (term * y2_cut) << (shift - bits);
        }
        (term * y2_cut) >> (bits - shift)
    } else {
        (term * y2) >> bits
    }
}

fn fixed_mul(a: &BigInt, b: &BigInt, bits: u64) -> BigInt {
    (a * b) >> bits
}

fn to_fixed(x: &BigReal, bits: u64) -> BigUint {
    let m = x.mantissa();
    let e = x.exp10();
    if e >= 0 {
        (m * &*pow10(e as u64)) << bits
    } else {
        (m << bits) / &*pow10((-e) as u64)
    }
}

fn from_fixed(v: BigInt, bits: u64, digits: usize) -> BigReal {
    let (sign, mag) = v.into_parts();
    let m = (mag * &*pow10(digits as u64)) >> bits;
    BigReal::from_parts(sign == Sign::Minus, m, -(digits as i64))
}

/// Smallest `n` with `x_upper^n / n! < 10^(-target_digits)`, decided by exact
/// integer comparison.
pub fn taylor_terms_needed(x_upper: &BigReal, target_digits: u64) -> u64 {
    let x = x_upper.abs();
    if x.is_zero() {
        return 1;
    }
    let m = x.mantissa();
    let e = x.exp10();
    let target = target_digits as i64;
    // x^n / n! < 10^-T  <=>  m^n * 10^(e n + T) < n!
    let mut power = BigUint::one();
    let mut factorial = BigUint::one();
    let mut n: u64 = 0;
    loop {
        let scale = e * n as i64 + target;
        let below = if scale >= 0 {
            &power * &*pow10(scale as u64) < factorial
        } else {
            power < &factorial * &*pow10((-scale) as u64)
        };
        if below {
            return n;
        }
        n += 1;
        power *= m;
        factorial *= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigReal {
        s.parse().unwrap()
    }

    #[test]
    fn zero_argument() {
        let p = sin_cos(&BigReal::zero(), &PrecisionContext::new(30)).unwrap();
        assert!(p.sin.is_zero());
        assert_eq!(p.cos, BigReal::one());
    }

    #[test]
    fn domain_is_enforced() {
        let ctx = PrecisionContext::new(20);
        assert!(matches!(
            sin_cos(&r("-0.1"), &ctx),
            Err(TrigError::Domain(_))
        ));
        assert!(matches!(
            sin_cos(&r("2.0000001"), &ctx),
            Err(TrigError::Domain(_))
        ));
        assert!(sin_cos(&r("2"), &ctx).is_ok());
    }

    #[test]
    fn matches_f64_at_machine_scale() {
        let ctx = PrecisionContext::new(25);
        for s in [
            "0.001",
            "0.3",
            "0.7853981633974483",
            "1.2",
            "1.5707963",
            "2",
        ] {
            let x: f64 = s.parse().unwrap();
            let p = sin_cos(&r(s), &ctx).unwrap();
            assert!((p.sin.to_f64() - x.sin()).abs() < 1e-15, "sin {s}");
            assert!((p.cos.to_f64() - x.cos()).abs() < 1e-15, "cos {s}");
        }
    }

    #[test]
    fn tiny_argument_keeps_relative_precision() {
        let ctx = PrecisionContext::with_guard(30, 0);
        let x = r("1e-40");
        let p = sin_cos(&x, &ctx).unwrap();
        let rel = x.sub(&p.sin, &ctx).abs().div(&x, &ctx).unwrap();
        assert!(rel <= r("1e-29"), "{rel}");
        let gap = BigReal::one().sub(&p.cos, &ctx).abs();
        assert!(gap <= r("1e-29"));
    }

    #[test]
    fn terms_needed_small_cases() {
        assert_eq!(taylor_terms_needed(&BigReal::one(), 20), 22);
        assert_eq!(taylor_terms_needed(&BigReal::zero(), 20), 1);
        assert_eq!(taylor_terms_needed(&BigReal::zero(), 5000), 1);
        assert_eq!(taylor_terms_needed(&BigReal::one(), 0), 2);
    }
}
