//! Exact-rational reference values, written independently of the library's
//! arithmetic so they can serve as oracles.

#![allow(dead_code)]

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use odd_atan::BigReal;

pub fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn to_rational(x: &BigReal) -> BigRational {
    let m = BigInt::from_biguint(
        if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        },
        x.mantissa().clone(),
    );
    BigRational::from_integer(m) * pow10(x.exp10())
}

/// `r` truncated toward zero to `digits` significant digits.
pub fn to_bigreal(r: &BigRational, digits: usize) -> BigReal {
    if r.is_zero() {
        return BigReal::zero();
    }
    let a = r.abs();
    // Leading exponent by repeated scaling; fine for the magnitudes used here.
    let mut mag: i64 = 0;
    while a >= pow10(mag + 1) {
        mag += 1;
    }
    while a < pow10(mag) {
        mag -= 1;
    }
    let shift = digits as i64 - 1 - mag;
    let m = (a * pow10(shift)).to_integer();
    let (_, m) = m.into_parts();
    BigReal::from_parts(r.is_negative(), m, -shift)
}

/// Relative gap `|a - b| / |b|` as `log10`, or `-inf` when equal.
pub fn rel_gap_log10(a: &BigRational, b: &BigRational) -> f64 {
    let gap = (a - b).abs();
    if gap.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10(&gap) - log10(&b.abs())
}

pub fn log10(r: &BigRational) -> f64 {
    let n = r.numer().abs().to_string();
    let d = r.denom().to_string();
    // log10 of a digit string from its 17 leading digits and its length.
    let lead = |s: &str| -> f64 {
        let k = s.len().min(17);
        s[..k].parse::<f64>().unwrap().log10() + (s.len() - k) as f64
    };
    lead(&n) - lead(&d)
}

/// `arctan(1/q)` by its alternating Taylor series, error below `10^-digits`.
pub fn atan_inv(q: u64, digits: u32) -> BigRational {
    assert!(q >= 2, "series converges too slowly for q = 1");
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let eps = pow10(-(digits as i64));
    let mut sum = BigRational::zero();
    let mut power = q.clone();
    let mut k: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * k + 1));
        if term < eps {
            return sum;
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &q2;
        k += 1;
    }
}

/// `π/4 = 4 arctan(1/5) - arctan(1/239)`.
pub fn quarter_pi(digits: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(4)) * atan_inv(5, digits + 2) - atan_inv(239, digits + 2)
}

/// `arctan(1/q)`, including `q = 1` via Machin's formula.
pub fn atan_unit(q: u64, digits: u32) -> BigRational {
    if q == 1 {
        quarter_pi(digits)
    } else {
        atan_inv(q, digits)
    }
}

/// `(sin x, cos x)` by Taylor series for `|x| <= 2`, error below `10^-digits`.
pub fn sin_cos(x: &BigRational, digits: u32) -> (BigRational, BigRational) {
    let eps = pow10(-(digits as i64 + 2));
    let mut sin = BigRational::zero();
    let mut cos = BigRational::zero();
    // term = x^n / n!
    let mut term = BigRational::one();
    let mut n: u64 = 0;
    while term.abs() >= eps || n < 2 {
        if n.is_multiple_of(2) {
            cos += &term;
        } else {
            sin += &term;
        }
        n += 1;
        term = term * x / BigRational::from_integer(BigInt::from(n));
        // Flip the sign every two orders.
        if n.is_multiple_of(2) {
            term = -term;
        }
    }
    (sin, cos)
}

/// Random decimal with up to `max_digits` significant digits and a decimal
/// exponent in `[-40, 40]`.
pub fn random_bigreal<R: rand::Rng>(rng: &mut R, max_digits: usize) -> BigReal {
    let len = rng.gen_range(1..=max_digits);
    let mut digits = String::with_capacity(len);
    digits.push(char::from(b'1' + rng.gen_range(0..9u8)));
    for _ in 1..len {
        digits.push(char::from(b'0' + rng.gen_range(0..10u8)));
    }
    let sign = if rng.gen_bool(0.5) { "-" } else { "" };
    let exp: i32 = rng.gen_range(-40..=40);
    format!("{sign}{digits}e{exp}").parse().unwrap()
}

pub struct OracleRun {
    pub ops: usize,
    pub failures: Vec<String>,
    /// Largest observed `log10` relative error.
    pub worst: f64,
}

/// Runs `ops` random add/sub/mul/div operations at `digits` (default guard)
/// and checks each against exact rational arithmetic with relative
/// tolerance `10^(1 - W)`, `W` the working digits.
pub fn random_op_check(digits: usize, ops: usize, seed: u64) -> OracleRun {
    use rand::{Rng, SeedableRng};
    let ctx = odd_atan::PrecisionContext::new(digits);
    let w = ctx.working();
    let limit = 1.0 - w as f64;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut run = OracleRun {
        ops,
        failures: Vec::new(),
        worst: f64::NEG_INFINITY,
    };
    for i in 0..ops {
        let a = random_bigreal(&mut rng, w);
        let b = random_bigreal(&mut rng, w);
        let (ra, rb) = (to_rational(&a), to_rational(&b));
        let (name, got, exact) = match rng.gen_range(0..4) {
            0 => ("add", a.add(&b, &ctx), &ra + &rb),
            1 => ("sub", a.sub(&b, &ctx), &ra - &rb),
            2 => ("mul", a.mul(&b, &ctx), &ra * &rb),
            _ => ("div", a.div(&b, &ctx).unwrap(), &ra / &rb),
        };
        let got = to_rational(&got);
        let ok = if exact.is_zero() {
            got.is_zero()
        } else {
            let gap = rel_gap_log10(&got, &exact);
            run.worst = run.worst.max(gap);
            gap < limit
        };
        if !ok {
            run.failures.push(format!("#{i} {name}({a:?}, {b:?})"));
        }
    }
    run
}
