//! Arbitrary-precision decimal reals with explicit significant-digit control.
//!
//! A [`BigReal`] is `sign * mantissa * 10^exp10` with an unbounded integer
//! mantissa. Every inexact operation takes a [`PrecisionContext`] and
//! truncates its result toward zero to `digits + guard` significant digits.
//! There is no global precision state.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Guard digits used when none are requested explicitly.
pub const DEFAULT_GUARD_DIGITS: usize = 10;

const LOG10_2: f64 = std::f64::consts::LOG10_2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BigRealError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("magnitude of zero is undefined")]
    ZeroMagnitude,
    #[error("invalid decimal literal at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Working precision for an operation: `digits` significant decimal digits
/// plus `guard` extra digits carried internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: usize,
    guard: usize,
}

impl PrecisionContext {
    /// Context with the default guard. Panics if `digits` is zero.
    pub fn new(digits: usize) -> Self {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: usize, guard: usize) -> Self {
        assert!(digits >= 1, "precision must be at least one digit");
        PrecisionContext { digits, guard }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Effective number of significant digits kept by every operation.
    pub fn working(&self) -> usize {
        self.digits + self.guard
    }
}

/// Exact rational number with a positive denominator, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigUint,
}

impl Rational {
    /// Returns `None` for a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Some(Rational {
            num,
            den: den.into_parts().1,
        })
    }

    /// The unit fraction `1/q`.
    pub fn unit_fraction(q: u64) -> Option<Self> {
        Rational::new(1, q)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    /// `1/q` if this value is a unit fraction.
    pub fn as_unit_fraction(&self) -> Option<&BigUint> {
        if self.num.is_one() {
            Some(&self.den)
        } else {
            None
        }
    }

    pub fn recip(&self) -> Option<Rational> {
        Rational::new(BigInt::from(self.den.clone()), self.num.clone())
    }

    pub fn to_bigreal(&self, ctx: &PrecisionContext) -> BigReal {
        BigReal::from(self.num.clone())
            .div(&BigReal::from(self.den.clone()), ctx)
            .expect("denominator is positive")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = BigRealError;

    /// Accepts `p/q` with decimal integers, `q` nonzero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let slash = s.find('/').ok_or(BigRealError::Parse {
            position: s.len(),
            message: "expected '/'".into(),
        })?;
        let parse_int = |part: &str, offset: usize| -> Result<BigInt, BigRealError> {
            let body = part.strip_prefix(['+', '-']).unwrap_or(part);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(BigRealError::Parse {
                    position: offset,
                    message: "expected integer".into(),
                });
            }
            Ok(part.parse().expect("validated digits"))
        };
        let num = parse_int(&s[..slash], 0)?;
        let den = parse_int(&s[slash + 1..], slash + 1)?;
        Rational::new(num, den).ok_or(BigRealError::Parse {
            position: slash + 1,
            message: "zero denominator".into(),
        })
    }
}

thread_local! {
    static POW10_CACHE: RefCell<HashMap<u64, Rc<BigUint>>> = RefCell::new(HashMap::new());
}

const POW10_CACHE_LIMIT: usize = 64;

/// `10^k`, memoized per thread for large exponents.
pub(crate) fn pow10(k: u64) -> Rc<BigUint> {
    if k < 64 {
        return Rc::new(BigUint::from(10u32).pow(k as u32));
    }
    POW10_CACHE.with(|cache| {
        if let Some(p) = cache.borrow().get(&k) {
            return Rc::clone(p);
        }
        let p = Rc::new(BigUint::from(10u32).pow(u32::try_from(k).expect("exponent fits u32")));
        let mut cache = cache.borrow_mut();
        if cache.len() >= POW10_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(k, Rc::clone(&p));
        p
    })
}

/// Number of decimal digits of `m` (0 for zero).
pub(crate) fn decimal_digits(m: &BigUint) -> u64 {
    if m.is_zero() {
        return 0;
    }
    if let Some(v) = m.to_u64() {
        return v.checked_ilog10().map_or(1, |d| d as u64 + 1);
    }
    let bits = m.bits();
    let mut d = ((bits - 1) as f64 * LOG10_2).floor() as u64 + 1;
    while *m >= *pow10(d) {
        d += 1;
    }
    while d > 1 && *m < *pow10(d - 1) {
        d -= 1;
    }
    d
}

/// Arbitrary-precision decimal real, always in canonical form.
///
/// Canonical means: zero is `(NoSign, 0, 0)`, and a nonzero mantissa carries
/// no trailing factor of ten. Structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigReal {
    sign: Sign,
    mantissa: BigUint,
    exp10: i64,
}

impl BigReal {
    pub fn zero() -> Self {
        BigReal {
            sign: Sign::NoSign,
            mantissa: BigUint::zero(),
            exp10: 0,
        }
    }

    pub fn one() -> Self {
        BigReal::from(1u64)
    }

    /// `10^e`.
    pub fn pow10(e: i64) -> Self {
        BigReal {
            sign: Sign::Plus,
            mantissa: BigUint::one(),
            exp10: e,
        }
    }

    /// Builds `sign * mantissa * 10^exp10` and canonicalizes it.
    pub fn from_parts(negative: bool, mantissa: BigUint, exp10: i64) -> Self {
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Self::canonical(sign, mantissa, exp10)
    }

    fn canonical(sign: Sign, mut mantissa: BigUint, mut exp10: i64) -> Self {
        if mantissa.is_zero() || sign == Sign::NoSign {
            return BigReal::zero();
        }
        strip_trailing_zeros(&mut mantissa, &mut exp10);
        BigReal {
            sign,
            mantissa,
            exp10,
        }
    }

    /// Exact decimal expansion of a finite `f64`, via its shortest
    /// round-trip representation. Non-finite inputs map to zero.
    pub fn from_f64(v: f64) -> Self {
        if !v.is_finite() || v == 0.0 {
            return BigReal::zero();
        }
        format!("{v:e}")
            .parse()
            .expect("f64 formats as a decimal literal")
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exp10(&self) -> i64 {
        self.exp10
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::NoSign
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Plus
    }

    /// Count of significant digits in the canonical mantissa.
    pub fn significant_digits(&self) -> u64 {
        decimal_digits(&self.mantissa)
    }

    /// `floor(log10 |self|)`.
    pub fn mag10(&self) -> Result<i64, BigRealError> {
        if self.is_zero() {
            return Err(BigRealError::ZeroMagnitude);
        }
        Ok(self.top())
    }

    // Exponent of the leading digit; meaningless for zero.
    fn top(&self) -> i64 {
        self.exp10 + decimal_digits(&self.mantissa) as i64 - 1
    }

    pub fn neg(&self) -> Self {
        BigReal {
            sign: -self.sign,
            mantissa: self.mantissa.clone(),
            exp10: self.exp10,
        }
    }

    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        if out.sign == Sign::Minus {
            out.sign = Sign::Plus;
        }
        out
    }

    /// Truncates toward zero to at most `digits` significant digits.
    pub fn truncate(&self, digits: usize) -> Self {
        let d = decimal_digits(&self.mantissa);
        if d <= digits as u64 {
            return self.clone();
        }
        let drop = d - digits as u64;
        let m = &self.mantissa / &*pow10(drop);
        Self::canonical(self.sign, m, self.exp10 + drop as i64)
    }

    /// Truncates toward zero, dropping every digit below `10^floor_exp`.
    fn truncate_below(&self, floor_exp: i64) -> Self {
        if self.is_zero() || self.exp10 >= floor_exp {
            return self.clone();
        }
        let drop = (floor_exp - self.exp10) as u64;
        if drop >= decimal_digits(&self.mantissa) {
            return BigReal::zero();
        }
        let m = &self.mantissa / &*pow10(drop);
        Self::canonical(self.sign, m, floor_exp)
    }

    fn signed_mantissa(&self) -> BigInt {
        BigInt::from_biguint(self.sign, self.mantissa.clone())
    }

    fn from_signed(m: BigInt, exp10: i64) -> Self {
        let (sign, mag) = m.into_parts();
        Self::canonical(sign, mag, exp10)
    }

    pub fn add(&self, other: &BigReal, ctx: &PrecisionContext) -> BigReal {
        let w = ctx.working();
        if other.is_zero() {
            return self.truncate(w);
        }
        if self.is_zero() {
            return other.truncate(w);
        }
        let top = self.top().max(other.top());
        let low = self.exp10.min(other.exp10);
        let cancels = self.sign != other.sign && self.top().min(other.top()) >= top - 1;
        if top - low > 2 * w as i64 + 10 && !cancels {
            // Too far apart to align cheaply. The result keeps its leading
            // digit within one place of `top`, so digits below `floor_exp`
            // only decide the direction of truncation. When a single operand
            // loses digits, a sticky half unit just below the floor carries
            // that direction.
            let floor_exp = top - w as i64 - 4;
            let a = self.truncate_below(floor_exp);
            let b = other.truncate_below(floor_exp);
            let a_cut = a != *self;
            let b_cut = b != *other;
            if !(a_cut && b_cut) {
                let mut sum = Self::exact_sum(&a, &b);
                if a_cut || b_cut {
                    let sign = if a_cut { self.sign } else { other.sign };
                    let sticky = BigReal::from_parts(
                        sign == Sign::Minus,
                        BigUint::from(5u32),
                        floor_exp - 1,
                    );
                    sum = Self::exact_sum(&sum, &sticky);
                }
                return sum.truncate(w);
            }
        }
        Self::exact_sum(self, other).truncate(w)
    }

    fn exact_sum(a: &BigReal, b: &BigReal) -> BigReal {
        if a.is_zero() || b.is_zero() {
            return if a.is_zero() { b.clone() } else { a.clone() };
        }
        let e = a.exp10.min(b.exp10);
        let scale = |x: &BigReal| {
            x.signed_mantissa() * BigInt::from((*pow10((x.exp10 - e) as u64)).clone())
        };
        BigReal::from_signed(scale(a) + scale(b), e)
    }

    pub fn sub(&self, other: &BigReal, ctx: &PrecisionContext) -> BigReal {
        self.add(&other.neg(), ctx)
    }

    pub fn mul(&self, other: &BigReal, ctx: &PrecisionContext) -> BigReal {
        if self.is_zero() || other.is_zero() {
            return BigReal::zero();
        }
        let w = ctx.working();
        let a = self.truncate(w + 5);
        let b = other.truncate(w + 5);
        let sign = a.sign * b.sign;
        Self::canonical(sign, &a.mantissa * &b.mantissa, a.exp10 + b.exp10).truncate(w)
    }

    /// Product with an integer; exact before the final truncation.
    pub fn mul_int(&self, k: i64, ctx: &PrecisionContext) -> BigReal {
        self.mul(&BigReal::from(k), ctx)
    }

    pub fn div(&self, other: &BigReal, ctx: &PrecisionContext) -> Result<BigReal, BigRealError> {
        if other.is_zero() {
            return Err(BigRealError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(BigReal::zero());
        }
        let w = ctx.working();
        let a = self.truncate(w + 5);
        let b = other.truncate(w + 5);
        let da = decimal_digits(&a.mantissa) as i64;
        let db = decimal_digits(&b.mantissa) as i64;
        let shift = (w as i64 + 1 + db - da).max(0) as u64;
        let q = (&a.mantissa * &*pow10(shift)) / &b.mantissa;
        let sign = a.sign * b.sign;
        Ok(Self::canonical(sign, q, a.exp10 - b.exp10 - shift as i64).truncate(w))
    }

    pub fn div_int(&self, k: u64, ctx: &PrecisionContext) -> Result<BigReal, BigRealError> {
        self.div(&BigReal::from(k), ctx)
    }

    /// `self^k` by repeated squaring, each product truncated to `ctx`.
    pub fn pow_int(&self, mut k: u64, ctx: &PrecisionContext) -> BigReal {
        let mut result = BigReal::one();
        let mut base = self.truncate(ctx.working());
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, ctx);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, ctx);
            }
        }
        result
    }

    /// Renders exactly `digits` significant digits, truncated toward zero.
    ///
    /// Fixed notation is used for magnitudes in `[1e-6, 10^digits)`,
    /// scientific (`d.ddde-N`) otherwise.
    pub fn format_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return pad_fraction("0", digits - 1);
        }
        let t = self.truncate(digits);
        let mag = t.top();
        let mut body = t.mantissa.to_str_radix(10);
        body.extend(std::iter::repeat_n('0', digits - body.len()));
        let mut out = String::with_capacity(digits + 8);
        if t.is_negative() {
            out.push('-');
        }
        if (-6..digits as i64).contains(&mag) {
            if mag >= 0 {
                let split = mag as usize + 1;
                out.push_str(&body[..split]);
                if split < body.len() {
                    out.push('.');
                    out.push_str(&body[split..]);
                }
            } else {
                out.push_str("0.");
                out.extend(std::iter::repeat_n('0', (-mag - 1) as usize));
                out.push_str(&body);
            }
        } else {
            out.push_str(&body[..1]);
            if body.len() > 1 {
                out.push('.');
                out.push_str(&body[1..]);
            }
            out.push('e');
            out.push_str(&mag.to_string());
        }
        out
    }

    /// Nearest-ish `f64` built from the 17 leading digits.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let t = self.truncate(17);
        let s = format!(
            "{}{}e{}",
            if t.is_negative() { "-" } else { "" },
            t.mantissa,
            t.exp10
        );
        s.parse().unwrap_or(0.0)
    }

    /// `log10 |self|` as a float; usable far outside the `f64` range.
    pub fn log10_abs(&self) -> Result<f64, BigRealError> {
        let mag = self.mag10()?;
        let lead = self.truncate(17);
        let lead_f: f64 = format!("{}e{}", lead.mantissa, lead.exp10 - mag)
            .parse()
            .expect("leading digits parse");
        Ok(mag as f64 + lead_f.log10())
    }
}

fn pad_fraction(int: &str, zeros: usize) -> String {
    if zeros == 0 {
        return int.to_string();
    }
    format!("{int}.{}", "0".repeat(zeros))
}

fn strip_trailing_zeros(m: &mut BigUint, exp10: &mut i64) {
    const CHUNK: u64 = 10_000_000_000_000_000_000;
    loop {
        let low = (&*m % CHUNK).to_u64().expect("remainder below 10^19");
        if low == 0 {
            *m /= CHUNK;
            *exp10 += 19;
            continue;
        }
        let mut zeros = 0u32;
        let mut l = low;
        while l.is_multiple_of(10) {
            l /= 10;
            zeros += 1;
        }
        if zeros > 0 {
            *m /= 10u64.pow(zeros);
            *exp10 += zeros as i64;
        }
        return;
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |s: Sign| match s {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let magnitude = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp10.min(other.exp10);
                let a = &self.mantissa * &*pow10((self.exp10 - e) as u64);
                let b = &other.mantissa * &*pow10((other.exp10 - e) as u64);
                a.cmp(&b)
            }
            ord => ord,
        };
        if self.is_negative() {
            magnitude.reverse()
        } else {
            magnitude
        }
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigUint> for BigReal {
    fn from(m: BigUint) -> Self {
        BigReal::canonical(Sign::Plus, m, 0)
    }
}

impl From<BigInt> for BigReal {
    fn from(m: BigInt) -> Self {
        BigReal::from_signed(m, 0)
    }
}

impl From<i64> for BigReal {
    fn from(v: i64) -> Self {
        BigReal::from(BigInt::from(v))
    }
}

impl From<u64> for BigReal {
    fn from(v: u64) -> Self {
        BigReal::from(BigUint::from(v))
    }
}

impl FromStr for BigReal {
    type Err = BigRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_decimal(s)
    }
}

/// Parses `[+-]? digit+ ('.' digit+)? ([eE] [+-]? digit+)?` exactly.
pub fn parse_decimal(s: &str) -> Result<BigReal, BigRealError> {
    let bytes = s.as_bytes();
    let err = |position: usize, message: &str| BigRealError::Parse {
        position,
        message: message.to_string(),
    };
    let mut pos = 0;
    let negative = match bytes.first() {
        Some(b'-') => {
            pos += 1;
            true
        }
        Some(b'+') => {
            pos += 1;
            false
        }
        _ => false,
    };
    let digit_run = |from: usize| {
        bytes[from..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count()
    };

    let int_len = digit_run(pos);
    if int_len == 0 {
        return Err(err(pos, "expected digit"));
    }
    let mut digits = String::with_capacity(s.len());
    digits.push_str(&s[pos..pos + int_len]);
    pos += int_len;

    let mut exp10: i64 = 0;
    if bytes.get(pos) == Some(&b'.') {
        pos += 1;
        let frac_len = digit_run(pos);
        if frac_len == 0 {
            return Err(err(pos, "expected digit after '.'"));
        }
        digits.push_str(&s[pos..pos + frac_len]);
        exp10 = -(frac_len as i64);
        pos += frac_len;
    }

    if matches!(bytes.get(pos), Some(b'e' | b'E')) {
        pos += 1;
        let exp_start = pos;
        if matches!(bytes.get(pos), Some(b'+' | b'-')) {
            pos += 1;
        }
        let exp_len = digit_run(pos);
        if exp_len == 0 {
            return Err(err(pos, "expected exponent digits"));
        }
        pos += exp_len;
        let e: i64 = s[exp_start..pos]
            .parse()
            .map_err(|_| err(exp_start, "exponent out of range"))?;
        exp10 = exp10
            .checked_add(e)
            .ok_or_else(|| err(exp_start, "exponent out of range"))?;
    }

    if pos != bytes.len() {
        return Err(err(pos, "unexpected trailing input"));
    }
    let mantissa = BigUint::parse_bytes(digits.as_bytes(), 10).expect("validated digits");
    Ok(BigReal::from_parts(negative, mantissa, exp10))
}

/// Free-function form of [`BigReal::format_decimal`].
pub fn format_decimal(a: &BigReal, digits: usize) -> String {
    a.format_decimal(digits)
}

impl fmt::Display for BigReal {
    /// Every stored digit, no truncation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.significant_digits().max(1) as usize;
        f.write_str(&self.format_decimal(d))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.significant_digits() > 60 {
            write!(
                f,
                "BigReal({}… [{} digits])",
                self.format_decimal(40),
                self.significant_digits()
            )
        } else {
            write!(f, "BigReal({self})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigReal {
        s.parse().unwrap()
    }

    #[test]
    fn small_integer_sums_are_exact() {
        let ctx = PrecisionContext::new(10);
        assert_eq!(r("2").add(&r("2"), &ctx), r("4"));
        let x = r("0.7853981633975");
        assert_eq!(x.add(&BigReal::zero(), &ctx), x);
        assert!(x.add(&x.neg(), &ctx).is_zero());
    }

    #[test]
    fn canonical_zero_and_trailing_zeros() {
        let z = r("0");
        assert_eq!(z, BigReal::zero());
        assert_eq!(z.exp10(), 0);
        assert_eq!(r("-0.000e5"), BigReal::zero());
        let v = r("1200.00");
        assert_eq!(v.mantissa(), &BigUint::from(12u32));
        assert_eq!(v.exp10(), 2);
        assert_eq!(r("1.5e40"), r("15000000000000000000000000000000000000000"));
    }

    #[test]
    fn division_truncates() {
        let ctx = PrecisionContext::with_guard(10, 0);
        let third = r("1").div(&r("3"), &ctx).unwrap();
        assert_eq!(third, r("0.3333333333"));
        let neg = r("-2").div(&r("3"), &ctx).unwrap();
        assert_eq!(neg, r("-0.6666666666"));
        assert_eq!(
            r("1").div(&BigReal::zero(), &ctx),
            Err(BigRealError::DivisionByZero)
        );
    }

    #[test]
    fn pow_int_edge_cases() {
        let ctx = PrecisionContext::new(20);
        assert_eq!(r("7.25").pow_int(0, &ctx), BigReal::one());
        assert_eq!(r("-2").pow_int(5, &ctx), r("-32"));
        assert_eq!(r("1.1").pow_int(2, &ctx), r("1.21"));
    }

    #[test]
    fn comparisons() {
        assert!(r("1e-68") < r("1e-14"));
        let x = r("0.7853981633975");
        assert_eq!(x.cmp(&x), Ordering::Equal);
        assert!(x > r("0.78539816339744830"));
        assert!(r("-1") < r("-0.5"));
        assert!(r("-1") < BigReal::zero());
        assert!(r("123") > r("122.999999999999999999"));
    }

    #[test]
    fn parse_literals() {
        let x = r("0.7853981633975");
        assert_eq!(x.mantissa(), &BigUint::from(7853981633975u64));
        assert_eq!(x.exp10(), -13);
        let eps = r("-1e-1000000");
        assert!(eps.is_negative());
        assert_eq!(eps.mantissa(), &BigUint::one());
        assert_eq!(eps.exp10(), -1_000_000);
        assert_eq!(r("+3.5E+2"), r("350"));
    }

    #[test]
    fn parse_errors_report_position() {
        let pos = |s: &str| match parse_decimal(s) {
            Err(BigRealError::Parse { position, .. }) => position,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("-"), 1);
        assert_eq!(pos("1."), 2);
        assert_eq!(pos(".5"), 0);
        assert_eq!(pos("1e"), 2);
        assert_eq!(pos("1.5x"), 3);
        assert_eq!(pos("12 "), 2);
        assert_eq!(pos("1e99999999999999999999"), 2);
    }

    #[test]
    fn formatting() {
        assert_eq!(BigReal::zero().format_decimal(5), "0.0000");
        assert_eq!(BigReal::zero().format_decimal(1), "0");
        assert_eq!(r("0.7853981633975").format_decimal(14), "0.78539816339750");
        assert_eq!(r("0.7853981633975").format_decimal(5), "0.78539");
        assert_eq!(r("-3.14159").format_decimal(3), "-3.14");
        assert_eq!(r("3.14159").format_decimal(1), "3");
        assert_eq!(r("0.0041840760020747238").format_decimal(8), "0.0041840760");
        assert_eq!(r("5.169038433915418e-14").format_decimal(4), "5.169e-14");
        assert_eq!(r("123456").format_decimal(3), "1.23e5");
        assert_eq!(r("123456").format_decimal(6), "123456");
        assert_eq!(r("120").format_decimal(5), "120.00");
    }

    #[test]
    fn magnitudes() {
        assert_eq!(r("5.169038433915418e-14").mag10(), Ok(-14));
        assert_eq!(r("1").mag10(), Ok(0));
        assert_eq!(r("4.348316332835180e-337").mag10(), Ok(-337));
        assert_eq!(r("9.99").mag10(), Ok(0));
        assert_eq!(r("10").mag10(), Ok(1));
        assert_eq!(BigReal::zero().mag10(), Err(BigRealError::ZeroMagnitude));
    }

    #[test]
    fn float_views() {
        assert_eq!(r("0.25").to_f64(), 0.25);
        let l = r("5.169038433915418e-14").log10_abs().unwrap();
        assert!((l - 5.169038433915418e-14f64.log10()).abs() < 1e-12);
        let tiny = r("3.1e-1683").log10_abs().unwrap();
        assert!((tiny - (-1683.0 + 3.1f64.log10())).abs() < 1e-9);
        assert_eq!(BigReal::from_f64(0.1), r("0.1"));
    }

    #[test]
    fn far_apart_addition_keeps_leading_operand() {
        let ctx = PrecisionContext::with_guard(20, 0);
        let big = r("1");
        let tiny = r("1e-1000000");
        assert_eq!(big.add(&tiny, &ctx), big);
        // Truncation toward zero: 1 - 1e-1000000 keeps twenty nines.
        assert_eq!(big.sub(&tiny, &ctx), r("0.99999999999999999999"));
        assert_eq!(
            r("-1e30").add(&r("0.1"), &ctx),
            r("-999999999999999999990000000000")
        );
    }

    #[test]
    fn decimal_digit_count_matches_string_length() {
        for s in [
            "1",
            "9",
            "10",
            "99999999999999999999",
            "100000000000000000000",
            "123456789012345678901234567890",
        ] {
            let m: BigUint = s.parse().unwrap();
            assert_eq!(decimal_digits(&m), s.len() as u64, "{s}");
        }
        let big = &*pow10(5000) - 1u32;
        assert_eq!(decimal_digits(&big), 5000);
        assert_eq!(decimal_digits(&pow10(5000)), 5001);
    }

    #[test]
    fn rationals_reduce() {
        let q = Rational::new(6, -4).unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigUint::from(2u32));
        assert!(Rational::new(1, 0).is_none());
        let p: Rational = "2/478".parse().unwrap();
        assert_eq!(p.as_unit_fraction(), Some(&BigUint::from(239u32)));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/x".parse::<Rational>().is_err());
    }
}
