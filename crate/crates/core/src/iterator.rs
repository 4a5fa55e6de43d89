//! The odd-order fixed-point map for `arctan(t)` and its driver.
//!
//! With `f(x) = (sin x - t cos x) / (cos x + t sin x)` the map is
//!
//! ```text
//! T(x) = x - sum_{k=1..P} (-1)^(k-1) / (2k-1) * f(x)^(2k-1)
//! ```
//!
//! Its fixed point on `[0, π/2]` is `arctan(t)` and the iteration
//! `x_{n+1} = T(x_n)` converges with order exactly `2P + 1`. Because each
//! step multiplies the correct digits by `2P + 1`, step `n` runs at
//! `d0 * (2P+1)^n` digits (capped at the target plus guard) and its result is
//! stored truncated to that many digits.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use thiserror::Error;

use crate::bigreal::{BigReal, BigRealError, PrecisionContext, Rational, DEFAULT_GUARD_DIGITS};
use crate::hptrig::{sin_cos, TrigError};

/// Upper end of the accepted iterate domain, just above π/2.
pub const DOMAIN_UPPER: &str = "1.5708";

/// Significant digits kept from the bootstrap seed.
pub const SEED_DIGITS: usize = 12;

const HALF_PI_30: &str = "1.570796326794896619231321691639";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivergenceReason {
    /// An iterate left `[0, 1.5708]`.
    LeftDomain,
    /// Successive differences grew twice in a row.
    GrowingSteps,
}

impl fmt::Display for DivergenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceReason::LeftDomain => f.write_str("iterate left [0, 1.5708]"),
            DivergenceReason::GrowingSteps => {
                f.write_str("step sizes grew on two consecutive steps")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum IterError {
    #[error("x = {0} is outside [0, 1.5708]")]
    Domain(String),
    #[error("t must be positive")]
    NonPositiveT,
    #[error("invalid iteration config: {0}")]
    InvalidConfig(String),
    #[error("iteration diverged at step {step}: {reason}")]
    Diverged {
        step: usize,
        reason: DivergenceReason,
        trace: Box<IterationTrace>,
    },
    #[error("no convergence within {} steps", .trace.steps.len() - 1)]
    MaxStepsExceeded { trace: Box<IterationTrace> },
    #[error(transparent)]
    Arithmetic(#[from] BigRealError),
}

impl From<TrigError> for IterError {
    fn from(e: TrigError) -> Self {
        match e {
            TrigError::Domain(x) => IterError::Domain(x),
        }
    }
}

/// The argument `t` of `arctan(t)`: exact fraction or decimal real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArctanArg {
    Rational(Rational),
    Real(BigReal),
}

impl ArctanArg {
    /// `1/q`.
    pub fn unit_fraction(q: u64) -> Self {
        ArctanArg::Rational(Rational::unit_fraction(q).expect("q is nonzero"))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ArctanArg::Rational(r) => r.is_positive(),
            ArctanArg::Real(x) => x.is_positive(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ArctanArg::Rational(r) => r.numer() == &BigInt::from(0),
            ArctanArg::Real(x) => x.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && !self.is_positive()
    }

    pub fn abs(&self) -> ArctanArg {
        match self {
            ArctanArg::Rational(r) => ArctanArg::Rational(r.abs()),
            ArctanArg::Real(x) => ArctanArg::Real(x.abs()),
        }
    }

    pub fn to_bigreal(&self, ctx: &PrecisionContext) -> BigReal {
        match self {
            ArctanArg::Rational(r) => r.to_bigreal(ctx),
            ArctanArg::Real(x) => x.truncate(ctx.working()),
        }
    }
}

impl FromStr for ArctanArg {
    type Err = BigRealError;

    /// `p/q` becomes a fraction, anything else must be a decimal literal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains('/') {
            s.parse().map(ArctanArg::Rational)
        } else {
            s.parse().map(ArctanArg::Real)
        }
    }
}

impl fmt::Display for ArctanArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArctanArg::Rational(r) => write!(f, "{r}"),
            ArctanArg::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IterationConfig {
    pub t: ArctanArg,
    pub order_p: u32,
    pub target_digits: usize,
    /// Stopping threshold on `|x_n - x_{n-1}|`; `10^-target_digits` if unset.
    pub epsilon: Option<BigReal>,
    /// Starting value; the bootstrap seed if unset.
    pub seed: Option<BigReal>,
    pub base_digits: usize,
    pub guard: usize,
    pub max_steps: usize,
}

impl IterationConfig {
    pub fn new(t: ArctanArg, order_p: u32, target_digits: usize) -> Self {
        IterationConfig {
            t,
            order_p,
            target_digits,
            epsilon: None,
            seed: None,
            base_digits: 14,
            guard: DEFAULT_GUARD_DIGITS,
            max_steps: 64,
        }
    }

    pub fn with_seed(mut self, seed: BigReal) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_epsilon(mut self, epsilon: BigReal) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    pub fn with_base_digits(mut self, base_digits: usize) -> Self {
        self.base_digits = base_digits;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn epsilon(&self) -> BigReal {
        self.epsilon
            .clone()
            .unwrap_or_else(|| BigReal::pow10(-(self.target_digits as i64)))
    }

    /// Highest precision the ladder reaches.
    pub fn cap_digits(&self) -> usize {
        self.target_digits + self.guard
    }

    /// `2P + 1`.
    pub fn order(&self) -> u32 {
        2 * self.order_p + 1
    }

    pub fn validate(&self) -> Result<(), IterError> {
        if !self.t.is_positive() {
            return Err(IterError::NonPositiveT);
        }
        let invalid = |m: &str| Err(IterError::InvalidConfig(m.to_string()));
        if self.order_p < 1 {
            return invalid("order P must be at least 1");
        }
        if self.target_digits < 1 {
            return invalid("target digits must be at least 1");
        }
        if self.base_digits < 2 {
            return invalid("base digits must be at least 2");
        }
        if self.max_steps < 1 {
            return invalid("max steps must be at least 1");
        }
        if matches!(&self.epsilon, Some(e) if !e.is_positive()) {
            return invalid("epsilon must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationStep {
    pub index: usize,
    pub digits_used: usize,
    pub x: BigReal,
    /// `|x_n - x_{n-1}|`; absent for the seed.
    pub delta: Option<BigReal>,
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub config: IterationConfig,
    pub steps: Vec<IterationStep>,
    pub converged: bool,
    /// Last iterate truncated to the target digits.
    pub value: BigReal,
}

impl IterationTrace {
    pub fn deltas(&self) -> impl Iterator<Item = &BigReal> {
        self.steps.iter().filter_map(|s| s.delta.as_ref())
    }

    pub fn last_x(&self) -> &BigReal {
        &self.steps.last().expect("trace has the seed step").x
    }
}

fn domain_upper() -> BigReal {
    DOMAIN_UPPER.parse().expect("constant literal")
}

fn in_domain(x: &BigReal) -> bool {
    !x.is_negative() && *x <= domain_upper()
}

fn check_domain(x: &BigReal) -> Result<(), IterError> {
    if in_domain(x) {
        Ok(())
    } else {
        Err(IterError::Domain(x.format_decimal(20)))
    }
}

/// `(sin x - t cos x) / (cos x + t sin x)`.
pub fn f_ratio(x: &BigReal, t: &BigReal, ctx: &PrecisionContext) -> Result<BigReal, IterError> {
    check_domain(x)?;
    if !t.is_positive() {
        return Err(IterError::NonPositiveT);
    }
    let sc = sin_cos(x, ctx)?;
    let num = sc.sin.sub(&t.mul(&sc.cos, ctx), ctx);
    let den = sc.cos.add(&t.mul(&sc.sin, ctx), ctx);
    Ok(num.div(&den, ctx)?)
}

/// `(q sin x - cos x) / (q cos x + sin x)`, the ratio for `t = 1/q` without
/// ever forming `1/q`.
pub fn f_ratio_rational(x: &BigReal, q: u64, ctx: &PrecisionContext) -> Result<BigReal, IterError> {
    if q == 0 {
        return Err(IterError::NonPositiveT);
    }
    f_ratio_fraction(x, &BigUint::one(), &BigUint::from(q), ctx)
}

// t = p/q: (q sin x - p cos x) / (q cos x + p sin x)
fn f_ratio_fraction(
    x: &BigReal,
    p: &BigUint,
    q: &BigUint,
    ctx: &PrecisionContext,
) -> Result<BigReal, IterError> {
    check_domain(x)?;
    let sc = sin_cos(x, ctx)?;
    let p = BigReal::from(p.clone());
    let q = BigReal::from(q.clone());
    let num = q.mul(&sc.sin, ctx).sub(&p.mul(&sc.cos, ctx), ctx);
    let den = q.mul(&sc.cos, ctx).add(&p.mul(&sc.sin, ctx), ctx);
    Ok(num.div(&den, ctx)?)
}

fn ratio_for(x: &BigReal, t: &ArctanArg, ctx: &PrecisionContext) -> Result<BigReal, IterError> {
    match t {
        ArctanArg::Rational(r) => {
            if !r.is_positive() {
                return Err(IterError::NonPositiveT);
            }
            let p = r.numer().magnitude();
            f_ratio_fraction(x, p, r.denom(), ctx)
        }
        ArctanArg::Real(t) => f_ratio(x, t, ctx),
    }
}

/// One application of the fixed-point map.
pub fn t_map(
    x: &BigReal,
    cfg: &IterationConfig,
    ctx: &PrecisionContext,
) -> Result<BigReal, IterError> {
    let u = ratio_for(x, &cfg.t, ctx)?;
    let u2 = u.mul(&u, ctx);
    // Accumulated left to right: x - u + u^3/3 - u^5/5 ...
    let mut acc = x.sub(&u, ctx);
    let mut power = u;
    for k in 2..=cfg.order_p as u64 {
        power = power.mul(&u2, ctx);
        let term = power.div_int(2 * k - 1, ctx)?;
        acc = if k % 2 == 0 {
            acc.add(&term, ctx)
        } else {
            acc.sub(&term, ctx)
        };
    }
    Ok(acc)
}

/// Digits used by steps `1, 2, ...` until the cap; every later step reuses
/// the last entry.
pub fn precision_ladder(cfg: &IterationConfig) -> Vec<usize> {
    let cap = cfg.cap_digits();
    let growth = cfg.order() as usize;
    let mut ladder = Vec::new();
    let mut d = cfg.base_digits;
    loop {
        d = d.saturating_mul(growth);
        if d >= cap {
            ladder.push(cap);
            return ladder;
        }
        ladder.push(d);
    }
}

/// Digits for step `n >= 1` under `ladder`.
pub fn ladder_digits(ladder: &[usize], step: usize) -> usize {
    ladder
        .get(step.saturating_sub(1))
        .or(ladder.last())
        .copied()
        .expect("ladder is never empty")
}

/// Machine-precision `arctan(z)` for `0 <= z <= 1`: halve the angle until
/// `z <= 1/8`, then sum the Taylor series.
fn bootstrap_atan(z: f64) -> f64 {
    let mut z = z;
    let mut scale = 1.0;
    while z > 0.125 {
        z /= 1.0 + (1.0 + z * z).sqrt();
        scale *= 2.0;
    }
    let z2 = z * z;
    let mut power = z;
    let mut sum = 0.0;
    let mut k = 0u32;
    while power > 1e-20 * z {
        let term = power / (2 * k + 1) as f64;
        sum += if k.is_multiple_of(2) { term } else { -term };
        power *= z2;
        k += 1;
    }
    scale * sum
}

// arctan(z) for 0 < z <= 1 at roughly 16 digits.
fn bootstrap_small(z: &BigReal) -> BigReal {
    if *z < BigReal::pow10(-8) {
        // arctan z = z (1 - z^2/3 + ...) agrees with z far past 12 digits.
        return z.truncate(20);
    }
    BigReal::from_f64(bootstrap_atan(z.to_f64()))
}

/// Low-precision starting value, accurate to at least 12 significant digits.
pub fn seed_value(t: &ArctanArg) -> Result<BigReal, IterError> {
    if !t.is_positive() {
        return Err(IterError::NonPositiveT);
    }
    let ctx = PrecisionContext::with_guard(30, 0);
    let t = t.to_bigreal(&ctx);
    let seed = if t <= BigReal::one() {
        bootstrap_small(&t)
    } else {
        let inv = BigReal::one().div(&t, &ctx)?;
        let half_pi: BigReal = HALF_PI_30.parse().expect("constant literal");
        half_pi.sub(&bootstrap_small(&inv), &ctx)
    };
    Ok(seed.truncate(SEED_DIGITS))
}

/// Runs `x_{n+1} = T(x_n)` along the precision ladder.
///
/// Stops once a step at the capped precision moves by less than epsilon.
/// An iterate leaving the domain, or two consecutive growing steps after
/// step 2, aborts with [`IterError::Diverged`].
pub fn iterate(cfg: &IterationConfig) -> Result<IterationTrace, IterError> {
    cfg.validate()?;
    let ladder = precision_ladder(cfg);
    let cap = cfg.cap_digits();
    let epsilon = cfg.epsilon();
    let mut x = match &cfg.seed {
        Some(s) => s.clone(),
        None => seed_value(&cfg.t)?,
    };
    check_domain(&x)?;

    let mut trace = IterationTrace {
        config: cfg.clone(),
        steps: vec![IterationStep {
            index: 0,
            digits_used: cfg.base_digits,
            x: x.clone(),
            delta: None,
        }],
        converged: false,
        value: BigReal::zero(),
    };
    let mut previous_delta: Option<BigReal> = None;
    let mut growth_run = 0;

    for n in 1..=cfg.max_steps {
        let digits = ladder_digits(&ladder, n);
        let ctx = PrecisionContext::with_guard(digits, cfg.guard);
        let next = t_map(&x, cfg, &ctx)?.truncate(digits);
        let delta = next.sub(&x, &ctx).abs();
        trace.steps.push(IterationStep {
            index: n,
            digits_used: digits,
            x: next.clone(),
            delta: Some(delta.clone()),
        });
        trace.value = next.truncate(cfg.target_digits);

        if !in_domain(&next) {
            return Err(IterError::Diverged {
                step: n,
                reason: DivergenceReason::LeftDomain,
                trace: Box::new(trace),
            });
        }
        if n > 2 && previous_delta.as_ref().is_some_and(|p| delta > *p) {
            growth_run += 1;
            if growth_run >= 2 {
                return Err(IterError::Diverged {
                    step: n,
                    reason: DivergenceReason::GrowingSteps,
                    trace: Box::new(trace),
                });
            }
        } else {
            growth_run = 0;
        }

        x = next;
        if digits == cap && delta < epsilon {
            trace.converged = true;
            return Ok(trace);
        }
        previous_delta = Some(delta);
    }
    Err(IterError::MaxStepsExceeded {
        trace: Box::new(trace),
    })
}

/// `arctan(t)` to `digits` significant digits for any real `t`, using
/// `arctan(-t) = -arctan(t)`.
pub fn arctan(t: &ArctanArg, order_p: u32, digits: usize) -> Result<BigReal, IterError> {
    if t.is_zero() {
        return Ok(BigReal::zero());
    }
    let cfg = IterationConfig::new(t.abs(), order_p, digits);
    let value = iterate(&cfg)?.value;
    Ok(if t.is_negative() { value.neg() } else { value })
}

/// Trace as CSV: `step,digits,delta_mag10,delta`, deltas at 20 significant
/// digits. The seed row leaves both delta columns empty.
pub fn trace_csv(trace: &IterationTrace) -> String {
    let mut out = String::from("step,digits,delta_mag10,delta\n");
    for step in &trace.steps {
        let (mag, delta) = match &step.delta {
            None => (String::new(), String::new()),
            Some(d) if d.is_zero() => (String::new(), "0".to_string()),
            Some(d) => (
                d.mag10().expect("nonzero").to_string(),
                d.format_decimal(20),
            ),
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            step.index, step.digits_used, mag, delta
        ));
    }
    out
}
