//! Machin-like formulas `π/4 = Σ a_k · arctan(1/q_k)`.
//!
//! Formulas are written in a small expression language:
//!
//! ```text
//! formula := sign? term (('+' | '-') term)*
//! term    := (k '*')? 'atan(1' ('/' q)? ')'
//! ```
//!
//! where `k` and `q` are positive decimal integers and whitespace is
//! ignored. Every term is evaluated by its own fixed-point iteration on the
//! unit-fraction ratio, so terms share nothing and may run on separate
//! threads.

use std::fmt;
use std::thread;

use thiserror::Error;

use crate::bigreal::{BigReal, PrecisionContext, DEFAULT_GUARD_DIGITS};
use crate::iterator::{iterate, ArctanArg, IterError, IterationConfig, IterationTrace};

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
    #[error("denominator {0} appears more than once")]
    DuplicateDenominator(u64),
    #[error("zero coefficient at byte {offset}")]
    ZeroCoefficient { offset: usize },
    #[error("a formula needs at least one term")]
    Empty,
    #[error("unknown formula {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Iteration(#[from] IterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MachinTerm {
    pub coeff: i64,
    pub denom: u64,
}

impl MachinTerm {
    pub fn new(coeff: i64, denom: u64) -> Self {
        MachinTerm { coeff, denom }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinFormula {
    terms: Vec<MachinTerm>,
    name: Option<String>,
}

impl MachinFormula {
    pub fn new(terms: Vec<MachinTerm>) -> Result<Self, FormulaError> {
        if terms.is_empty() {
            return Err(FormulaError::Empty);
        }
        for (i, term) in terms.iter().enumerate() {
            if term.coeff == 0 {
                return Err(FormulaError::ZeroCoefficient { offset: 0 });
            }
            if term.denom == 0 {
                return Err(FormulaError::Parse {
                    offset: 0,
                    expected: "positive denominator".into(),
                });
            }
            if terms[..i].iter().any(|t| t.denom == term.denom) {
                return Err(FormulaError::DuplicateDenominator(term.denom));
            }
        }
        Ok(MachinFormula { terms, name: None })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn terms(&self) -> &[MachinTerm] {
        &self.terms
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `Σ |a_k|`, the worst-case amplification of per-term errors.
    pub fn coefficient_weight(&self) -> u64 {
        self.terms.iter().map(|t| t.coeff.unsigned_abs()).sum()
    }

    /// Extra digits per term: `ceil(log10 Σ|a_k|) + 2`.
    pub fn term_slack(&self) -> usize {
        let weight = self.coefficient_weight();
        let mut digits = 0;
        let mut p = 1u64;
        while p < weight {
            p = p.saturating_mul(10);
            digits += 1;
        }
        digits + 2
    }
}

impl fmt::Display for MachinFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            let magnitude = term.coeff.unsigned_abs();
            match (i, term.coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if magnitude != 1 {
                write!(f, "{magnitude}*")?;
            }
            if term.denom == 1 {
                f.write_str("atan(1)")?;
            } else {
                write!(f, "atan(1/{})", term.denom)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &str) -> Result<T, FormulaError> {
        Err(FormulaError::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, token: &str) -> Result<(), FormulaError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            self.fail(&format!("'{token}'"))
        }
    }

    fn integer(&mut self) -> Result<Option<(u64, usize)>, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse() {
            Ok(v) => Ok(Some((v, start))),
            Err(_) => {
                self.pos = start;
                self.fail("integer that fits in 64 bits")
            }
        }
    }

    fn term(&mut self, negative: bool) -> Result<MachinTerm, FormulaError> {
        let mut coeff: i64 = 1;
        if let Some((k, at)) = self.integer()? {
            if k == 0 {
                return Err(FormulaError::ZeroCoefficient { offset: at });
            }
            coeff = i64::try_from(k).or_else(|_| {
                self.pos = at;
                self.fail("coefficient that fits in 63 bits")
            })?;
            self.expect("*")?;
        }
        self.expect("atan")?;
        self.expect("(")?;
        self.skip_ws();
        let one_at = self.pos;
        match self.integer()? {
            Some((1, _)) => {}
            _ => {
                self.pos = one_at;
                return self.fail("'1'");
            }
        }
        let denom = if self.peek() == Some(b'/') {
            self.pos += 1;
            match self.integer()? {
                Some((0, at)) => {
                    self.pos = at;
                    return self.fail("positive denominator");
                }
                Some((q, _)) => q,
                None => return self.fail("denominator"),
            }
        } else {
            1
        };
        self.expect(")")?;
        Ok(MachinTerm {
            coeff: if negative { -coeff } else { coeff },
            denom,
        })
    }
}

/// Parses a formula such as `"4*atan(1/5) - atan(1/239)"`.
pub fn parse_formula(s: &str) -> Result<MachinFormula, FormulaError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut negative = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            true
        }
        Some(b'+') => {
            p.pos += 1;
            false
        }
        None => return p.fail("term"),
        _ => false,
    };
    let mut terms = Vec::new();
    loop {
        let term = p.term(negative)?;
        if terms.iter().any(|t: &MachinTerm| t.denom == term.denom) {
            return Err(FormulaError::DuplicateDenominator(term.denom));
        }
        terms.push(term);
        match p.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(_) => return p.fail("'+', '-' or end of input"),
        }
        p.pos += 1;
    }
    MachinFormula::new(terms)
}

/// Names of the shipped formulas, in listing order.
pub const BUILTIN_NAMES: [&str; 5] = ["unit", "euler2", "two_seven_a", "two_seven_b", "machin"];

/// The one-term formula and the four two-term formulas.
#[derive(Debug, Clone)]
pub struct FormulaRegistry {
    formulas: Vec<MachinFormula>,
}

impl FormulaRegistry {
    pub fn builtin() -> Self {
        let table: [(&str, &[(i64, u64)]); 5] = [
            ("unit", &[(1, 1)]),
            ("euler2", &[(1, 2), (1, 3)]),
            ("two_seven_a", &[(2, 2), (-1, 7)]),
            ("two_seven_b", &[(2, 3), (1, 7)]),
            ("machin", &[(4, 5), (-1, 239)]),
        ];
        let formulas = table
            .iter()
            .map(|(name, terms)| {
                let terms = terms.iter().map(|&(a, q)| MachinTerm::new(a, q)).collect();
                MachinFormula::new(terms)
                    .expect("builtin is well formed")
                    .named(*name)
            })
            .collect();
        FormulaRegistry { formulas }
    }

    pub fn get(&self, name: &str) -> Option<&MachinFormula> {
        self.formulas.iter().find(|f| f.name() == Some(name))
    }

    pub fn iter(&self) -> impl Iterator<Item = &MachinFormula> {
        self.formulas.iter()
    }

    /// A builtin name, or else a formula expression.
    pub fn resolve(&self, name_or_expr: &str) -> Result<MachinFormula, FormulaError> {
        match self.get(name_or_expr.trim()) {
            Some(f) => Ok(f.clone()),
            None => parse_formula(name_or_expr),
        }
    }
}

/// Trace of the iteration for `arctan(1/q)` at `digits` significant digits.
pub fn arctan_unit_trace(
    q: u64,
    order_p: u32,
    digits: usize,
    guard: usize,
) -> Result<IterationTrace, IterError> {
    if q == 0 {
        return Err(IterError::NonPositiveT);
    }
    let cfg = IterationConfig::new(ArctanArg::unit_fraction(q), order_p, digits).with_guard(guard);
    iterate(&cfg)
}

/// `arctan(1/q)` to `digits` significant digits.
pub fn compute_arctan(q: u64, order_p: u32, digits: usize) -> Result<BigReal, IterError> {
    Ok(arctan_unit_trace(q, order_p, digits, DEFAULT_GUARD_DIGITS)?.value)
}

#[derive(Debug, Clone, Copy)]
pub struct PiOptions {
    pub guard: usize,
    /// Evaluate terms on separate threads.
    pub concurrent: bool,
}

impl Default for PiOptions {
    fn default() -> Self {
        PiOptions {
            guard: DEFAULT_GUARD_DIGITS,
            concurrent: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PiComputation {
    pub value: BigReal,
    /// One trace per formula term, in formula order.
    pub traces: Vec<(MachinTerm, IterationTrace)>,
}

/// Per-term traces at `digits` each, serial or one thread per term.
pub fn term_traces(
    f: &MachinFormula,
    order_p: u32,
    digits: usize,
    opts: &PiOptions,
) -> Result<Vec<IterationTrace>, IterError> {
    let run = |t: &MachinTerm| arctan_unit_trace(t.denom, order_p, digits, opts.guard);
    if !opts.concurrent || f.terms().len() == 1 {
        return f.terms().iter().map(run).collect();
    }
    thread::scope(|scope| {
        let handles: Vec<_> = f
            .terms()
            .iter()
            .map(|t| scope.spawn(move || run(t)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("term worker panicked"))
            .collect()
    })
}

/// π to `digits` significant digits from `f`, with traces.
pub fn compute_pi_with(
    f: &MachinFormula,
    order_p: u32,
    digits: usize,
    opts: &PiOptions,
) -> Result<PiComputation, IterError> {
    let term_digits = digits + opts.guard + f.term_slack();
    let traces = term_traces(f, order_p, term_digits, opts)?;
    let ctx = PrecisionContext::with_guard(term_digits, opts.guard);
    let quarter = f
        .terms()
        .iter()
        .zip(&traces)
        .fold(BigReal::zero(), |acc, (term, trace)| {
            acc.add(&trace.value.mul_int(term.coeff, &ctx), &ctx)
        });
    let value = quarter.mul_int(4, &ctx).truncate(digits);
    let traces = f.terms().iter().copied().zip(traces).collect();
    Ok(PiComputation { value, traces })
}

/// π to `digits` significant digits from `f`.
pub fn compute_pi(f: &MachinFormula, order_p: u32, digits: usize) -> Result<BigReal, IterError> {
    Ok(compute_pi_with(f, order_p, digits, &PiOptions::default())?.value)
}

/// Whether `f` sums to π/4 within `10^-(digits-5)`, against `arctan(1)`
/// evaluated ten digits further. `digits` below 20 is raised to 20.
pub fn validate(f: &MachinFormula, digits: usize) -> Result<bool, IterError> {
    let digits = digits.max(20);
    let reference = compute_arctan(1, 2, digits + 10)?;
    let term_digits = digits + f.term_slack();
    let ctx = PrecisionContext::new(term_digits + 10);
    let mut sum = BigReal::zero();
    for term in f.terms() {
        let value = compute_arctan(term.denom, 2, term_digits)?;
        sum = sum.add(&value.mul_int(term.coeff, &ctx), &ctx);
    }
    let gap = sum.sub(&reference, &ctx).abs();
    Ok(gap < BigReal::pow10(-(digits as i64 - 5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(f: &MachinFormula) -> Vec<(i64, u64)> {
        f.terms().iter().map(|t| (t.coeff, t.denom)).collect()
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(
            terms(&parse_formula("4*atan(1/5) - atan(1/239)").unwrap()),
            vec![(4, 5), (-1, 239)]
        );
        assert_eq!(terms(&parse_formula("atan(1)").unwrap()), vec![(1, 1)]);
        assert_eq!(
            terms(&parse_formula("  - 2 * atan ( 1 / 3 )+atan(1/7)").unwrap()),
            vec![(-2, 3), (1, 7)]
        );
        assert_eq!(terms(&parse_formula("atan(1/1)").unwrap()), vec![(1, 1)]);
        assert_eq!(
            terms(&parse_formula("12*atan(1/18) + 8*atan(1/57) - 5*atan(1/239)").unwrap()),
            vec![(12, 18), (8, 57), (-5, 239)]
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_formula("atan(1/2) + atan(1/2)"),
            Err(FormulaError::DuplicateDenominator(2))
        ));
        assert!(matches!(
            parse_formula("0*atan(1/2)"),
            Err(FormulaError::ZeroCoefficient { offset: 0 })
        ));
        let offset = |s: &str| match parse_formula(s) {
            Err(FormulaError::Parse { offset, .. }) => offset,
            other => panic!("{s:?}: {other:?}"),
        };
        assert_eq!(offset(""), 0);
        assert_eq!(offset("atan(2)"), 5);
        assert_eq!(offset("atan(1/0)"), 7);
        assert_eq!(offset("atan(1/)"), 7);
        assert_eq!(offset("4 atan(1/5)"), 2);
        assert_eq!(offset("atan(1/5) *"), 10);
        assert_eq!(offset("atan(1/5"), 8);
        assert_eq!(offset("sin(1/5)"), 0);
    }

    #[test]
    fn builtins_round_trip() {
        let reg = FormulaRegistry::builtin();
        for name in BUILTIN_NAMES {
            let f = reg.get(name).unwrap();
            let reparsed = parse_formula(&f.to_string()).unwrap();
            assert_eq!(reparsed.terms(), f.terms(), "{name}");
        }
        assert_eq!(
            reg.get("machin").unwrap().to_string(),
            "4*atan(1/5) - atan(1/239)"
        );
        assert_eq!(reg.get("unit").unwrap().to_string(), "atan(1)");
        assert_eq!(
            reg.resolve("euler2").unwrap().to_string(),
            "atan(1/2) + atan(1/3)"
        );
        assert_eq!(terms(&reg.resolve("atan(1/2)").unwrap()), vec![(1, 2)]);
    }

    #[test]
    fn slack() {
        let reg = FormulaRegistry::builtin();
        assert_eq!(reg.get("unit").unwrap().term_slack(), 2);
        assert_eq!(reg.get("euler2").unwrap().term_slack(), 3);
        assert_eq!(reg.get("machin").unwrap().term_slack(), 3);
        let gauss = parse_formula("12*atan(1/18) + 8*atan(1/57) - 5*atan(1/239)").unwrap();
        assert_eq!(gauss.term_slack(), 4);
    }

    #[test]
    fn validation() {
        let reg = FormulaRegistry::builtin();
        for f in reg.iter() {
            assert!(validate(f, 50).unwrap(), "{f}");
        }
        assert!(!validate(&parse_formula("atan(1/2)").unwrap(), 50).unwrap());
        assert!(!validate(&parse_formula("4*atan(1/5) - atan(1/238)").unwrap(), 50).unwrap());
    }

    #[test]
    fn arctan_of_one_at_forty_digits() {
        let v = compute_arctan(1, 2, 40).unwrap();
        assert_eq!(
            v.format_decimal(40),
            "0.7853981633974483096156608458198757210492"
        );
    }

    #[test]
    fn pi_rendering_at_tiny_precision() {
        let reg = FormulaRegistry::builtin();
        let pi = compute_pi(reg.get("unit").unwrap(), 2, 1).unwrap();
        assert_eq!(pi.format_decimal(1), "3");
        let pi = compute_pi(reg.get("machin").unwrap(), 2, 2).unwrap();
        assert_eq!(pi.format_decimal(2), "3.1");
    }

    #[test]
    fn serial_and_concurrent_terms_agree() {
        let f = FormulaRegistry::builtin().get("machin").unwrap().clone();
        let serial = PiOptions {
            concurrent: false,
            ..PiOptions::default()
        };
        let a = compute_pi_with(&f, 2, 300, &serial).unwrap();
        let b = compute_pi_with(&f, 2, 300, &PiOptions::default()).unwrap();
        assert_eq!(a.value, b.value);
        for ((_, ta), (_, tb)) in a.traces.iter().zip(&b.traces) {
            assert_eq!(ta.steps, tb.steps);
        }
    }
}
