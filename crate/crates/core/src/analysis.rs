//! Empirical order of convergence and error constant from traces.
//!
//! For a method of order `r = 2P + 1` the errors satisfy
//! `e_{n+1} ≈ c · e_n^r` with `c = (-1)^P / (2P + 1)`. Two estimates are
//! taken per consecutive pair of usable errors:
//!
//! ```text
//! p̂_n = log10 e_{n+1} / log10 e_n        ĉ_n = e_{n+1} / e_n^r
//! ```
//!
//! A value is usable only while it sits well above the precision floor of
//! the step that produced it: `e > 10^-(D - 5)`. Values limited by working
//! precision rather than convergence would otherwise drag the estimates
//! toward 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bigreal::{BigReal, PrecisionContext};
use crate::iterator::IterationTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("need at least two consecutive usable steps, found {usable}")]
    InsufficientSteps { usable: usize },
    #[error("reference has {have} significant digits, need at least {need}")]
    ReferenceTooCoarse { have: u64, need: u64 },
}

/// What the per-step magnitudes measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorSource {
    /// `δ_n = |x_n - x_{n-1}|`, the proxy available without a reference.
    Delta,
    /// `e_n = x_n - reference`.
    True,
}

impl ErrorSource {
    pub fn label(self) -> &'static str {
        match self {
            ErrorSource::Delta => "delta",
            ErrorSource::True => "true",
        }
    }
}

/// One error sample: its step index, the precision floor it is judged
/// against, and its signed value.
#[derive(Debug, Clone)]
pub struct ErrorSample {
    pub n: usize,
    pub floor_digits: usize,
    pub value: BigReal,
}

impl ErrorSample {
    pub fn is_usable(&self) -> bool {
        !self.value.is_zero() && self.value.abs() > BigReal::pow10(-(self.floor_digits as i64 - 5))
    }
}

/// Estimates from the pair `(e_n, e_{n+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEstimate {
    pub n: usize,
    pub mag10: i64,
    pub next_mag10: i64,
    pub order: f64,
    /// Signed for true errors, nonnegative for deltas.
    pub constant: f64,
}

impl PairEstimate {
    /// The order read off the printed exponents alone, `mag10(e_{n+1}) / mag10(e_n)`.
    pub fn exponent_order(&self) -> f64 {
        exponent_ratio(self.mag10, self.next_mag10)
    }
}

/// `next / current` for two decimal exponents.
pub fn exponent_ratio(current: i64, next: i64) -> f64 {
    next as f64 / current as f64
}

#[derive(Debug, Clone)]
pub struct OrderReport {
    pub source: ErrorSource,
    pub order_p: u32,
    pub pairs: Vec<PairEstimate>,
    pub usable_steps: Vec<usize>,
    /// Mean of `p̂` over every usable pair.
    pub mean_order: f64,
    /// Mean of `p̂` over the last three usable pairs (fewer if fewer exist).
    pub tail_mean_order: f64,
    pub theoretical_order: u32,
    /// `1 / (2P + 1)`.
    pub theoretical_constant: f64,
}

impl OrderReport {
    pub fn order_estimates(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.order).collect()
    }

    pub fn constant_estimates(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.constant).collect()
    }

    pub fn last_constant(&self) -> f64 {
        self.pairs.last().map_or(f64::NAN, |p| p.constant)
    }

    /// `(-1)^P`.
    pub fn expected_sign(&self) -> f64 {
        if self.order_p.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn order_within(&self, tolerance: f64) -> bool {
        (self.tail_mean_order - self.theoretical_order as f64).abs() <= tolerance
    }

    /// Whether `|ĉ|` on the last pair is within `rel` of `1/(2P+1)`.
    pub fn constant_within(&self, rel: f64) -> bool {
        let c = self.last_constant().abs();
        (c / self.theoretical_constant - 1.0).abs() <= rel
    }

    /// For true errors, whether the last constant has sign `(-1)^P`.
    pub fn constant_sign_matches(&self) -> Option<bool> {
        match self.source {
            ErrorSource::Delta => None,
            ErrorSource::True => Some(self.last_constant().signum() == self.expected_sign()),
        }
    }
}

/// Statistics over an arbitrary sequence of error samples.
pub fn estimate_from_samples(
    source: ErrorSource,
    order_p: u32,
    samples: &[ErrorSample],
) -> Result<OrderReport, AnalysisError> {
    let r = 2 * order_p + 1;
    let usable: Vec<&ErrorSample> = samples.iter().filter(|s| s.is_usable()).collect();
    let pairs: Vec<PairEstimate> = usable
        .windows(2)
        .filter(|w| w[1].n == w[0].n + 1)
        .map(|w| pair_estimate(&w[0].value, &w[1].value, w[0].n, r))
        .collect();
    if pairs.is_empty() {
        return Err(AnalysisError::InsufficientSteps {
            usable: usable.len(),
        });
    }
    let mean = |ps: &[PairEstimate]| ps.iter().map(|p| p.order).sum::<f64>() / ps.len() as f64;
    let tail = &pairs[pairs.len().saturating_sub(3)..];
    Ok(OrderReport {
        source,
        order_p,
        mean_order: mean(&pairs),
        tail_mean_order: mean(tail),
        usable_steps: usable.iter().map(|s| s.n).collect(),
        theoretical_order: r,
        theoretical_constant: 1.0 / r as f64,
        pairs,
    })
}

fn pair_estimate(e: &BigReal, next: &BigReal, n: usize, r: u32) -> PairEstimate {
    let log_e = e.log10_abs().expect("usable samples are nonzero");
    let log_next = next.log10_abs().expect("usable samples are nonzero");
    let magnitude = 10f64.powf(log_next - r as f64 * log_e);
    // e^r keeps the sign of e because r is odd.
    let negative = e.is_negative() != next.is_negative();
    PairEstimate {
        n,
        mag10: e.mag10().expect("nonzero"),
        next_mag10: next.mag10().expect("nonzero"),
        order: log_next / log_e,
        constant: if negative { -magnitude } else { magnitude },
    }
}

/// Order statistics with the step deltas standing in for errors.
///
/// `δ_n` is judged against the precision of step `n`.
pub fn estimate_order(trace: &IterationTrace) -> Result<OrderReport, AnalysisError> {
    let samples: Vec<ErrorSample> = trace
        .steps
        .iter()
        .filter_map(|s| {
            s.delta.as_ref().map(|d| ErrorSample {
                n: s.index,
                floor_digits: s.digits_used,
                value: d.clone(),
            })
        })
        .collect();
    estimate_from_samples(ErrorSource::Delta, trace.config.order_p, &samples)
}

/// Order statistics with true signed errors `e_n = x_n - reference`.
///
/// `reference` needs at least ten more significant digits than the trace
/// target. `e_n` is judged against the precision of step `n + 1`, the same
/// floor as the delta `δ_{n+1} ≈ e_n`; the seed is exact and so always
/// qualifies.
pub fn true_error_report(
    trace: &IterationTrace,
    reference: &BigReal,
) -> Result<OrderReport, AnalysisError> {
    let need = trace.config.target_digits as u64 + 10;
    let have = reference.significant_digits();
    if have < need {
        return Err(AnalysisError::ReferenceTooCoarse { have, need });
    }
    let ctx = PrecisionContext::new(have as usize + 10);
    let samples: Vec<ErrorSample> = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| ErrorSample {
            n: s.index,
            floor_digits: trace.steps.get(i + 1).unwrap_or(s).digits_used,
            value: s.x.sub(reference, &ctx),
        })
        .collect();
    estimate_from_samples(ErrorSource::True, trace.config.order_p, &samples)
}

pub const REPORT_HEADER: &str = "n,delta_mag10,order_est,const_est";

fn push_row(out: &mut String, p: &PairEstimate) {
    writeln!(
        out,
        "{},{},{:.5e},{:.5e}",
        p.n, p.mag10, p.order, p.constant
    )
    .expect("write to String");
}

/// One row per usable pair: `n`, `mag10(e_n)`, `p̂_n`, `ĉ_n`, floats at six
/// significant digits.
pub fn report_csv(report: &OrderReport) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for p in &report.pairs {
        push_row(&mut out, p);
    }
    out
}

/// Several reports in one table, led by a `source` column.
pub fn combined_csv(reports: &[&OrderReport]) -> String {
    let mut out = format!("source,{REPORT_HEADER}\n");
    for report in reports {
        for p in &report.pairs {
            out.push_str(report.source.label());
            out.push(',');
            push_row(&mut out, p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, floor_digits: usize, value: &str) -> ErrorSample {
        ErrorSample {
            n,
            floor_digits,
            value: value.parse().unwrap(),
        }
    }

    #[test]
    fn usable_threshold() {
        assert!(sample(1, 70, "1e-64").is_usable());
        assert!(!sample(1, 70, "1e-65").is_usable());
        assert!(!sample(1, 70, "0").is_usable());
        assert!(sample(1, 70, "-1e-60").is_usable());
    }

    #[test]
    fn non_consecutive_usable_steps_do_not_pair() {
        let samples = [
            sample(1, 70, "1e-14"),
            sample(2, 70, "1e-80"),
            sample(3, 2000, "1e-400"),
        ];
        let err = estimate_from_samples(ErrorSource::Delta, 2, &samples).unwrap_err();
        assert_eq!(err, AnalysisError::InsufficientSteps { usable: 2 });
    }

    #[test]
    fn synthetic_cubic_sequence() {
        // e_{n+1} = -e_n^3 / 3 exactly, starting from 1e-10.
        let ctx = PrecisionContext::new(40);
        let mut e: BigReal = "1e-10".parse().unwrap();
        let mut samples = Vec::new();
        for n in 0..4 {
            samples.push(ErrorSample {
                n,
                floor_digits: 10_000,
                value: e.clone(),
            });
            e = e.pow_int(3, &ctx).div_int(3, &ctx).unwrap().neg();
        }
        let report = estimate_from_samples(ErrorSource::True, 1, &samples).unwrap();
        assert_eq!(report.pairs.len(), 3);
        for c in report.constant_estimates() {
            assert!((c + 1.0 / 3.0).abs() < 1e-12, "{c}");
        }
        assert_eq!(report.constant_sign_matches(), Some(true));
        assert!(report.order_within(0.2));
    }

    #[test]
    fn csv_formatting() {
        let samples = [
            sample(1, 70, "5.169038433915418e-14"),
            sample(2, 350, "7.369842844775034e-68"),
        ];
        let report = estimate_from_samples(ErrorSource::Delta, 2, &samples).unwrap();
        let csv = report_csv(&report);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(REPORT_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1");
        assert_eq!(row[1], "-14");
        let order: f64 = row[2].parse().unwrap();
        assert!((order - report.pairs[0].order).abs() <= 1e-5 * order);
        assert!(lines.next().is_none());
        assert!(combined_csv(&[&report]).starts_with("source,n,"));
    }
}
