//! Arbitrary-precision `arctan(t)` and π from an odd-order fixed-point
//! iteration built on sine and cosine.
//!
//! The crate is organised bottom-up:
//!
//! - [`bigreal`]: decimal arbitrary-precision reals with explicit digit
//!   control.
//! - [`hptrig`]: simultaneous sine/cosine by Taylor series.
//! - [`iterator`]: the fixed-point map, its precision ladder and traces.
//! - [`machin`]: Machin-like formulas for π/4 and their evaluation.
//! - [`analysis`]: empirical order-of-convergence and error-constant
//!   estimates from traces.
//! - [`cli`]: the `odd-atan` command-line front end.
//!
//! ```
//! use odd_atan::{arctan, ArctanArg};
//!
//! let quarter_pi = arctan(&ArctanArg::unit_fraction(1), 2, 30).unwrap();
//! assert_eq!(quarter_pi.format_decimal(30), "0.785398163397448309615660845819");
//! ```

pub mod analysis;
pub mod bigreal;
pub mod cli;
pub mod hptrig;
pub mod iterator;
pub mod machin;

pub use analysis::{estimate_order, true_error_report, AnalysisError, OrderReport};
pub use bigreal::{parse_decimal, BigReal, BigRealError, PrecisionContext, Rational};
pub use hptrig::{sin_cos, SinCosPair};
pub use iterator::{arctan, iterate, ArctanArg, IterError, IterationConfig, IterationTrace};
pub use machin::{
    compute_arctan, compute_pi, parse_formula, FormulaRegistry, MachinFormula, MachinTerm,
};
