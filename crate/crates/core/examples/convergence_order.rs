//! Measured order and error constant for P = 1..4, from step deltas and
//! from true errors against a longer reference run.
//!
//! ```bash
//! cargo run --release --example convergence_order -- 5000
//! ```

use odd_atan::analysis::{combined_csv, estimate_order, true_error_report};
use odd_atan::{iterate, ArctanArg, IterationConfig};

fn main() {
    let digits: usize = std::env::args()
        .nth(1)
        .map_or(3000, |s| s.parse().expect("digits"));
    for p in 1..=4u32 {
        let t = ArctanArg::unit_fraction(1);
        let trace = iterate(&IterationConfig::new(t.clone(), p, digits)).expect("converges");
        let reference = iterate(&IterationConfig::new(t, p, digits + 50)).expect("converges");
        let deltas = estimate_order(&trace).expect("enough steps");
        let errors = true_error_report(&trace, &reference.value).expect("fine reference");
        println!(
            "P={p}: order {:.4} (expected {}), constant {:+.6} (expected {:+.6})",
            errors.tail_mean_order,
            errors.theoretical_order,
            errors.last_constant(),
            errors.expected_sign() * errors.theoretical_constant,
        );
        print!("{}", combined_csv(&[&deltas, &errors]));
    }
}
