//! π from each builtin Machin-like formula, with per-term step counts.
//!
//! ```bash
//! cargo run --release --example machin_pi -- 5000
//! ```

use std::time::Instant;

use odd_atan::machin::{compute_pi_with, FormulaRegistry, PiOptions};

fn main() {
    let digits: usize = std::env::args()
        .nth(1)
        .map_or(1000, |s| s.parse().expect("digits"));
    let registry = FormulaRegistry::builtin();
    let mut first: Option<String> = None;
    for formula in registry.iter() {
        let start = Instant::now();
        let pi = compute_pi_with(formula, 2, digits, &PiOptions::default()).expect("converges");
        let steps: Vec<String> = pi
            .traces
            .iter()
            .map(|(term, trace)| format!("q={}: {} steps", term.denom, trace.steps.len() - 1))
            .collect();
        let text = pi.value.format_decimal(digits);
        let agrees = first.get_or_insert_with(|| text.clone()) == &text;
        println!(
            "{:<12} {:<28} {:>9.2?}  {}  agrees={agrees}",
            formula.name().unwrap_or("-"),
            formula.to_string(),
            start.elapsed(),
            steps.join(", ")
        );
    }
    let text = first.unwrap();
    println!("pi = {}...{}", &text[..52], &text[text.len() - 10..]);
}
