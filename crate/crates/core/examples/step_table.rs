//! Replays the quintic (P = 2) run for arctan(1) from the seed
//! 0.7853981633975, printing the digits and step size of every step.
//!
//! ```bash
//! cargo run --release -p odd-atan --example step_table            # 2000 digits
//! cargo run --release -p odd-atan --example step_table -- 1093740 10 # full eight-step run
//! ```
//!
//! The second form reproduces the million-digit schedule
//! 70, 350, ..., 1093750, 1093750 and takes a long time.

use std::time::Instant;

use odd_atan::iterator::{precision_ladder, trace_csv};
use odd_atan::{iterate, ArctanArg, BigReal, IterationConfig};

fn main() {
    let target: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("target digits"))
        .unwrap_or(2000);
    let seed: BigReal = "0.7853981633975".parse().unwrap();
    let guard: usize = std::env::args()
        .nth(2)
        .map(|s| s.parse().unwrap())
        .unwrap_or(0);
    let cfg = IterationConfig::new(ArctanArg::Real(BigReal::one()), 2, target)
        .with_seed(seed)
        .with_guard(guard);
    println!("ladder: {:?}", precision_ladder(&cfg));

    let start = Instant::now();
    let trace = iterate(&cfg).expect("converges");
    print!("{}", trace_csv(&trace));
    println!("x = {}", trace.value.format_decimal(40.min(target)));
    println!("{} steps in {:.2?}", trace.steps.len() - 1, start.elapsed());
}
