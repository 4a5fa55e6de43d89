//! High-precision sine and cosine, and the cost of raising the precision.
//!
//! ```bash
//! cargo run --release --example sin_cos -- 1.2 20000
//! ```

use std::time::Instant;

use odd_atan::{sin_cos, BigReal, PrecisionContext};

fn main() {
    let mut args = std::env::args().skip(1);
    let x: BigReal = args
        .next()
        .unwrap_or_else(|| "1".into())
        .parse()
        .expect("x in [0, 2]");
    let max_digits: usize = args.next().map_or(10_000, |s| s.parse().expect("digits"));

    let p = sin_cos(&x, &PrecisionContext::new(50)).unwrap();
    println!("sin({x}) = {}", p.sin.format_decimal(50));
    println!("cos({x}) = {}", p.cos.format_decimal(50));

    let mut digits = 100;
    while digits <= max_digits {
        let ctx = PrecisionContext::new(digits);
        let start = Instant::now();
        let p = sin_cos(&x, &ctx).unwrap();
        let elapsed = start.elapsed();
        let one = p.sin.mul(&p.sin, &ctx).add(&p.cos.mul(&p.cos, &ctx), &ctx);
        let gap = one.sub(&BigReal::one(), &ctx);
        let gap = if gap.is_zero() {
            "0".to_string()
        } else {
            format!("1e{}", gap.mag10().unwrap())
        };
        println!("{digits:>7} digits {elapsed:>10.2?}  |sin^2+cos^2-1| ~ {gap}");
        digits *= 10;
    }
}
