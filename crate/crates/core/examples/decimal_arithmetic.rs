//! The decimal type on its own: explicit precision, truncation toward zero,
//! parsing and formatting.
//!
//! ```bash
//! cargo run --example decimal_arithmetic
//! ```

use odd_atan::{BigReal, PrecisionContext, Rational};

fn main() {
    let ctx = PrecisionContext::with_guard(30, 0);
    let one = BigReal::one();
    let three = BigReal::from(3u64);
    let third = one.div(&three, &ctx).unwrap();
    println!("1/3        = {}", third.format_decimal(30));
    println!(
        "3 * (1/3)  = {}",
        third.mul(&three, &ctx).format_decimal(30)
    );
    println!(
        "-2/3       = {}",
        BigReal::from(-2i64)
            .div(&three, &ctx)
            .unwrap()
            .format_decimal(30)
    );

    let x: BigReal = "1.0000000001".parse().unwrap();
    println!("x^1000     = {}", x.pow_int(1000, &ctx).format_decimal(30));
    println!(
        "tiny       = {}",
        "12345e-40".parse::<BigReal>().unwrap().format_decimal(8)
    );
    println!("x - 1      = {}", x.sub(&one, &ctx).format_decimal(5));

    let q: Rational = "22/7".parse().unwrap();
    println!("22/7       = {}", q.to_bigreal(&ctx).format_decimal(30));

    for bad in ["1.2.3", "1e", "--1"] {
        println!("parse {bad:<6} -> {}", bad.parse::<BigReal>().unwrap_err());
    }
}
