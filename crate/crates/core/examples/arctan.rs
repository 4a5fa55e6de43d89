//! arctan(t) for decimal and fractional arguments at a chosen order.
//!
//! ```bash
//! cargo run --release --example arctan -- 1/239 200 3
//! ```

use odd_atan::{arctan, ArctanArg};

fn main() {
    let mut args = std::env::args().skip(1);
    let t: ArctanArg = args
        .next()
        .unwrap_or_else(|| "1/2".into())
        .parse()
        .expect("t as decimal or p/q");
    let digits: usize = args.next().map_or(60, |s| s.parse().expect("digits"));
    let order_p: u32 = args.next().map_or(2, |s| s.parse().expect("order P"));

    let value = arctan(&t, order_p, digits).expect("iteration converges");
    println!("arctan({t}) = {}", value.format_decimal(digits));

    // Odd symmetry and the large-argument branch.
    for s in ["-0.5", "3", "1e-12"] {
        let t: ArctanArg = s.parse().unwrap();
        println!(
            "arctan({s}) = {}",
            arctan(&t, order_p, 30).unwrap().format_decimal(30)
        );
    }
}
