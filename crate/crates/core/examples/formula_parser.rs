//! Parsing, validating and evaluating Machin-like formulas, including ones
//! that are not builtin.
//!
//! ```bash
//! cargo run --release --example formula_parser -- "5*atan(1/7) + 2*atan(3/79)"
//! ```

use odd_atan::machin::{compute_pi, parse_formula, validate};

fn main() {
    let mut inputs = vec![
        "4*atan(1/5) - atan(1/239)".to_string(),
        "12*atan(1/18) + 8*atan(1/57) - 5*atan(1/239)".to_string(),
        "atan(1/2) + atan(1/5) + atan(1/8)".to_string(),
        "atan(1/2)".to_string(),
        "atan(1/2) + atan(1/2)".to_string(),
        "4*atan(1/5) -".to_string(),
    ];
    inputs.extend(std::env::args().skip(1));
    for input in &inputs {
        match parse_formula(input) {
            Err(e) => println!("{input:<46} rejected: {e}"),
            Ok(formula) => {
                let f = formula.to_string();
                let valid = validate(&formula, 50).expect("terms converge");
                if valid {
                    let pi = compute_pi(&formula, 2, 60).expect("converges");
                    println!("{f:<46} pi = {}", pi.format_decimal(60));
                } else {
                    println!("{f:<46} does not sum to pi/4");
                }
            }
        }
    }
}
