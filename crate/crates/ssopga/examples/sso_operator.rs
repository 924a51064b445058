//! Evaluate the sliding multiplier across its band for a few sliding
//! parameters: values, derivative, and the envelope slack.
//!
//! Run with: cargo run --example sso_operator

use ssopga::sso::SlidingSigmoid;

fn main() {
    for alpha in [0.0, 0.5, 1.0, 3.0] {
        let op = SlidingSigmoid::new(alpha).unwrap();
        let (lo, hi) = op.bounds();
        println!("alpha = {alpha}: multiplier band ({lo:.6}, {hi:.6})");
        println!("{:>8} {:>12} {:>12} {:>12}", "z", "S(z)", "S'(z)", "slack");
        for z in [-10.0, -2.0, -0.5, 0.0, 0.5, 2.0, 10.0] {
            let v = op.apply(z).unwrap();
            let d = op.derivative(z);
            let s = op.envelope_slack(z).unwrap();
            println!("{z:>8.2} {v:>12.6} {d:>12.6} {s:>12.6}");
        }
        println!();
    }
    println!("every curve passes through (0, 1): descent direction is free,");
    println!("positive gradients shrink a coordinate, negative ones grow it.");
}
