//! Reconstruct each multiplicative step as an additive gradient step with a
//! per-coordinate step size: y·S(z) = y − ρz with ρ = y·θ, θ ∈ (0, 1/2].
//!
//! Run with: cargo run --example step_equivalence

use ssopga::sso::SlidingSigmoid;

fn main() {
    let op = SlidingSigmoid::new(0.5).unwrap();
    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>14} {:>14}",
        "y", "z", "theta", "rho", "y*S(z)", "y - rho*z"
    );
    for (y, z) in [(1.0, 1.0), (4.0, -2.0), (0.25, 0.1), (9.0, 7.0), (2.0, 0.0)] {
        let eq = op.equivalent_step(y, z).unwrap();
        let multiplicative = y * op.apply(z).unwrap();
        let additive = y - eq.rho * z;
        println!(
            "{y:>8.3} {z:>8.3} {:>12.8} {:>12.8} {multiplicative:>14.10} {additive:>14.10}",
            eq.theta, eq.rho
        );
        assert!((multiplicative - additive).abs() <= 1e-12 * y.max(1.0));
    }
    println!("\nboth columns agree to machine precision; the multiplicative");
    println!("update is gradient descent whose step size rides the iterate.");
}
