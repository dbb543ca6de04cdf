//! The conformable fractional derivative obeys the ordinary calculus rules
//! (linearity, product, quotient) and the power rule picks up the order:
//! numerically checked here at a few points and orders.
//!
//! ```bash
//! cargo run --example conformable_calculus
//! ```

use znnqp::numkit::conformable_deriv;

fn main() -> znnqp::Result<()> {
    let f = |x: f64| x.sin() + 2.0;
    let g = |x: f64| 0.5 * x * x + 1.0;
    println!(
        "{:>5} {:>6} {:>13} {:>13} {:>13}",
        "t", "alpha", "power rule", "product rule", "quotient rule"
    );
    for &(t, alpha) in &[(0.5, 0.3), (1.0, 0.7), (2.0, 0.5), (4.0, 1.0)] {
        let c = 3.0;
        let power = conformable_deriv(|x| x.powf(c), t, alpha)? - c * t.powf(c - alpha);
        let product = conformable_deriv(|x| f(x) * g(x), t, alpha)?
            - (f(t) * conformable_deriv(g, t, alpha)? + g(t) * conformable_deriv(f, t, alpha)?);
        let quotient = conformable_deriv(|x| f(x) / g(x), t, alpha)?
            - (g(t) * conformable_deriv(f, t, alpha)? - f(t) * conformable_deriv(g, t, alpha)?)
                / (g(t) * g(t));
        println!("{t:>5.1} {alpha:>6.1} {power:>13.2e} {product:>13.2e} {quotient:>13.2e}");
    }
    println!("\norder 1 recovers the classical derivative:");
    let d = conformable_deriv(|x| x.sin(), 1.0, 1.0)?;
    println!(
        "  d/dt sin(t) at t=1: {d:.12} (cos(1) = {:.12})",
        1.0f64.cos()
    );
    Ok(())
}
