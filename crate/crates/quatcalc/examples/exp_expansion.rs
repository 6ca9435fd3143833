//! Exponential of a quaternion: closed form, both oracles, and the
//! first-order expansion in a non-commuting displacement.

use quatcalc::exp_log::{exp, exp_first_order, exp_integral_oracle, exp_limit_oracle};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    let x = Quaternion::new(0.3, 1.1, -0.4, 0.8);
    let ex = exp(x)?;
    println!("x      = {x}");
    println!("exp(x) = {ex}");

    println!("\n(1 + x/n)^n error falls off like 1/n:");
    for k in [4u32, 8, 12, 16] {
        let err = (exp_limit_oracle(x, 1 << k) - ex).norm();
        println!("  n = 2^{k:<2}   error = {err:.3e}");
    }

    // delta does not commute with x, yet the truncation error is still
    // one order beyond the increment.
    let delta = Quaternion::new(0.2, -0.1, 0.05, 0.3);
    println!("\nfirst-order expansion, error ~ |delta|^2:");
    for scale in [1e-1, 1e-2, 1e-3] {
        let d = delta.scale(scale);
        let err = (exp(x + d)? - exp_first_order(x, d)).norm();
        println!("  |delta| ~ {:.0e}   error = {err:.3e}", d.norm());
    }

    // The quadrature oracle integrates e^{(1-s)x} delta e^{sx} over s.
    // Both sides are linear in delta, so the gap isolates the closed-form
    // coefficient functions from any truncation effect.
    let gap = (exp_integral_oracle(x, delta, 64) - exp_first_order(x, delta)).norm();
    println!("\nclosed-form coefficients vs 64-panel quadrature: {gap:.3e}");
    Ok(())
}
