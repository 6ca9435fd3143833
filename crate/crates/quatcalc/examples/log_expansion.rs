//! Principal-branch logarithm: round trips, the coefficient ties, the
//! first-order expansion, and what gets rejected at the branch point.

use quatcalc::exp_log::{exp, log, log_first_order, LogExpansionCoeffs};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    let y = Quaternion::new(0.8, 0.5, -1.2, 0.3);
    let x = log(y)?;
    println!("y           = {y}");
    println!("log(y)      = {x}");
    println!("exp(log y)  round-trip error = {:.3e}", (exp(x)? - y).norm());

    // The three expansion coefficients obey two exact ties: A - C = 1 and
    // B = r/2, independent of r.
    println!("\ncoefficient ties across r:");
    for r in [0.05, 0.5, 1.5, 2.9] {
        let k = LogExpansionCoeffs::at(r);
        println!(
            "  r = {r:<4}  |A - C - 1| = {:.2e}   |B - r/2| = {:.2e}",
            (k.a - k.c - 1.0).abs(),
            (k.b - r / 2.0).abs()
        );
    }

    let delta = Quaternion::new(0.1, 0.3, 0.2, -0.1);
    println!("\nfirst-order expansion, error ~ |delta|^2:");
    for scale in [1e-1, 1e-2, 1e-3] {
        let d = delta.scale(scale);
        let err = (log(y + d)? - log_first_order(y, d)?).norm();
        println!("  |delta| ~ {:.0e}   error = {err:.3e}", d.norm());
    }

    // Negative reals sit on the branch cut: the angle reaches pi and the
    // direction u is undefined, so the principal branch refuses.
    match log(Quaternion::from_real(-1.0)) {
        Ok(bad) => println!("\nlog(-1) unexpectedly returned {bad}"),
        Err(err) => println!("\nlog(-1) rejected: {err}"),
    }
    Ok(())
}
