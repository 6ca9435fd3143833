//! Recentring: a base point too close to the real axis has no usable
//! polar frame, but shifting the expansion center restores one.

use quatcalc::series::{recenter, PowerSeries};
use quatcalc::{Error, Quaternion};

fn main() -> quatcalc::Result<()> {
    let f = PowerSeries::from_real_coeffs(&[0.0, -2.0, 0.0, 1.0])?;
    // H(x) = F(x - x_f) expanded in the shifted variable y = x - x_f.
    let x_f = Quaternion::new(1.0, 0.0, 0.0, -2.0);
    let x = Quaternion::new(1.2, 0.3, 0.0, 0.0);
    let delta = Quaternion::new(0.1, -0.2, 0.3, 0.1);

    println!("y = x - x_f = {}", x - x_f);
    println!("\ntruncation error of the recentred expansion ~ |delta|^2:");
    for scale in [1e-1, 1e-2, 1e-3] {
        let d = delta.scale(scale);
        let truth = f.eval(x + d - x_f) - f.eval(x - x_f);
        let err = (truth - recenter(&f, x_f, x, d)?).norm();
        println!("  |delta| ~ {scale:.0e}   error = {err:.3e}");
    }

    // Centering on the point itself leaves y = 0: no direction to split
    // against, and the operator says so instead of guessing one.
    match recenter(&f, x, x, delta) {
        Err(Error::NearRealAxis) => println!("\nrecentring at x itself rejected: near real axis"),
        other => println!("\nunexpected outcome {other:?}"),
    }
    Ok(())
}
