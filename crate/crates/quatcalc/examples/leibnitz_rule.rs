//! The product rule survives non-commutativity when the right factor has
//! real coefficients: the residual sits at rounding level for any delta.

use quatcalc::series::{leibnitz_check, PowerSeries};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    // F carries left-quaternion coefficients; G must be real.
    let f = PowerSeries::new(vec![
        Quaternion::new(0.0, 1.0, -1.0, 0.0),
        Quaternion::from_real(2.0),
        Quaternion::new(0.5, 0.0, 0.0, 1.5),
    ])?;
    let g = PowerSeries::from_real_coeffs(&[1.0, 0.0, -2.0, 0.5])?;
    let x = Quaternion::new(0.6, 1.0, -0.4, 0.7);
    let delta = Quaternion::new(0.2, 0.1, -0.3, 0.4);

    println!("residual of D(FG) against the product-rule form:");
    for scale in [1.0, 1e-2, 1e-4] {
        let check = leibnitz_check(&f, &g, x, delta.scale(scale))?;
        println!(
            "  |delta| ~ {scale:.0e}   residual = {:.3e}  (term magnitude {:.2})",
            check.residual, check.scale
        );
    }

    // A quaternion-coefficient right factor breaks the factorization that
    // the rule rests on, so the check refuses it.
    match leibnitz_check(&g, &f, x, delta) {
        Ok(_) => println!("\nquaternion G unexpectedly accepted"),
        Err(err) => println!("\nquaternion G rejected: {err}"),
    }
    Ok(())
}
