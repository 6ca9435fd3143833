//! Second-order correction: pushes the truncation error to cubic order
//! and reproduces quadratic polynomials exactly.

use quatcalc::series::{general_first_order, second_order, PowerSeries};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    let f = PowerSeries::from_real_coeffs(&[0.5, -2.0, 1.0, 3.0, 0.0, -1.0])?;
    let x = Quaternion::new(0.4, 0.8, 0.6, -0.5);
    let delta = Quaternion::new(-0.1, 0.4, 0.2, 0.3);

    println!("truncation error, first order alone vs first plus second:");
    for scale in [1e-1, 1e-2, 1e-3] {
        let d = delta.scale(scale);
        let truth = f.eval(x + d) - f.eval(x);
        let first = general_first_order(&f, x, d);
        let both = first + second_order(&f, x, d)?;
        println!(
            "  |delta| ~ {scale:.0e}   first: {:.3e}   first+second: {:.3e}",
            (truth - first).norm(),
            (truth - both).norm()
        );
    }

    // Degree two terminates the expansion: no remainder even at a
    // displacement as large as the base point itself.
    let g = PowerSeries::new(vec![
        Quaternion::new(1.0, 0.0, 2.0, 0.0),
        Quaternion::from_real(-3.0),
        Quaternion::K,
    ])?;
    let big = Quaternion::new(0.9, -0.7, 1.1, 0.2);
    let truth = g.eval(x + big) - g.eval(x);
    let both = general_first_order(&g, x, big) + second_order(&g, x, big)?;
    println!(
        "\nquadratic series, |delta| = {:.2}: remainder = {:.3e}",
        big.norm(),
        (truth - both).norm()
    );
    Ok(())
}
