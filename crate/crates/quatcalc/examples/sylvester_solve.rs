//! Solves `a x + x b = c` three independent ways and cross-checks them.

use quatcalc::sylvester::{solve_embedding, solve_left_form, solve_right_form, SylvesterProblem};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    let a = Quaternion::new(1.0, 2.0, -1.0, 0.5);
    let b = Quaternion::new(0.5, -1.0, 3.0, 1.0);
    let c = Quaternion::new(2.0, 0.0, 1.0, -4.0);
    let problem = SylvesterProblem::new(a, b, c);

    let x = solve_left_form(&problem)?;
    println!("left form      x = {x}");
    println!("               residual |ax + xb - c| = {:.3e}", problem.residual(x));

    let xr = solve_right_form(&problem)?;
    println!("right form     |x_right - x_left| = {:.3e}", (xr - x).norm());

    let xe = solve_embedding(&problem)?;
    println!("4x4 embedding  |x_embed - x_left| = {:.3e}", (xe - x).norm());

    // a = i, b = j annihilates a two-dimensional subspace, so every
    // solver must refuse rather than divide by a vanishing denominator.
    let singular = SylvesterProblem::new(Quaternion::I, Quaternion::J, c);
    println!("\nsingular pair a = i, b = j:");
    for (name, result) in [
        ("left form ", solve_left_form(&singular)),
        ("right form", solve_right_form(&singular)),
        ("embedding ", solve_embedding(&singular)),
    ] {
        match result {
            Ok(x) => println!("  {name} unexpectedly returned {x}"),
            Err(err) => println!("  {name} rejected: {err}"),
        }
    }
    Ok(())
}
