//! The same calculus carried onto 2x2 complex matrices built from the
//! spin-1/2 generators: exact algebra, rotation identities, and the
//! first-order expansion against a matrix-series oracle.

use quatcalc::su2::{
    make_generators, matrix_series_eval, rotation_identity_check, split_delta_su2,
    su2_first_order, Su2Element,
};
use quatcalc::series::PowerSeries;
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    let (j1, j2, j3) = make_generators();
    println!("cyclic commutators close exactly on the dyadic generators:");
    println!("  |[J1,J2] - J3| = {:.1e}", (j1.commutator(j2) - j3).max_norm());
    println!("  |[J2,J3] - J1| = {:.1e}", (j2.commutator(j3) - j1).max_norm());
    println!("  |[J3,J1] - J2| = {:.1e}", (j3.commutator(j1) - j2).max_norm());

    println!("\nconjugation by exp(theta J3) rotates the (J1, J2) pair:");
    for theta in [0.5, 4.0, -9.5] {
        println!("  theta = {theta:<5} residual = {:.3e}", rotation_identity_check(theta));
    }

    // An element x0 + x.J, its displacement split, and the first-order
    // expansion of a series evaluated on matrices.
    let x = Su2Element::from_quaternion(Quaternion::new(0.5, 0.8, -0.6, 0.4));
    let delta = Su2Element::new(0.05, -0.02, 0.04, 0.03);
    let split = split_delta_su2(x, delta)?;
    println!(
        "\nsplit invariant |[x, d_par]| = {:.3e}",
        x.matrix().commutator(split.parallel.matrix()).max_norm()
    );

    let f = PowerSeries::from_real_coeffs(&[1.0, 0.0, -1.5, 0.0, 0.25])?;
    println!("\nfirst-order expansion vs the matrix series, error ~ |delta|^2:");
    for scale in [1.0, 1e-1, 1e-2] {
        let d = delta.scale(scale);
        let truth = matrix_series_eval(&f, (x + d).matrix())?
            - matrix_series_eval(&f, x.matrix())?;
        let err = (truth - su2_first_order(&f, x, d)?).max_norm();
        println!("  |delta| ~ {:.0e}   error = {err:.3e}", 0.05 * scale);
    }
    Ok(())
}
