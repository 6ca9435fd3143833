//! First-order expansion of a power series: the displacement split, the
//! two equivalent closed forms, and the measured truncation order.

use quatcalc::quaternion::split_delta;
use quatcalc::series::{
    general_first_order, general_first_order_commutator_form, PowerSeries,
};
use quatcalc::Quaternion;

fn main() -> quatcalc::Result<()> {
    // F(x) = (1 + 2i) x^3 - j x + 4, left coefficients.
    let f = PowerSeries::new(vec![
        Quaternion::from_real(4.0),
        -Quaternion::J,
        Quaternion::ZERO,
        Quaternion::new(1.0, 2.0, 0.0, 0.0),
    ])?;
    let x = Quaternion::new(0.7, 0.9, -0.3, 0.4);
    let delta = Quaternion::new(0.3, -0.2, 0.5, 0.1);

    // The split against u: the parallel part commutes with x, the
    // perpendicular part swaps x for its conjugate.
    let polar = x.polar_decompose()?;
    let split = split_delta(delta, polar.u)?;
    println!("x = {x}");
    println!("  parallel part  {}", split.parallel);
    println!("    |x d1 - d1 x|   = {:.3e}", (x * split.parallel - split.parallel * x).max_norm());
    println!("  perp part      {}", split.perp);
    println!(
        "    |d2 x - x* d2|  = {:.3e}",
        (split.perp * x - x.conjugate() * split.perp).max_norm()
    );

    let split_form = general_first_order(&f, x, delta);
    let commutator_form = general_first_order_commutator_form(&f, x, delta)?;
    println!(
        "\nthe two closed forms differ by {:.3e}",
        (split_form - commutator_form).max_norm()
    );

    println!("\ntruncation error ~ |delta|^2:");
    for scale in [1e-1, 1e-2, 1e-3, 1e-4] {
        let d = delta.scale(scale);
        let truth = f.eval(x + d) - f.eval(x);
        let err = (truth - general_first_order(&f, x, d)).norm();
        println!("  |delta| ~ {scale:.0e}   error = {err:.3e}");
    }
    Ok(())
}
