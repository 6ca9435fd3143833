//! Acceptance gate: ten end-to-end criteria, one verdict line each.
//!
//! Every tolerance here is part of the project's passing contract and is
//! pinned deliberately; loosening one is a behavior change, not a cleanup.
//! Randomized criteria draw from fixed substreams so reruns are
//! bit-identical.

use quatcalc::exp_log::{
    self, exp_first_order, exp_integral_oracle, exp_limit_oracle, LogExpansionCoeffs,
};
use quatcalc::harness::{fit_loglog, rng, run_sweep, Study, SweepConfig};
use quatcalc::quaternion::split_delta;
use quatcalc::series::{
    general_first_order, general_first_order_commutator_form, leibnitz_check, second_order,
    PowerSeries,
};
use quatcalc::su2::{
    make_generators, rotation_identity_check, split_delta_su2,
};
use quatcalc::sylvester::{solve_embedding, solve_left_form, solve_right_form, SylvesterProblem};
use quatcalc::Quaternion;

const SEED: u64 = 42;
const DRAWS: usize = 1000;

fn verdict(n: usize, label: &str, ok: bool, detail: &str) {
    let state = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n} ({label}): {state} [{detail}]");
    assert!(ok, "criterion {n} ({label}) failed: {detail}");
}

fn median_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite residuals"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Horner evaluation of the exponential Taylor sum, kept local so the
/// closed form is checked against an independently written oracle.
fn taylor_exp(x: Quaternion, terms: usize) -> Quaternion {
    let mut acc = Quaternion::ONE;
    for n in (1..=terms).rev() {
        acc = Quaternion::ONE + (x * acc).scale(1.0 / n as f64);
    }
    acc
}

#[test]
fn criterion_01_sylvester_closed_form() {
    const RESIDUAL_TOL: f64 = 1e-11;
    const AGREEMENT_TOL: f64 = 1e-10;

    let mut worst_residual: f64 = 0.0;
    let mut worst_right: f64 = 0.0;
    let mut worst_embedding: f64 = 0.0;
    let mut kept = 0usize;
    let mut trial = 0u64;
    while kept < DRAWS {
        let mut rng = rng::substream(SEED, 0, trial);
        trial += 1;
        let a = rng::draw_quaternion(&mut rng, (0.1, 1.5));
        let b = rng::draw_quaternion(&mut rng, (0.1, 1.5));
        let c = rng::draw_quaternion(&mut rng, (0.1, 1.5));
        let problem = SylvesterProblem::new(a, b, c);
        // The singular set has measure zero, but finite draws can land
        // near it; those are outside the nonsingular contract.
        if problem.denominators().d.norm() <= 10.0 * problem.singularity_threshold() {
            continue;
        }
        kept += 1;
        let x = solve_left_form(&problem).expect("kept draws are nonsingular");
        let scale = 1.0 + c.norm() + (a.norm() + b.norm()) * x.norm();
        worst_residual = worst_residual.max(problem.residual(x) / scale);

        let xr = solve_right_form(&problem).expect("kept draws are nonsingular");
        worst_right = worst_right.max((xr - x).norm() / (1.0 + x.norm()));
        let xe = solve_embedding(&problem).expect("kept draws are nonsingular");
        worst_embedding = worst_embedding.max((xe - x).norm() / (1.0 + x.norm()));
    }

    let singular = SylvesterProblem::new(Quaternion::I, Quaternion::J, Quaternion::ONE);
    let rejected = solve_left_form(&singular).is_err()
        && solve_right_form(&singular).is_err()
        && solve_embedding(&singular).is_err();

    verdict(
        1,
        "sylvester closed form",
        worst_residual <= RESIDUAL_TOL
            && worst_right <= AGREEMENT_TOL
            && worst_embedding <= AGREEMENT_TOL
            && rejected,
        &format!(
            "residual {worst_residual:.2e}, right {worst_right:.2e}, \
             embedding {worst_embedding:.2e}, singular rejected {rejected}"
        ),
    );
}

#[test]
fn criterion_02_exponential_triangle() {
    const TRIANGLE_TOL: f64 = 1e-13;
    const SLOPE_TOL: f64 = 0.05;

    // Closed form against the Taylor oracle inside |x| <= 3.
    let mut worst_rel: f64 = 0.0;
    for trial in 0..500u64 {
        let mut rng = rng::substream(SEED, 1, trial);
        let x = rng::draw_quaternion(&mut rng, (0.01, 2.8));
        let truth = exp_log::exp(x).expect("bounded draw");
        worst_rel = worst_rel.max((truth - taylor_exp(x, 40)).norm() / truth.norm());
    }

    // The (1 + x/n)^n oracle converges at first order in 1/n.
    let ns: Vec<f64> = (4..=14).map(|k| (1u64 << k) as f64).collect();
    let mut medians = Vec::with_capacity(ns.len());
    for &n in &ns {
        let mut errs = Vec::with_capacity(16);
        for trial in 0..16u64 {
            let mut rng = rng::substream(SEED, 2, trial);
            let x = rng::draw_quaternion(&mut rng, (0.1, 2.5));
            let truth = exp_log::exp(x).expect("bounded draw");
            errs.push((exp_limit_oracle(x, n as u64) - truth).norm() / truth.norm());
        }
        medians.push(median_of(errs));
    }
    let (slope, _) = fit_loglog(&ns, &medians);

    verdict(
        2,
        "exponential triangle",
        worst_rel <= TRIANGLE_TOL && (slope + 1.0).abs() <= SLOPE_TOL,
        &format!("taylor rel err {worst_rel:.2e}, limit slope {slope:.4}"),
    );
}

#[test]
fn criterion_03_exp_first_order() {
    const QUADRATURE_TOL: f64 = 1e-10;
    const QUADRATURE_PANELS: usize = 64;

    let outcome =
        run_sweep(Study::ExpFirst, &SweepConfig::default()).expect("default config is valid");

    // Both expressions are linear in delta, so the difference compares
    // the closed-form coefficients against the quadrature directly.
    let mut worst_quadrature: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = rng::substream(SEED, 3, trial);
        let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
        let delta = rng::draw_direction(&mut rng);
        let gap = (exp_integral_oracle(x, delta, QUADRATURE_PANELS) - exp_first_order(x, delta))
            .norm();
        worst_quadrature = worst_quadrature.max(gap);
    }

    verdict(
        3,
        "exp first-order expansion",
        outcome.report.pass && worst_quadrature <= QUADRATURE_TOL,
        &format!(
            "slope {:.4} (want {} +/- {}), quadrature {worst_quadrature:.2e}",
            outcome.report.slope, outcome.report.expected_slope, outcome.report.tolerance
        ),
    );
}

#[test]
fn criterion_04_log_expansion() {
    const TIE_TOL: f64 = 1e-14;

    let outcome =
        run_sweep(Study::LogFirst, &SweepConfig::default()).expect("default config is valid");

    let mut worst_tie: f64 = 0.0;
    for i in 0..300 {
        let r = 0.01 + (3.0 - 0.01) * (i as f64 + 0.5) / 300.0;
        let k = LogExpansionCoeffs::at(r);
        worst_tie = worst_tie
            .max((k.a - k.c - 1.0).abs())
            .max((k.b - r / 2.0).abs());
    }

    verdict(
        4,
        "log expansion",
        outcome.report.pass && worst_tie <= TIE_TOL,
        &format!("slope {:.4}, coefficient ties {worst_tie:.2e}", outcome.report.slope),
    );
}

#[test]
fn criterion_05_general_first_order() {
    const FORM_TOL: f64 = 1e-13;
    const MONOMIAL_TOL: f64 = 1e-12;

    let real = run_sweep(Study::GeneralFirst, &SweepConfig::default())
        .expect("default config is valid");
    let quat = run_sweep(
        Study::GeneralFirst,
        &SweepConfig { quaternion_coeffs: true, ..SweepConfig::default() },
    )
    .expect("config is valid");

    // The split form and the commutator form agree pointwise.
    let mut worst_form: f64 = 0.0;
    for trial in 0..DRAWS {
        let mut rng = rng::substream(SEED, 4, trial as u64);
        let f = rng::draw_series(&mut rng, 8, trial % 2 == 1);
        let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
        let delta = rng::draw_direction(&mut rng);
        let a = general_first_order(&f, x, delta);
        let b = general_first_order_commutator_form(&f, x, delta).expect("r >= 0.1");
        worst_form = worst_form.max((a - b).max_norm() / (1.0 + a.norm()));
    }

    // Brute force over the n first-order words of (x + delta)^n. Moderate
    // base points keep the absolute tolerance meaningful at n = 10.
    let mut worst_monomial: f64 = 0.0;
    for trial in 0..200u64 {
        let mut rng = rng::substream(SEED, 5, trial);
        let x = rng::draw_quaternion(&mut rng, (0.1, 1.2));
        let delta = rng::draw_direction(&mut rng);
        let mut powers = vec![Quaternion::ONE];
        for p in 1..10 {
            powers.push(powers[p - 1] * x);
        }
        for n in 1..=10usize {
            let mut words = Quaternion::ZERO;
            for p in 0..n {
                words = words + powers[p] * delta * powers[n - 1 - p];
            }
            let f = PowerSeries::monomial(Quaternion::ONE, n).expect("within the degree cap");
            worst_monomial =
                worst_monomial.max((general_first_order(&f, x, delta) - words).max_norm());
        }
    }

    verdict(
        5,
        "general first order",
        real.report.pass
            && quat.report.pass
            && worst_form <= FORM_TOL
            && worst_monomial <= MONOMIAL_TOL,
        &format!(
            "slopes {:.4}/{:.4}, forms {worst_form:.2e}, monomials {worst_monomial:.2e}",
            real.report.slope, quat.report.slope
        ),
    );
}

#[test]
fn criterion_06_second_order() {
    const EXACTNESS_TOL: f64 = 1e-13;

    let outcome =
        run_sweep(Study::GeneralSecond, &SweepConfig::default()).expect("default config is valid");

    // Degree <= 2 terminates the expansion, even at order-one delta and
    // with left-quaternion coefficients.
    let mut worst_exact: f64 = 0.0;
    for trial in 0..500 {
        let mut rng = rng::substream(SEED, 6, trial as u64);
        let f = rng::draw_series(&mut rng, 2, trial % 2 == 1);
        let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
        let delta = rng::draw_direction(&mut rng);
        let truth = f.eval(x + delta) - f.eval(x);
        let predicted = general_first_order(&f, x, delta)
            + second_order(&f, x, delta).expect("r >= 0.1");
        worst_exact = worst_exact.max((truth - predicted).norm() / (1.0 + truth.norm()));
    }
    // Linear series: the correction itself must vanish identically.
    let linear = PowerSeries::new(vec![Quaternion::J, Quaternion::ONE]).expect("degree 1");
    let x = Quaternion::new(0.4, 0.7, -0.2, 0.5);
    let delta = Quaternion::new(0.3, 0.1, 0.8, -0.4);
    worst_exact = worst_exact.max(
        second_order(&linear, x, delta).expect("r >= 0.1").norm(),
    );

    verdict(
        6,
        "second order",
        outcome.report.pass && worst_exact <= EXACTNESS_TOL,
        &format!(
            "slope {:.4} (want {} +/- {}), quadratic exactness {worst_exact:.2e}",
            outcome.report.slope, outcome.report.expected_slope, outcome.report.tolerance
        ),
    );
}

#[test]
fn criterion_07_leibnitz_rule() {
    const TOL: f64 = 1e-12;

    let mut worst: f64 = 0.0;
    for trial in 0..DRAWS {
        let mut rng = rng::substream(SEED, 7, trial as u64);
        let f = rng::draw_series(&mut rng, 6, trial % 2 == 1);
        let g = rng::draw_series(&mut rng, 6, false);
        let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
        let delta = rng::draw_direction(&mut rng);
        let check = leibnitz_check(&f, &g, x, delta).expect("real G by construction");
        worst = worst.max(check.residual / check.scale);
    }

    verdict(7, "leibnitz rule", worst <= TOL, &format!("residual {worst:.2e}"));
}

#[test]
fn criterion_08_commutation_and_projectors() {
    const TOL: f64 = 1e-13;

    let mut worst: f64 = 0.0;
    for trial in 0..DRAWS {
        let mut rng = rng::substream(SEED, 8, trial as u64);
        let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
        let delta = rng::draw_direction(&mut rng);
        let u = x.polar_decompose().expect("r >= 0.1").u;
        let split = split_delta(delta, u).expect("unit direction");
        let pair_scale = (1.0 + x.norm()) * (1.0 + delta.norm());
        let delta_scale = 1.0 + delta.norm();

        // The parallel channel commutes, the perpendicular one conjugates.
        worst = worst
            .max((x * split.parallel - split.parallel * x).max_norm() / pair_scale)
            .max((split.perp * x - x.conjugate() * split.perp).max_norm() / pair_scale)
            .max((split.parallel + split.perp - delta).max_norm() / delta_scale);

        // Projector behavior: re-splitting changes nothing.
        let again_par = split_delta(split.parallel, u).expect("unit direction");
        let again_perp = split_delta(split.perp, u).expect("unit direction");
        worst = worst
            .max(again_par.perp.max_norm() / delta_scale)
            .max(again_perp.parallel.max_norm() / delta_scale)
            .max((again_par.parallel - split.parallel).max_norm() / delta_scale)
            .max((again_perp.perp - split.perp).max_norm() / delta_scale);
    }

    verdict(
        8,
        "commutation and projectors",
        worst <= TOL,
        &format!("residual {worst:.2e}"),
    );
}

#[test]
fn criterion_09_su2() {
    const IDENTITY_TOL: f64 = 1e-13;

    let (j1, j2, j3) = make_generators();
    let generator_residual = (j1.commutator(j2) - j3)
        .max_norm()
        .max((j2.commutator(j3) - j1).max_norm())
        .max((j3.commutator(j1) - j2).max_norm());

    let mut rotation_residual: f64 = 0.0;
    for i in 0..=40 {
        let theta = -10.0 + 0.5 * i as f64;
        rotation_residual = rotation_residual.max(rotation_identity_check(theta));
    }

    let mut split_residual: f64 = 0.0;
    for trial in 0..DRAWS {
        let mut rng = rng::substream(SEED, 9, trial as u64);
        let x = rng::draw_su2(&mut rng, (0.1, 3.0));
        let delta = rng::draw_su2_direction(&mut rng);
        let split = split_delta_su2(x, delta).expect("r >= 0.1");
        let m = x.matrix();
        let dm = delta.matrix();
        let scale = 1.0 + dm.max_norm();
        let nested = m.commutator(m.commutator(dm)).scale(-1.0 / (x.r() * x.r()));
        split_residual = split_residual
            .max((nested - split.perp.matrix()).max_norm() / scale)
            .max(m.commutator(split.parallel.matrix()).max_norm() / scale)
            .max((split.parallel.matrix() + split.perp.matrix() - dm).max_norm() / scale);
    }

    let outcome =
        run_sweep(Study::Su2First, &SweepConfig::default()).expect("default config is valid");

    verdict(
        9,
        "su2 realization",
        generator_residual == 0.0
            && rotation_residual <= IDENTITY_TOL
            && split_residual <= IDENTITY_TOL
            && outcome.report.pass,
        &format!(
            "generators {generator_residual:.1e}, rotations {rotation_residual:.2e}, \
             splits {split_residual:.2e}, slope {:.4}",
            outcome.report.slope
        ),
    );
}

#[test]
fn criterion_10_identity_suite_determinism() {
    let exe = env!("CARGO_BIN_EXE_quatcalc");
    let run = || {
        std::process::Command::new(exe)
            .args(["identity-suite", "--seed", "42", "--format", "csv"])
            .output()
            .expect("binary launches")
    };
    let first = run();
    let second = run();
    let ok = first.status.success()
        && second.status.success()
        && !first.stdout.is_empty()
        && first.stdout == second.stdout;

    verdict(
        10,
        "identity-suite determinism",
        ok,
        &format!(
            "exit {:?}/{:?}, {} bytes, identical {}",
            first.status.code(),
            second.status.code(),
            first.stdout.len(),
            first.stdout == second.stdout
        ),
    );
}
