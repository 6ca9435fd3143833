//! Randomized verification harness: convergence sweeps, identity suites,
//! slope fitting and report emission.
//!
//! Every study draws its ensemble from seeded substreams (see [`rng`]),
//! measures a residual per trial, takes the median per delta scale, and
//! fits a least-squares line through (log scale, log median). The fitted
//! slope is the measured truncation order; a study passes when it matches
//! the expected order within its tolerance.

pub mod rng;

use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exp_log::{self, ExpExpansionCoeffs, LogExpansionCoeffs};
use crate::quaternion::split_delta;
use crate::series::{
    self, general_first_order, general_first_order_commutator_form, leibnitz_check, MAX_DEGREE,
};
use crate::su2::{self, make_generators, rotation_identity_check, split_delta_su2};
use crate::sylvester::{solve_embedding, solve_left_form, solve_right_form, SylvesterProblem};

/// The convergence studies the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    ExpFirst,
    LogFirst,
    GeneralFirst,
    GeneralSecond,
    Su2First,
}

impl Study {
    pub const ALL: [Study; 5] = [
        Study::ExpFirst,
        Study::LogFirst,
        Study::GeneralFirst,
        Study::GeneralSecond,
        Study::Su2First,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Study::ExpFirst => "exp-first",
            Study::LogFirst => "log-first",
            Study::GeneralFirst => "general-first",
            Study::GeneralSecond => "general-second",
            Study::Su2First => "su2-first",
        }
    }

    /// Truncation order the study must measure.
    pub fn expected_slope(self) -> f64 {
        match self {
            Study::GeneralSecond => 3.0,
            _ => 2.0,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Study::GeneralSecond => 0.1,
            _ => 0.05,
        }
    }
}

impl std::str::FromStr for Study {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Study::ALL
            .into_iter()
            .find(|study| study.name() == s)
            .ok_or_else(|| Error::UnknownStudy(s.to_string()))
    }
}

/// Ensemble design for one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    /// Delta magnitudes, strictly decreasing.
    pub scales: Vec<f64>,
    pub trials_per_scale: usize,
    /// Imaginary-radius window for drawn base points.
    pub r_range: (f64, f64),
    /// Largest series degree drawn (series studies only).
    pub degree_cap: usize,
    /// Draw left-quaternion coefficients instead of real ones
    /// (general-first and general-second studies).
    pub quaternion_coeffs: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            scales: vec![1e-1, 1e-2, 1e-3, 1e-4],
            trials_per_scale: 50,
            r_range: (0.1, 3.0),
            degree_cap: 8,
            quaternion_coeffs: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scales.len() < 2 {
            return Err(Error::ConfigInvalid(
                "need at least two scales to fit a slope".into(),
            ));
        }
        if self.scales.iter().any(|&s| s.is_nan() || s <= 0.0) {
            return Err(Error::ConfigInvalid("scales must be positive".into()));
        }
        if self.scales.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::ConfigInvalid(
                "scales must be strictly decreasing".into(),
            ));
        }
        if self.trials_per_scale == 0 {
            return Err(Error::ConfigInvalid("trials_per_scale must be positive".into()));
        }
        if !(self.r_range.0 > 0.0 && self.r_range.0 < self.r_range.1) {
            return Err(Error::ConfigInvalid(
                "r_range must satisfy 0 < lo < hi".into(),
            ));
        }
        if !(2..=MAX_DEGREE).contains(&self.degree_cap) {
            return Err(Error::ConfigInvalid(format!(
                "degree_cap must lie in [2, {MAX_DEGREE}]"
            )));
        }
        Ok(())
    }
}

/// One measured data point, also the CSV row unit.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub study: String,
    pub scale: f64,
    pub trial: usize,
    pub residual: f64,
}

/// Fit summary for one study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub study: String,
    pub slope: f64,
    pub intercept: f64,
    pub expected_slope: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub per_scale_median: Vec<f64>,
}

/// A sweep's full outcome: the fitted report plus every raw data point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub report: ConvergenceReport,
    pub rows: Vec<SweepRow>,
}

/// Least-squares line through (ln x, ln y); returns (slope, intercept).
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let lx = x.ln();
        let ly = y.max(1e-300).ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("residuals are finite"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Residual of one trial of the given study at one delta scale.
fn trial_residual(study: Study, config: &SweepConfig, rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    match study {
        Study::ExpFirst => {
            let x = rng::draw_quaternion(rng, config.r_range);
            let delta = rng::draw_direction(rng).scale(scale);
            let truth = exp_log::exp(x + delta).expect("drawn exponents are bounded");
            (truth - exp_log::exp_first_order(x, delta)).norm()
        }
        Study::LogFirst => {
            let y = rng::draw_log_point(rng, config.r_range);
            let delta = rng::draw_direction(rng).scale(scale);
            let truth = exp_log::log(y + delta).expect("guarded log domain");
            let predicted = exp_log::log_first_order(y, delta).expect("guarded log domain");
            (truth - predicted).norm()
        }
        Study::GeneralFirst => {
            let f = rng::draw_series(rng, config.degree_cap, config.quaternion_coeffs);
            let x = rng::draw_quaternion(rng, config.r_range);
            let delta = rng::draw_direction(rng).scale(scale);
            let truth = f.eval(x + delta) - f.eval(x);
            (truth - general_first_order(&f, x, delta)).norm()
        }
        Study::GeneralSecond => {
            let f = rng::draw_series(rng, config.degree_cap, config.quaternion_coeffs);
            let x = rng::draw_quaternion(rng, config.r_range);
            let delta = rng::draw_direction(rng).scale(scale);
            let truth = f.eval(x + delta) - f.eval(x);
            let predicted = general_first_order(&f, x, delta)
                + series::second_order(&f, x, delta).expect("r_range keeps x off the real axis");
            (truth - predicted).norm()
        }
        Study::Su2First => {
            let f = rng::draw_series(rng, config.degree_cap, false);
            let x = rng::draw_su2(rng, config.r_range);
            let delta = rng::draw_su2_direction(rng).scale(scale);
            let truth = su2::matrix_series_eval(&f, (x + delta).matrix())
                .expect("real coefficients by construction")
                - su2::matrix_series_eval(&f, x.matrix()).expect("real coefficients");
            let predicted =
                su2::su2_first_order(&f, x, delta).expect("r_range keeps x off the scalar axis");
            (truth - predicted).max_norm()
        }
    }
}

/// Runs one convergence study: per-scale ensembles, median residuals, and
/// the log-log slope fit. Deterministic in (study, config).
///
/// Trials are paired across scales: trial `t` draws its ensemble member
/// (function, base point, delta direction) from `substream(seed, 0, t)`
/// at every scale, and only the delta magnitude changes. Pairing removes
/// ensemble sampling noise from the slope estimate; with independent
/// per-scale ensembles the median of 50 heavy-tailed residuals wobbles
/// too much for a four-point fit to meet a 0.05 tolerance.
pub fn run_sweep(study: Study, config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.scales.len() * config.trials_per_scale);
    let mut medians = Vec::with_capacity(config.scales.len());
    for &scale in &config.scales {
        let mut residuals = Vec::with_capacity(config.trials_per_scale);
        for trial in 0..config.trials_per_scale {
            let mut rng = rng::substream(config.seed, 0, trial as u64);
            let residual = trial_residual(study, config, &mut rng, scale);
            residuals.push(residual);
            rows.push(SweepRow {
                study: study.name().to_string(),
                scale,
                trial,
                residual,
            });
        }
        medians.push(median(&mut residuals));
    }
    let (slope, intercept) = fit_loglog(&config.scales, &medians);
    let report = ConvergenceReport {
        study: study.name().to_string(),
        slope,
        intercept,
        expected_slope: study.expected_slope(),
        tolerance: study.tolerance(),
        pass: (slope - study.expected_slope()).abs() <= study.tolerance(),
        per_scale_median: medians,
    };
    Ok(SweepOutcome { report, rows })
}

/// Result of one identity class within the suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub trials: usize,
    /// Largest scale-normalized residual observed.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Aggregate of the whole identity suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub seed: u64,
    pub identities: Vec<IdentityReport>,
    pub pass: bool,
}

/// Accumulates one identity's rows and running maximum.
struct IdentityRun<'a> {
    name: &'static str,
    tolerance: f64,
    max_residual: f64,
    trials: usize,
    rows: &'a mut Vec<SweepRow>,
}

impl<'a> IdentityRun<'a> {
    fn new(name: &'static str, tolerance: f64, rows: &'a mut Vec<SweepRow>) -> Self {
        Self { name, tolerance, max_residual: 0.0, trials: 0, rows }
    }

    fn record(&mut self, residual: f64) {
        self.rows.push(SweepRow {
            study: self.name.to_string(),
            scale: 0.0,
            trial: self.trials,
            residual,
        });
        self.max_residual = self.max_residual.max(residual);
        self.trials += 1;
    }

    fn finish(self) -> IdentityReport {
        IdentityReport {
            identity: self.name.to_string(),
            trials: self.trials,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            pass: self.max_residual <= self.tolerance,
        }
    }
}

const IDENTITY_DRAWS: usize = 1000;

/// Runs every identity-class invariant: split commutation relations,
/// projector properties, the two first-order forms, the Leibnitz rule,
/// Sylvester residuals, expansion coefficient ties, and the SU(2)
/// relations. Failures are reported, never thrown. The CSV rows carry the
/// identity name in the study column, a zero scale column, and the
/// scale-normalized residual.
pub fn run_identity_suite(seed: u64) -> (IdentitySummary, Vec<SweepRow>) {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut stream = 0u64..;
    let mut next_stream = move || stream.next().expect("unbounded");

    // Split commutation relations and projector properties.
    {
        let s = next_stream();
        let mut commutes = IdentityRun::new("split-commutes", 1e-13, &mut rows);
        let mut trials = Vec::new();
        for trial in 0..IDENTITY_DRAWS {
            let mut rng = rng::substream(seed, s, trial as u64);
            let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
            let delta = rng::draw_direction(&mut rng);
            trials.push((x, delta));
            let u = x.polar_decompose().expect("r >= 0.1").u;
            let split = split_delta(delta, u).expect("unit direction");
            let scale = (1.0 + x.norm()) * (1.0 + delta.norm());
            commutes.record((x * split.parallel - split.parallel * x).max_norm() / scale);
        }
        reports.push(commutes.finish());

        let mut conjugates = IdentityRun::new("split-conjugates", 1e-13, &mut rows);
        for &(x, delta) in &trials {
            let u = x.polar_decompose().expect("r >= 0.1").u;
            let split = split_delta(delta, u).expect("unit direction");
            let scale = (1.0 + x.norm()) * (1.0 + delta.norm());
            conjugates
                .record((split.perp * x - x.conjugate() * split.perp).max_norm() / scale);
        }
        reports.push(conjugates.finish());

        let mut reconstruction = IdentityRun::new("split-reconstruction", 1e-13, &mut rows);
        for &(x, delta) in &trials {
            let u = x.polar_decompose().expect("r >= 0.1").u;
            let split = split_delta(delta, u).expect("unit direction");
            let scale = 1.0 + delta.norm();
            reconstruction.record((split.parallel + split.perp - delta).max_norm() / scale);
        }
        reports.push(reconstruction.finish());

        let mut idempotence = IdentityRun::new("split-idempotence", 1e-13, &mut rows);
        for &(x, delta) in &trials {
            let u = x.polar_decompose().expect("r >= 0.1").u;
            let split = split_delta(delta, u).expect("unit direction");
            let again_par = split_delta(split.parallel, u).expect("unit direction");
            let again_perp = split_delta(split.perp, u).expect("unit direction");
            let scale = 1.0 + delta.norm();
            let worst = again_par
                .perp
                .max_norm()
                .max(again_perp.parallel.max_norm())
                .max((again_par.parallel - split.parallel).max_norm())
                .max((again_perp.perp - split.perp).max_norm());
            idempotence.record(worst / scale);
        }
        reports.push(idempotence.finish());
    }

    // The two published first-order forms agree pointwise.
    {
        let s = next_stream();
        let mut equivalence = IdentityRun::new("form-equivalence", 1e-13, &mut rows);
        for trial in 0..IDENTITY_DRAWS {
            let mut rng = rng::substream(seed, s, trial as u64);
            let f = rng::draw_series(&mut rng, 8, trial % 2 == 1);
            let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
            let delta = rng::draw_direction(&mut rng);
            let a = general_first_order(&f, x, delta);
            let b = general_first_order_commutator_form(&f, x, delta).expect("r >= 0.1");
            equivalence.record((a - b).max_norm() / (1.0 + a.norm()));
        }
        reports.push(equivalence.finish());
    }

    // Leibnitz rule, including left-quaternion F.
    {
        let s = next_stream();
        let mut leibnitz = IdentityRun::new("leibnitz-rule", 1e-12, &mut rows);
        for trial in 0..IDENTITY_DRAWS {
            let mut rng = rng::substream(seed, s, trial as u64);
            let f = rng::draw_series(&mut rng, 6, trial % 2 == 1);
            let g = rng::draw_series(&mut rng, 6, false);
            let x = rng::draw_quaternion(&mut rng, (0.1, 3.0));
            let delta = rng::draw_direction(&mut rng);
            let check = leibnitz_check(&f, &g, x, delta).expect("real G by construction");
            leibnitz.record(check.residual / check.scale);
        }
        reports.push(leibnitz.finish());
    }

    // Sylvester: closed form residual, right-form agreement, embedding
    // agreement. Draws whose denominators sit near the singular threshold
    // are skipped; the singular set has measure zero but finite draws can
    // land close.
    {
        let s = next_stream();
        let mut residual_run = IdentityRun::new("sylvester-left-residual", 1e-11, &mut rows);
        let mut kept = Vec::new();
        let mut trial = 0u64;
        while kept.len() < IDENTITY_DRAWS {
            let mut rng = rng::substream(seed, s, trial);
            trial += 1;
            let a = rng::draw_quaternion(&mut rng, (0.1, 1.5));
            let b = rng::draw_quaternion(&mut rng, (0.1, 1.5));
            let c = rng::draw_quaternion(&mut rng, (0.1, 1.5));
            let problem = SylvesterProblem::new(a, b, c);
            if problem.denominators().d.norm() <= 10.0 * problem.singularity_threshold() {
                continue;
            }
            let x = match solve_left_form(&problem) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let scale = 1.0 + c.norm() + (a.norm() + b.norm()) * x.norm();
            residual_run.record(problem.residual(x) / scale);
            kept.push((problem, x));
        }
        reports.push(residual_run.finish());

        let mut right_run = IdentityRun::new("sylvester-right-agreement", 1e-10, &mut rows);
        for (problem, x) in &kept {
            let xr = solve_right_form(problem).expect("nonsingular by construction");
            right_run.record((xr - *x).norm() / (1.0 + x.norm()));
        }
        reports.push(right_run.finish());

        let mut embed_run = IdentityRun::new("sylvester-embedding-agreement", 1e-10, &mut rows);
        for (problem, x) in &kept {
            let xe = solve_embedding(problem).expect("nonsingular by construction");
            embed_run.record((xe - *x).norm() / (1.0 + x.norm()));
        }
        reports.push(embed_run.finish());
    }

    // Coefficient ties on a fixed r grid.
    {
        let mut exp_ties = IdentityRun::new("exp-coefficient-ties", 1e-14, &mut rows);
        for i in 0..300 {
            let r = 0.01 + (3.0 - 0.01) * (i as f64 + 0.5) / 300.0;
            let k = ExpExpansionCoeffs::at(r);
            let sum_rule = (k.a + k.c) - (2.0 * r).sin() / (2.0 * r);
            exp_ties.record((k.a - k.c - 1.0).abs().max(sum_rule.abs()));
        }
        reports.push(exp_ties.finish());

        let mut log_ties = IdentityRun::new("log-coefficient-ties", 1e-14, &mut rows);
        for i in 0..300 {
            let r = 0.01 + (3.0 - 0.01) * (i as f64 + 0.5) / 300.0;
            let k = LogExpansionCoeffs::at(r);
            log_ties.record((k.a - k.c - 1.0).abs().max((k.b - r / 2.0).abs()));
        }
        reports.push(log_ties.finish());
    }

    // SU(2): generator relations, rotation identities, split invariants.
    {
        let mut generators = IdentityRun::new("su2-generator-relations", 0.0, &mut rows);
        let (j1, j2, j3) = make_generators();
        generators.record((j1.commutator(j2) - j3).max_norm());
        generators.record((j2.commutator(j3) - j1).max_norm());
        generators.record((j3.commutator(j1) - j2).max_norm());
        reports.push(generators.finish());

        let mut rotations = IdentityRun::new("su2-rotation-identities", 1e-13, &mut rows);
        for i in 0..=40 {
            let theta = -10.0 + 0.5 * i as f64;
            rotations.record(rotation_identity_check(theta));
        }
        reports.push(rotations.finish());

        let s = next_stream();
        let mut split_run = IdentityRun::new("su2-split-invariants", 1e-13, &mut rows);
        for trial in 0..IDENTITY_DRAWS {
            let mut rng = rng::substream(seed, s, trial as u64);
            let x = rng::draw_su2(&mut rng, (0.1, 3.0));
            let delta = rng::draw_su2_direction(&mut rng);
            let split = split_delta_su2(x, delta).expect("r >= 0.1");
            let m = x.matrix();
            let dm = delta.matrix();
            let scale = 1.0 + dm.max_norm();
            let nested = m.commutator(m.commutator(dm)).scale(-1.0 / (x.r() * x.r()));
            let worst = (nested - split.perp.matrix())
                .max_norm()
                .max(m.commutator(split.parallel.matrix()).max_norm())
                .max((split.parallel.matrix() + split.perp.matrix() - dm).max_norm());
            split_run.record(worst / scale);
        }
        reports.push(split_run.finish());
    }

    let pass = reports.iter().all(|r| r.pass);
    (IdentitySummary { seed, identities: reports, pass }, rows)
}

/// Floats in CSV output carry 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Generic CSV: `study,scale,trial,residual`.
pub fn csv_generic(rows: &[SweepRow]) -> String {
    let mut out = String::from("study,scale,trial,residual\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.study,
            format_float(row.scale),
            row.trial,
            format_float(row.residual)
        );
    }
    out
}

/// Two-column CSV for the exp/log check commands:
/// `delta_scale,residual_first_order`.
pub fn csv_delta_residual(rows: &[SweepRow]) -> String {
    let mut out = String::from("delta_scale,residual_first_order\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{}",
            format_float(row.scale),
            format_float(row.residual)
        );
    }
    out
}

/// Three-column CSV for the expand/leibnitz commands:
/// `trial,delta_scale,residual`.
pub fn csv_trial_delta_residual(rows: &[SweepRow]) -> String {
    let mut out = String::from("trial,delta_scale,residual\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.trial,
            format_float(row.scale),
            format_float(row.residual)
        );
    }
    out
}
