//! Drives the verification harness as a library: one convergence study,
//! its fitted slope, and the per-scale medians behind it.

use quatcalc::harness::{run_sweep, Study, SweepConfig};

fn main() -> quatcalc::Result<()> {
    let config = SweepConfig {
        seed: 7,
        trials_per_scale: 80,
        quaternion_coeffs: true,
        ..SweepConfig::default()
    };

    for study in [Study::GeneralFirst, Study::GeneralSecond] {
        let outcome = run_sweep(study, &config)?;
        let report = outcome.report;
        println!("{}:", report.study);
        for (scale, median) in config.scales.iter().zip(&report.per_scale_median) {
            println!("  scale {scale:<8} median residual {median:.3e}");
        }
        println!(
            "  slope {:.4} (expected {} within {}) -> {}",
            report.slope,
            report.expected_slope,
            report.tolerance,
            if report.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
