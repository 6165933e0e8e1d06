//! At fixed opposite detuning the excitation probability is periodic in the
//! entrance time with period pi / delta, a direct signature that the two
//! paths accumulate phase at the rate of the detuning difference.
//!
//! Run with `cargo run --example entrance_time_periodicity`.

use ramsey::analysis::periodicity_check;
use ramsey::analytic::{p12_opposite, OppositeDetuningParams};
use std::f64::consts::{FRAC_PI_2, PI};

fn main() {
    let base = OppositeDetuningParams {
        detuning: 2.0,
        rabi: FRAC_PI_2,
        tau: 1.0,
        gap: 5.0,
        entrance: 0.0,
    };
    let period = PI / base.detuning;

    println!(
        "P12 vs entrance time at delta = {} (expected period pi/delta = {period:.6}):\n",
        base.detuning
    );
    for i in 0..=24 {
        let t0 = i as f64 * period / 8.0;
        let p = p12_opposite(&OppositeDetuningParams {
            entrance: t0,
            ..base
        });
        let bar = "#".repeat((p * 40.0).round() as usize);
        println!("t0 = {t0:>7.4}  {p:>8.5}  {bar}");
    }

    println!("\nResidual of P12(t0 + pi/delta) - P12(t0) over several periods:");
    for delta in [0.5, 2.0, 5.0] {
        let report = periodicity_check(
            &OppositeDetuningParams {
                detuning: delta,
                ..base
            },
            200,
        )
        .unwrap();
        println!(
            "  delta = {delta:>4}: period {:>9.6}, max residual {:.2e}",
            report.period, report.max_residual
        );
    }
}
