//! Fringe metrology: locate the central peak's flanking zeros and width at
//! half maximum as functions of the entrance time, and compare the quick
//! width estimate 2 / (gap + 2 (entrance + tau)) against the exact zero.
//!
//! Run with `cargo run --example fringe_width`.

use ramsey::analysis::fringe_metrics;
use ramsey::analytic::{central_zero_estimate, p12_opposite, OppositeDetuningParams};
use std::f64::consts::{FRAC_PI_2, PI};

fn main() {
    let base = OppositeDetuningParams {
        detuning: 0.0,
        rabi: FRAC_PI_2,
        tau: 1.0,
        gap: 5.0,
        entrance: 0.0,
    };

    println!("Central-fringe metrology (tau = 1, gap = 5):\n");
    println!(
        "{:>5} {:>6} {:>13} {:>13} {:>13} {:>12} {:>10}",
        "t0", "peak", "zero+", "zero-", "fwhm", "estimate", "est/zero"
    );
    for i in 0..=8 {
        let t0 = 2.5 * i as f64;
        let curve = |delta: f64| {
            p12_opposite(&OppositeDetuningParams {
                detuning: delta,
                entrance: t0,
                ..base
            })
        };
        let m = fringe_metrics(curve, 1.0, 1e-12).unwrap();
        let estimate = central_zero_estimate(base.tau, base.gap, t0);
        println!(
            "{t0:>5.1} {:>6.3} {:>13.9} {:>13.9} {:>13.9} {estimate:>12.9} {:>10.7}",
            m.peak,
            m.first_zero_pos,
            m.first_zero_neg,
            m.fwhm,
            estimate / m.first_zero_pos
        );
    }

    println!("\nThe estimate-to-zero ratio settles on 2/pi = {:.7}:", 2.0 / PI);
    println!("the quick formula replaces the cosine zero pi/2 by 1, nothing else.");
}
