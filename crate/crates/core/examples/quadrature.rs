//! Adaptive Gauss–Kronrod quadrature, used for the energy-balance
//! integrals of the half-space profiles.

use porous_second_gradient::quadrature::{integrate, QuadratureOptions};

fn main() -> porous_second_gradient::Result<()> {
    let options = QuadratureOptions::default();
    let cases: [(&str, fn(f64) -> f64, f64, f64, f64); 3] = [
        ("sin on [0, pi]", f64::sin, 0.0, std::f64::consts::PI, 2.0),
        (
            "exp(-x) on [0, 40]",
            |x| (-x).exp(),
            0.0,
            40.0,
            1.0 - (-40.0f64).exp(),
        ),
        ("sqrt on [0, 1]", f64::sqrt, 0.0, 1.0, 2.0 / 3.0),
    ];
    for (name, f, a, b, exact) in cases {
        let r = integrate(f, a, b, options)?;
        println!(
            "{name:<20} value {:.16} error {:.2e} (estimate {:.2e}, {} intervals, {} evaluations)",
            r.value,
            (r.value - exact).abs(),
            r.error_estimate,
            r.intervals,
            r.evaluations
        );
    }
    Ok(())
}
