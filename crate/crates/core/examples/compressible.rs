//! Compressible constituents: the finite-difference Newton solver, its
//! agreement with the closed form when the compressibilities vanish, and
//! the drift of the boundary layer as the solid becomes compressible.

use porous_second_gradient::halfspace::{closed_form_profile, solve, validate_profile};
use porous_second_gradient::{fixtures, Track};

fn main() -> porous_second_gradient::Result<()> {
    let spec = fixtures::salt_brine_spec();
    let exact = closed_form_profile(&spec)?;
    let numeric = solve(&spec, Track::Compressible)?;
    let max_dev = exact
        .rho_s
        .iter()
        .zip(&numeric.rho_s)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!(
        "c = 0: Newton took {} iteration(s), max |rho_s - closed form| = {max_dev:.3e} kg/m3",
        numeric.iterations
    );

    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>12}",
        "c_s", "delta_rho_s", "x0", "rho_s(inf)", "residual"
    );
    for c_s in [0.0, 1e-3, 2e-3, 5e-3] {
        let mut spec = spec.clone();
        spec.material.c_s = c_s;
        let profile = solve(&spec, Track::Compressible)?;
        println!(
            "{c_s:>8.0e} {:>14.8} {:>14.6e} {:>14.6} {:>12.2e}",
            profile.delta_rho_s,
            profile.x0,
            profile.far_field.rho_s,
            validate_profile(&profile).max_residual()
        );
    }
    Ok(())
}
