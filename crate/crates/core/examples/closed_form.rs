//! Boundary layer of density-preserving constituents in closed form.

use porous_second_gradient::fixtures;
use porous_second_gradient::halfspace::{closed_form_profile, validate_profile};

fn main() -> porous_second_gradient::Result<()> {
    let profile = closed_form_profile(&fixtures::salt_brine_spec())?;
    println!("L = {:.6} J/kg", profile.l);
    println!("x0 = {:.6e} m", profile.x0);
    println!("delta_rho_s = {:.6} kg/m3", profile.delta_rho_s);

    println!("{:>12} {:>14} {:>12} {:>14}", "x/x0", "rho_s", "v_s", "p");
    for k in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let i = profile
            .x
            .iter()
            .position(|&x| x >= k * profile.x0)
            .unwrap_or(profile.len() - 1);
        println!(
            "{:>12.4} {:>14.8} {:>12.8} {:>14.6e}",
            profile.x[i] / profile.x0,
            profile.rho_s[i],
            profile.v_s[i],
            profile.p[i]
        );
    }
    println!(
        "largest residual: {:e}",
        validate_profile(&profile).max_residual()
    );
    Ok(())
}
