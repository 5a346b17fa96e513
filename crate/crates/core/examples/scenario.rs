//! Loads a scenario file the way `poro2g` does, applies an override and
//! solves it on the automatically selected track.
//!
//! `cargo run --example scenario -- scenarios/salt_brine.toml`

use std::path::PathBuf;

use porous_second_gradient::cli::config::ScenarioConfig;
use porous_second_gradient::halfspace::{solve, validate_profile};
use porous_second_gradient::Track;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/salt_brine.toml")
        });
    for overrides in [vec![], vec!["material.c_s=2e-3".to_string()]] {
        let config = ScenarioConfig::load(&path, &overrides)?;
        let spec = config.problem_spec()?;
        let track = Track::Auto.resolve(&spec.material);
        let profile = solve(&spec, track)?;
        println!(
            "{overrides:?}: track {track}, L = {:.4}, x0 = {:.6e}, delta_rho_s = {:.8}, residual {:.2e}",
            profile.l,
            profile.x0,
            profile.delta_rho_s,
            validate_profile(&profile).max_residual()
        );
    }
    Ok(())
}
