//! Compares candidate expressions for the linearization coefficient `L`
//! by the largest residual the resulting exponential profile leaves in the
//! equilibrium and boundary conditions, at two porosities.

use porous_second_gradient::halfspace::{
    closed_form_profile_with_l, compute_l_reading, validate_profile, LReading,
};
use porous_second_gradient::{fixtures, InterfaceParams, Mixture, ProblemSpec, ReferenceState};

fn main() -> porous_second_gradient::Result<()> {
    for v_s0 in [0.9, 0.7] {
        let reference = ReferenceState::from_volume_fraction(2160.0, 1200.0, v_s0)?;
        let material = fixtures::salt_brine_material();
        let mixture = Mixture::new(reference, material);
        let d = fixtures::double_force_for_drop(&mixture, fixtures::P_I, fixtures::RELATIVE_DROP);
        let interface = InterfaceParams::unit_partition(fixtures::P_I, d)?;
        let spec = ProblemSpec::new(reference, material, interface);

        println!("v_s0 = {v_s0}");
        for reading in LReading::ALL {
            let l = compute_l_reading(&mixture, reading);
            if l <= 0.0 {
                println!("  {reading:?}: L = {l:.6} (no decaying solution)");
                continue;
            }
            let profile = closed_form_profile_with_l(&spec, l)?;
            let residual = validate_profile(&profile).max_residual();
            println!("  {reading:?}: L = {l:.6}, equation residual {residual:.3e}");
        }
    }
    Ok(())
}
