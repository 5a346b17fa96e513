//! Pointwise constitutive quantities of the salt/brine mixture at a
//! slightly compressed, saturated state.
//!
//! Run with `cargo run --example constitutive`.

use nalgebra::Vector3;
use porous_second_gradient::{fixtures, Constituent, Mixture, MixtureState};

fn main() -> porous_second_gradient::Result<()> {
    let reference = fixtures::salt_brine_reference();
    let mix = Mixture::new(reference, fixtures::salt_brine_material());

    let rho_s = reference.rho_s0() * 1.001;
    let rho_f = mix.solve_rho_f_saturated(rho_s)?;
    let state = MixtureState::new(rho_s, rho_f, 1.0e6)?;

    println!("rho_s = {rho_s:.6} kg/m3, rho_f = {rho_f:.6} kg/m3, p = 1 MPa");
    for a in Constituent::BOTH {
        println!(
            "{a:?}: v = {:.8}, biot = {:.8}, partial pressure = {:.6e} Pa",
            mix.volume_fraction(a, state.density(a))?,
            mix.biot_factor(a, state.density(a))?,
            mix.partial_pressure(a, &state)?,
        );
    }

    let m = mix.exchange_coefficient(&state)?;
    let grad = Vector3::new(-50.0, 0.0, 0.0);
    let (m_s, m_f) = mix.exchange_forces(&state, grad)?;
    println!("exchange coefficient M = {m:.6e}");
    println!("m_s = {m_s:?}\nm_f = {m_f:?}\nm_s + m_f = {:?}", m_s + m_f);

    let lin = mix.linearized_m_coeffs()?;
    println!(
        "linearized M: m0 = {}, m_s = {:.6e}, m_f = {:.6e}",
        lin.m0, lin.m_s, lin.m_f
    );
    println!(
        "cross-consistency defect = {:e}",
        mix.cross_consistency_defect()
    );
    Ok(())
}
