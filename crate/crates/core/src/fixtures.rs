//! The salt-brine scenario used throughout the tests and examples:
//! rock salt (`rhat_s0 = 2160 kg/m³`) at 90 % solid volume fraction,
//! saturated by brine (`rhat_f0 = 1200 kg/m³`) held at 1 MPa.

use crate::constitutive::{MaterialModel, Mixture, ReferenceState};
use crate::halfspace::{compute_l, ProblemSpec};
use crate::hyperstress::InterfaceParams;

pub const RHAT_S0: f64 = 2160.0;
pub const RHAT_F0: f64 = 1200.0;
pub const V_S0: f64 = 0.9;
pub const P_I: f64 = 1.0e6;
pub const LAMBDA_S: f64 = 0.0125;
/// Relative boundary drop `delta_rho_s / rho_s0` the double force is tuned to.
pub const RELATIVE_DROP: f64 = 1.0e-3;

pub fn salt_brine_reference() -> ReferenceState {
    ReferenceState::new(V_S0 * RHAT_S0, (1.0 - V_S0) * RHAT_F0, RHAT_S0, RHAT_F0)
        .expect("fixture reference is saturated")
}

/// Hessian `eps_ss = 5`, `eps_ff = 2`, `eps_sf = 0.5` (Pa·m⁶/kg²), so that
/// `A_ss = 9720 J/kg` dominates the other stiffnesses.
pub fn salt_brine_material() -> MaterialModel {
    MaterialModel::new(5.0, 2.0, 0.5, 0.0, 0.0, LAMBDA_S).expect("fixture material is valid")
}

/// Double-force coefficient giving `delta_rho_s = relative_drop · rho_s0`
/// for the density-preserving mixture at incumbent pressure `p_i`.
pub fn double_force_for_drop(mixture: &Mixture, p_i: f64, relative_drop: f64) -> f64 {
    let rho_s0 = mixture.reference().rho_s0();
    let lambda = mixture.material().lambda_s;
    let l = compute_l(&mixture.with_material(mixture.material().density_preserving()))
        .expect("fixture L is positive");
    relative_drop * rho_s0 * rho_s0 / (p_i * (rho_s0 / (lambda * l)).sqrt())
}

pub fn salt_brine_interface() -> InterfaceParams {
    let mixture = Mixture::new(salt_brine_reference(), salt_brine_material());
    let d = double_force_for_drop(&mixture, P_I, RELATIVE_DROP);
    InterfaceParams::unit_partition(P_I, d).expect("fixture interface is valid")
}

/// Fixture problem on the default grid (`N = 2000`, `X = 10 x0`).
pub fn salt_brine_spec() -> ProblemSpec {
    ProblemSpec::new(
        salt_brine_reference(),
        salt_brine_material(),
        salt_brine_interface(),
    )
}
