//! Equilibrium mechanics of a porous solid saturated by a fluid, including
//! second density-gradient effects.
//!
//! The crate is organised bottom-up:
//!
//! * [`constitutive`] holds the reference state, the linearized material
//!   model and every pointwise first-gradient quantity (partial pressures,
//!   Biot-type factors, exchange coefficient, first integral).
//! * [`hyperstress`] evaluates second-gradient tensors, the solid
//!   hyperstress, applied interface actions and boundary-condition residuals.
//! * [`halfspace`] solves the one-dimensional pressure-driven penetration
//!   problem on `x >= 0`, in closed form for density-preserving constituents
//!   and by finite-difference Newton iteration otherwise, and reports the
//!   static permeability quantities.
//! * [`cli`] is the batch front end behind the `poro2g` binary.
//!
//! All quantities are SI. The energy density is per unit mixture volume, so
//! the Hessian entries `eps_ab` carry `Pa·m⁶/kg²` and the stiffnesses
//! `A_ab = rho_a0·eps_ab` carry `J/kg`.

pub mod cli;
pub mod constitutive;
pub mod error;
pub mod fixtures;
pub mod halfspace;
pub mod hyperstress;
pub mod quadrature;

pub use constitutive::{Constituent, MaterialModel, Mixture, MixtureState, ReferenceState};
pub use error::{Error, Result};
pub use halfspace::{ClosedFormSolution, HalfspaceModel, ProblemSpec, Profile, Track};
pub use hyperstress::{FieldPoint, InterfaceParams};
