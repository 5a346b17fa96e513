use thiserror::Error;

use crate::constitutive::Constituent;

/// Failures raised by the constitutive, hyperstress and half-space layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("degenerate material: true density of {constituent} is {value} (must be > 0)")]
    DegenerateMaterial {
        constituent: Constituent,
        value: f64,
    },

    #[error("unphysical state: volume fraction of {constituent} is {value}, outside (0, 1)")]
    UnphysicalState {
        constituent: Constituent,
        value: f64,
    },

    #[error("saturation infeasible at rho_s = {rho_s}: {reason}")]
    SaturationInfeasible { rho_s: f64, reason: String },

    #[error("singular compressibility factor for {constituent}: 1 - v*c = {factor}")]
    SingularCompressibility {
        constituent: Constituent,
        factor: f64,
    },

    #[error("energy-per-mass coefficient L = {l} <= 0: non-decaying (branching) regime")]
    Branching { l: f64 },

    #[error("interface overload: discriminant {discriminant} < 0 in the amplitude quadratic")]
    InterfaceOverload { discriminant: f64 },

    #[error("adaptive quadrature did not converge: estimate {estimate}, error {error_estimate} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
    },

    #[error(
        "Newton iteration failed after {iterations} iterations: residual {residual:e} ({reason})"
    )]
    NewtonDivergence {
        iterations: usize,
        residual: f64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
