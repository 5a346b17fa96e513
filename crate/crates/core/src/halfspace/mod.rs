//! One-dimensional pressure-driven fluid penetration into a saturated
//! half-space `x >= 0`.
//!
//! The solid density obeys the boundary-layer equation
//!
//! ```text
//! lambda_s rho_s0 rho_s'' = F(rho_s, rho_f_bar(rho_s), c)
//! lambda_s rho_s0 rho_s'(0) = D p_i
//! ```
//!
//! where `F` combines the thermodynamic pressures with the fluid first
//! integral (see [`HalfspaceModel::assemble_f`]) and `c` is fixed by the
//! far-field fluid condition. The second-gradient operator is taken to first
//! order about the reference density; the constitutive side is kept exact.
//! For density-preserving constituents `F` is affine in `rho_s` and the
//! exponential profile of [`closed_form`] is the exact solution.

pub mod closed_form;
pub mod grid;
pub mod numeric;
pub mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use closed_form::{
    attenuation_length, boundary_drop, c2_amplitude, closed_form_profile,
    closed_form_profile_with_l, compute_l, compute_l_reading, ClosedFormSolution, LReading,
};
pub use numeric::{far_field_state, solve_compressible, FarFieldState};
pub use validate::{validate_profile, Check, ValidationReport};

use crate::constitutive::{Constituent, MaterialModel, Mixture, ReferenceState, Stiffness};
use crate::error::{invalid, Error, Result};
use crate::hyperstress::InterfaceParams;
use crate::quadrature::{integrate, QuadratureOptions, QuadratureResult};

const SINGULAR_FACTOR: f64 = 1e-12;

/// Which solver produces a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Track {
    ClosedForm,
    Compressible,
    /// Closed form iff both constituents are density preserving.
    Auto,
}

impl Track {
    pub fn resolve(self, material: &MaterialModel) -> Track {
        match self {
            Track::Auto if material.is_density_preserving() => Track::ClosedForm,
            Track::Auto => Track::Compressible,
            other => other,
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Track::ClosedForm => "closed-form",
            Track::Compressible => "compressible",
            Track::Auto => "auto",
        })
    }
}

impl FromStr for Track {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed_form" => Ok(Track::ClosedForm),
            "compressible" => Ok(Track::Compressible),
            "auto" => Ok(Track::Auto),
            other => Err(invalid(
                "track",
                format!("expected closed-form, compressible or auto, got {other:?}"),
            )),
        }
    }
}

/// Root of the amplitude condition used by the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Amplitude {
    /// `C2 = -delta_rho_s`.
    #[default]
    Linearized,
    /// Small root of `C2 (rho_s0 + C2) = -D p_i sqrt(rho_s0 / (lambda_s L))`.
    Exact,
}

/// Weight of the quadrature defining `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GWeight {
    /// `1/s`: the antiderivative of `(1/rho_s) dF/drho_s`.
    Exact,
    /// `1/rho_s0`: consistent with the first-order second-gradient operator.
    FirstOrder,
}

/// Complete specification of a half-space problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub reference: ReferenceState,
    pub material: MaterialModel,
    pub interface: InterfaceParams,
    /// Truncation length; `None` means ten attenuation lengths.
    pub x_max: Option<f64>,
    pub nodes: usize,
    /// Newton tolerance relative to the residual scale of the problem.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Exponent of the node clustering towards `x = 0`; 0 is uniform.
    pub grid_stretch: f64,
    pub amplitude: Amplitude,
    /// Stiffness used verbatim instead of the one derived from the Hessian.
    pub stiffness: Option<Stiffness>,
}

impl ProblemSpec {
    pub const DEFAULT_NODES: usize = 2000;
    pub const DEFAULT_NEWTON_TOL: f64 = 1e-9;
    pub const DEFAULT_NEWTON_MAX_ITER: usize = 50;
    pub const DEFAULT_GRID_STRETCH: f64 = 3.0;
    /// Default truncation in attenuation lengths.
    pub const DEFAULT_TRUNCATION: f64 = 10.0;
    /// Truncation used when there is no boundary layer (`lambda_s = 0`).
    pub const CLASSICAL_LENGTH: f64 = 1.0;

    pub fn new(
        reference: ReferenceState,
        material: MaterialModel,
        interface: InterfaceParams,
    ) -> Self {
        Self {
            reference,
            material,
            interface,
            x_max: None,
            nodes: Self::DEFAULT_NODES,
            newton_tol: Self::DEFAULT_NEWTON_TOL,
            newton_max_iter: Self::DEFAULT_NEWTON_MAX_ITER,
            grid_stretch: Self::DEFAULT_GRID_STRETCH,
            amplitude: Amplitude::default(),
            stiffness: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(x) = self.x_max {
            if !(x.is_finite() && x > 0.0) {
                return Err(invalid("X", format!("must be finite and > 0, got {x}")));
            }
        }
        if self.nodes < 16 {
            return Err(invalid("N", format!("must be >= 16, got {}", self.nodes)));
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(invalid(
                "newton_tol",
                format!("must be > 0, got {}", self.newton_tol),
            ));
        }
        if self.newton_max_iter == 0 {
            return Err(invalid("newton_max_iter", "must be >= 1"));
        }
        if !(self.grid_stretch.is_finite() && self.grid_stretch >= 0.0) {
            return Err(invalid(
                "grid_stretch",
                format!("must be >= 0, got {}", self.grid_stretch),
            ));
        }
        if !self.interface.is_unit_partition() {
            return Err(invalid(
                "interface",
                "the half-space problem requires alpha = 1 and l = 1",
            ));
        }
        Ok(())
    }

    pub fn mixture(&self) -> Mixture {
        match self.stiffness {
            Some(a) => Mixture::with_raw_stiffness(self.reference, self.material, a),
            None => Mixture::new(self.reference, self.material),
        }
    }

    pub fn model(&self) -> HalfspaceModel {
        HalfspaceModel::new(self.mixture(), self.interface)
    }

    /// Truncation length: the explicit `x_max`, or ten attenuation lengths
    /// `x0 = sqrt(rho_s0 lambda_s / l)` of the given linearization.
    pub fn truncation(&self, l: f64) -> f64 {
        if let Some(x) = self.x_max {
            return x;
        }
        let lambda = self.material.lambda_s;
        if lambda == 0.0 || l <= 0.0 {
            return Self::CLASSICAL_LENGTH;
        }
        Self::DEFAULT_TRUNCATION * (self.reference.rho_s0() * lambda / l).sqrt()
    }
}

/// The mixture and interface of a half-space problem; evaluates the
/// reduced right-hand side `F` and its integral `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfspaceModel {
    pub mixture: Mixture,
    pub interface: InterfaceParams,
}

/// `F` and its partial derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValue {
    pub f: f64,
    pub d_rho_s: f64,
    pub d_rho_f: f64,
    pub d_c: f64,
}

impl HalfspaceModel {
    pub fn new(mixture: Mixture, interface: InterfaceParams) -> Self {
        Self { mixture, interface }
    }

    pub fn lambda_s(&self) -> f64 {
        self.mixture.material().lambda_s
    }

    pub fn rho_s0(&self) -> f64 {
        self.mixture.reference().rho_s0()
    }

    fn fluid_biot(&self, rho_f: f64) -> Result<f64> {
        let b_f = self.mixture.biot_factor(Constituent::Fluid, rho_f)?;
        if b_f.abs() < SINGULAR_FACTOR {
            return Err(Error::SingularCompressibility {
                constituent: Constituent::Fluid,
                factor: b_f,
            });
        }
        Ok(b_f)
    }

    /// Saturation pressure implied by the fluid first integral
    /// `∂eps/∂rho_f + (p / rhat_f)(1 - v_f c_f) = c`.
    pub fn pressure_from_c(&self, rho_s: f64, rho_f: f64, c: f64) -> Result<f64> {
        let rhat_f = self.mixture.true_density(Constituent::Fluid, rho_f)?;
        let b_f = self.fluid_biot(rho_f)?;
        Ok(rhat_f * (c - self.mixture.energy_slope_fluid(rho_s, rho_f)) / b_f)
    }

    /// Left side of the fluid first integral for a given pressure.
    pub fn fluid_first_integral(&self, rho_s: f64, rho_f: f64, p: f64) -> Result<f64> {
        let rhat_f = self.mixture.true_density(Constituent::Fluid, rho_f)?;
        let b_f = self.mixture.biot_factor(Constituent::Fluid, rho_f)?;
        Ok(self.mixture.energy_slope_fluid(rho_s, rho_f) + p * b_f / rhat_f)
    }

    /// `F = Σ P_a + (1 - Σ v_a² c_a)(1 - v_f c_f)^-1 (c - ∂eps/∂rho_f) rhat_f - p_i`,
    /// the second-gradient stress demanded by equilibrium.
    pub fn assemble_f(&self, rho_s: f64, rho_f: f64, c: f64) -> Result<f64> {
        Ok(self.evaluate_f(rho_s, rho_f, c)?.f)
    }

    /// `F` with analytic partial derivatives.
    pub fn evaluate_f(&self, rho_s: f64, rho_f: f64, c: f64) -> Result<FValue> {
        let m = &self.mixture;
        let mat = m.material();
        let a = m.stiffness();
        let (ps, pf) = m.thermo_pressures(rho_s, rho_f);
        let rhat_s = m.true_density(Constituent::Solid, rho_s)?;
        let rhat_f = m.true_density(Constituent::Fluid, rho_f)?;
        let v_s = m.volume_fraction(Constituent::Solid, rho_s)?;
        let v_f = m.volume_fraction(Constituent::Fluid, rho_f)?;
        let b_s = 1.0 - v_s * mat.c_s;
        let b_f = self.fluid_biot(rho_f)?;
        let s = 1.0 - v_s * v_s * mat.c_s - v_f * v_f * mat.c_f;
        let gap = c - m.energy_slope_fluid(rho_s, rho_f);
        // rhat_f·b_f = rhat_f0 - c_f rho_f0 is constant, so q = rhat_f² gap / const.
        let q = rhat_f * gap / b_f;
        let dq_s = -rhat_f * mat.eps_sf / b_f;
        let dq_f = (2.0 * mat.c_f * gap - rhat_f * mat.eps_ff) / b_f;
        let ds_s = -2.0 * v_s * mat.c_s * b_s / rhat_s;
        let ds_f = -2.0 * v_f * mat.c_f * b_f / rhat_f;
        Ok(FValue {
            f: ps + pf + s * q - self.interface.p_i,
            d_rho_s: a.ss + a.fs + ds_s * q + s * dq_s,
            d_rho_f: a.sf + a.ff + ds_f * q + s * dq_f,
            d_c: s * rhat_f / b_f,
        })
    }

    /// `F` along saturation, `F(rho_s, rho_f_bar(rho_s), c)`.
    pub fn f_saturated(&self, rho_s: f64, c: f64) -> Result<f64> {
        let rho_f = self.mixture.solve_rho_f_saturated(rho_s)?;
        self.assemble_f(rho_s, rho_f, c)
    }

    /// Total derivatives `(dF/drho_s, dF/dc)` along saturation, with
    /// `F` itself.
    pub fn f_saturated_with_slope(&self, rho_s: f64, c: f64) -> Result<(f64, f64, f64)> {
        let rho_f = self.mixture.solve_rho_f_saturated(rho_s)?;
        let slope = self.mixture.saturated_slope(rho_s, rho_f);
        let v = self.evaluate_f(rho_s, rho_f, c)?;
        Ok((v.f, v.d_rho_s + v.d_rho_f * slope, v.d_c))
    }

    /// `G(rho_s, c) = ∫_{rho_s0}^{rho_s} w(s) dF/ds (s, rho_f_bar(s), c) ds`,
    /// normalized by `G(rho_s0, c) = 0`.
    pub fn assemble_g(&self, rho_s: f64, c: f64, weight: GWeight) -> Result<QuadratureResult> {
        let rho_s0 = self.rho_s0();
        let mut failure = None;
        let integrand = |s: f64| -> f64 {
            match self.f_saturated_with_slope(s, c) {
                Ok((_, df, _)) => match weight {
                    GWeight::Exact => df / s,
                    GWeight::FirstOrder => df / rho_s0,
                },
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        };
        let result = integrate(integrand, rho_s0, rho_s, QuadratureOptions::default());
        if let Some(e) = failure {
            return Err(e);
        }
        result
    }
}

/// Discretized equilibrium fields and the far-field state they decay to.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub track: Track,
    pub model: HalfspaceModel,
    pub x: Vec<f64>,
    pub rho_s: Vec<f64>,
    pub drho_s: Vec<f64>,
    pub d2rho_s: Vec<f64>,
    pub rho_f: Vec<f64>,
    pub v_s: Vec<f64>,
    pub p: Vec<f64>,
    pub p_s: Vec<f64>,
    pub p_f: Vec<f64>,
    /// Fluid first-integral constant.
    pub c: f64,
    /// State as `x -> ∞` (zero derivatives).
    pub far_field: FarFieldState,
    /// Linearization coefficient `dF/drho_s` at the far field.
    pub l: f64,
    pub x0: f64,
    /// `rho_s(∞) - rho_s(0)`.
    pub delta_rho_s: f64,
    /// `rho_s(0) - rho_s(∞)`.
    pub c2: f64,
    pub iterations: usize,
    /// No second-gradient energy: uniform solution without boundary layer.
    pub classical: bool,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Hyperstress in the first-order form, `lambda_s rho_s0 rho_s''`.
    pub fn hyperstress(&self, i: usize) -> f64 {
        self.model.lambda_s() * self.model.rho_s0() * self.d2rho_s[i]
    }

    /// Assembles a profile from nodal solid densities and derivatives.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_solid(
        track: Track,
        model: HalfspaceModel,
        x: Vec<f64>,
        rho_s: Vec<f64>,
        drho_s: Vec<f64>,
        d2rho_s: Vec<f64>,
        c: f64,
        far_field: FarFieldState,
        l: f64,
        iterations: usize,
        classical: bool,
    ) -> Result<Self> {
        let m = &model.mixture;
        let n = x.len();
        let h_scale = model.lambda_s() * model.rho_s0();
        let mut rho_f = Vec::with_capacity(n);
        let mut v_s = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        let mut p_s = Vec::with_capacity(n);
        let mut p_f = Vec::with_capacity(n);
        for i in 0..n {
            let rf = m.solve_rho_f_saturated(rho_s[i])?;
            let (ps, pf) = m.thermo_pressures(rho_s[i], rf);
            let s = m.compressibility_sum(rho_s[i], rf)?;
            let h = h_scale * d2rho_s[i];
            rho_f.push(rf);
            v_s.push(m.volume_fraction(Constituent::Solid, rho_s[i])?);
            p.push((-(ps + pf) + h + model.interface.p_i) / s);
            p_s.push(ps);
            p_f.push(pf);
        }
        let x0 = if model.lambda_s() == 0.0 {
            0.0
        } else {
            (h_scale / l).sqrt()
        };
        let c2 = rho_s[0] - far_field.rho_s;
        Ok(Self {
            track,
            model,
            x,
            rho_s,
            drho_s,
            d2rho_s,
            rho_f,
            v_s,
            p,
            p_s,
            p_f,
            c,
            far_field,
            l,
            x0,
            delta_rho_s: -c2,
            c2,
            iterations,
            classical,
        })
    }
}

/// Dispatches to the requested solver.
pub fn solve(spec: &ProblemSpec, track: Track) -> Result<Profile> {
    match track.resolve(&spec.material) {
        Track::ClosedForm => closed_form_profile(spec),
        _ => solve_compressible(spec),
    }
}
