//! Reference state, linearized material model and pointwise first-gradient
//! constitutive quantities.
//!
//! The energy density is the quadratic expansion
//!
//! ```text
//! eps(rho_s, rho_f) = ½ eps_ss δs² + ½ eps_ff δf² + eps_sf δs δf,   δa = rho_a - rho_a0
//! ```
//!
//! with thermodynamic pressures `P_a = Σ_b A_ab δb`, `A_ab = rho_a0 · eps_ab`,
//! and the linear compressibility law `rhat_a = rhat_a0 + c_a δa`.

use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Relative tolerance on the reference saturation identity.
pub const REFERENCE_SATURATION_TOL: f64 = 1e-12;

/// Factors `1 - v c` below this magnitude are treated as singular.
const SINGULAR_FACTOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constituent {
    Solid,
    Fluid,
}

impl Constituent {
    pub const BOTH: [Constituent; 2] = [Constituent::Solid, Constituent::Fluid];

    pub fn other(self) -> Self {
        match self {
            Constituent::Solid => Constituent::Fluid,
            Constituent::Fluid => Constituent::Solid,
        }
    }
}

impl fmt::Display for Constituent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constituent::Solid => "solid",
            Constituent::Fluid => "fluid",
        })
    }
}

/// Saturated, stress-free reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceState {
    rho_s0: f64,
    rho_f0: f64,
    rhat_s0: f64,
    rhat_f0: f64,
}

impl ReferenceState {
    /// Builds a reference state from apparent and true densities, checking
    /// positivity and `rho_s0·rhat_f0 + rho_f0·rhat_s0 = rhat_f0·rhat_s0`.
    pub fn new(rho_s0: f64, rho_f0: f64, rhat_s0: f64, rhat_f0: f64) -> Result<Self> {
        for (field, v) in [
            ("rho_s0", rho_s0),
            ("rho_f0", rho_f0),
            ("rhat_s0", rhat_s0),
            ("rhat_f0", rhat_f0),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(field, format!("must be finite and > 0, got {v}")));
            }
        }
        let lhs = rho_s0 * rhat_f0 + rho_f0 * rhat_s0;
        let rhs = rhat_f0 * rhat_s0;
        if ((lhs - rhs) / rhs).abs() > REFERENCE_SATURATION_TOL {
            return Err(invalid(
                "reference",
                format!(
                    "not saturated: v_s0 + v_f0 = {}",
                    rho_s0 / rhat_s0 + rho_f0 / rhat_f0
                ),
            ));
        }
        let v_s0 = rho_s0 / rhat_s0;
        if !(v_s0 > 0.0 && v_s0 < 1.0) {
            return Err(invalid(
                "reference",
                format!("v_s0 = {v_s0} outside (0, 1)"),
            ));
        }
        Ok(Self {
            rho_s0,
            rho_f0,
            rhat_s0,
            rhat_f0,
        })
    }

    /// Saturated reference from true densities and the solid volume fraction.
    pub fn from_volume_fraction(rhat_s0: f64, rhat_f0: f64, v_s0: f64) -> Result<Self> {
        if !(v_s0 > 0.0 && v_s0 < 1.0) {
            return Err(invalid("v_s0", format!("must lie in (0, 1), got {v_s0}")));
        }
        Self::new(v_s0 * rhat_s0, (1.0 - v_s0) * rhat_f0, rhat_s0, rhat_f0)
    }

    pub fn rho_s0(&self) -> f64 {
        self.rho_s0
    }
    pub fn rho_f0(&self) -> f64 {
        self.rho_f0
    }
    pub fn rhat_s0(&self) -> f64 {
        self.rhat_s0
    }
    pub fn rhat_f0(&self) -> f64 {
        self.rhat_f0
    }

    pub fn apparent(&self, a: Constituent) -> f64 {
        match a {
            Constituent::Solid => self.rho_s0,
            Constituent::Fluid => self.rho_f0,
        }
    }

    pub fn true_density(&self, a: Constituent) -> f64 {
        match a {
            Constituent::Solid => self.rhat_s0,
            Constituent::Fluid => self.rhat_f0,
        }
    }

    pub fn volume_fraction(&self, a: Constituent) -> f64 {
        self.apparent(a) / self.true_density(a)
    }
}

/// Energy Hessian at the reference, compressibility slopes and the solid
/// gradient-energy coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialModel {
    pub eps_ss: f64,
    pub eps_ff: f64,
    pub eps_sf: f64,
    pub c_s: f64,
    pub c_f: f64,
    pub lambda_s: f64,
}

impl MaterialModel {
    pub fn new(
        eps_ss: f64,
        eps_ff: f64,
        eps_sf: f64,
        c_s: f64,
        c_f: f64,
        lambda_s: f64,
    ) -> Result<Self> {
        for (field, v) in [("eps_ss", eps_ss), ("eps_ff", eps_ff), ("eps_sf", eps_sf)] {
            if !v.is_finite() {
                return Err(invalid(field, format!("must be finite, got {v}")));
            }
        }
        for (field, v) in [("c_s", c_s), ("c_f", c_f), ("lambda_s", lambda_s)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(field, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self {
            eps_ss,
            eps_ff,
            eps_sf,
            c_s,
            c_f,
            lambda_s,
        })
    }

    /// Builds the Hessian from stiffnesses `A_ss`, `A_sf` (solid row) and
    /// `A_ff`; `A_fs` follows from cross-consistency.
    pub fn from_stiffness(
        reference: &ReferenceState,
        a_ss: f64,
        a_sf: f64,
        a_ff: f64,
        c_s: f64,
        c_f: f64,
        lambda_s: f64,
    ) -> Result<Self> {
        Self::new(
            a_ss / reference.rho_s0,
            a_ff / reference.rho_f0,
            a_sf / reference.rho_s0,
            c_s,
            c_f,
            lambda_s,
        )
    }

    /// Hessian `[eps_ss, eps_sf; eps_sf, eps_ff]` is positive semidefinite.
    pub fn is_stable(&self) -> bool {
        self.eps_ss >= 0.0
            && self.eps_ff >= 0.0
            && self.eps_ss * self.eps_ff - self.eps_sf * self.eps_sf >= 0.0
    }

    pub fn compressibility(&self, a: Constituent) -> f64 {
        match a {
            Constituent::Solid => self.c_s,
            Constituent::Fluid => self.c_f,
        }
    }

    pub fn is_density_preserving(&self) -> bool {
        self.c_s == 0.0 && self.c_f == 0.0
    }

    /// Same model with both compressibility slopes set to zero.
    pub fn density_preserving(&self) -> Self {
        Self {
            c_s: 0.0,
            c_f: 0.0,
            ..*self
        }
    }
}

/// Matrix `A_ab` of the linear thermodynamic pressures `P_a = Σ_b A_ab δb`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stiffness {
    pub ss: f64,
    pub sf: f64,
    pub fs: f64,
    pub ff: f64,
}

/// Pointwise state: apparent densities and saturation pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureState {
    pub rho_s: f64,
    pub rho_f: f64,
    pub p: f64,
}

impl MixtureState {
    pub fn new(rho_s: f64, rho_f: f64, p: f64) -> Result<Self> {
        if !(rho_s.is_finite() && rho_s > 0.0) {
            return Err(invalid("rho_s", format!("must be > 0, got {rho_s}")));
        }
        if !(rho_f.is_finite() && rho_f > 0.0) {
            return Err(invalid("rho_f", format!("must be > 0, got {rho_f}")));
        }
        if !p.is_finite() {
            return Err(invalid("p", "must be finite"));
        }
        Ok(Self { rho_s, rho_f, p })
    }

    pub fn density(&self, a: Constituent) -> f64 {
        match a {
            Constituent::Solid => self.rho_s,
            Constituent::Fluid => self.rho_f,
        }
    }
}

/// Constants of the linearized exchange coefficient
/// `M = p + m0 + m_s δs + m_f δf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizedExchange {
    pub m0: f64,
    pub m_s: f64,
    pub m_f: f64,
}

/// Saturated pointwise quantities and their total derivatives along the
/// saturation manifold `rho_f = rho_f_bar(rho_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturatedPoint {
    pub rho_s: f64,
    pub rho_f: f64,
    /// `d rho_f_bar / d rho_s`
    pub drho_f: f64,
    pub v_s: f64,
    pub v_f: f64,
    pub dv_s: f64,
    pub dv_f: f64,
    /// Biot-type factors `1 - v_a c_a`.
    pub b_s: f64,
    pub b_f: f64,
    pub db_s: f64,
    pub db_f: f64,
    pub p_s: f64,
    pub p_f: f64,
    pub dp_s: f64,
    pub dp_f: f64,
}

/// A reference state together with the material model: the complete
/// pointwise constitutive description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mixture {
    reference: ReferenceState,
    material: MaterialModel,
    stiffness: Stiffness,
    raw_stiffness: bool,
}

impl Mixture {
    pub fn new(reference: ReferenceState, material: MaterialModel) -> Self {
        let stiffness = Stiffness {
            ss: reference.rho_s0 * material.eps_ss,
            sf: reference.rho_s0 * material.eps_sf,
            fs: reference.rho_f0 * material.eps_sf,
            ff: reference.rho_f0 * material.eps_ff,
        };
        Self {
            reference,
            material,
            stiffness,
            raw_stiffness: false,
        }
    }

    /// Uses a caller-supplied stiffness matrix verbatim, bypassing the
    /// derivation from the energy Hessian. Cross-consistency is not enforced;
    /// see [`Mixture::cross_consistency_defect`].
    pub fn with_raw_stiffness(
        reference: ReferenceState,
        material: MaterialModel,
        stiffness: Stiffness,
    ) -> Self {
        Self {
            reference,
            material,
            stiffness,
            raw_stiffness: true,
        }
    }

    pub fn reference(&self) -> &ReferenceState {
        &self.reference
    }
    pub fn material(&self) -> &MaterialModel {
        &self.material
    }
    pub fn stiffness(&self) -> &Stiffness {
        &self.stiffness
    }
    pub fn has_raw_stiffness(&self) -> bool {
        self.raw_stiffness
    }

    /// Relative defect `|A_sf·rho_f0 - A_fs·rho_s0| / max(|A_sf·rho_f0|, |A_fs·rho_s0|)`;
    /// zero for every mixture built from an energy Hessian.
    pub fn cross_consistency_defect(&self) -> f64 {
        let lhs = self.stiffness.sf * self.reference.rho_f0;
        let rhs = self.stiffness.fs * self.reference.rho_s0;
        let scale = lhs.abs().max(rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        }
    }

    pub fn with_material(&self, material: MaterialModel) -> Self {
        if self.raw_stiffness {
            Self { material, ..*self }
        } else {
            Self::new(self.reference, material)
        }
    }

    fn true_density_unchecked(&self, a: Constituent, rho_a: f64) -> f64 {
        self.reference.true_density(a)
            + self.material.compressibility(a) * (rho_a - self.reference.apparent(a))
    }

    /// True density from the linear compressibility law.
    pub fn true_density(&self, a: Constituent, rho_a: f64) -> Result<f64> {
        if !(rho_a.is_finite() && rho_a > 0.0) {
            return Err(invalid(
                "rho",
                format!("apparent density must be > 0, got {rho_a}"),
            ));
        }
        let rhat = self.true_density_unchecked(a, rho_a);
        if rhat <= 0.0 {
            return Err(Error::DegenerateMaterial {
                constituent: a,
                value: rhat,
            });
        }
        Ok(rhat)
    }

    pub fn volume_fraction(&self, a: Constituent, rho_a: f64) -> Result<f64> {
        let v = rho_a / self.true_density(a, rho_a)?;
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::UnphysicalState {
                constituent: a,
                value: v,
            });
        }
        Ok(v)
    }

    /// `1 - v_a · d rhat_a / d rho_a`.
    pub fn biot_factor(&self, a: Constituent, rho_a: f64) -> Result<f64> {
        Ok(1.0 - self.volume_fraction(a, rho_a)? * self.material.compressibility(a))
    }

    /// `rho_s·rhat_f + rho_f·rhat_s - rhat_f·rhat_s`; vanishes iff `v_s + v_f = 1`.
    pub fn saturation_residual(&self, rho_s: f64, rho_f: f64) -> f64 {
        let rhat_s = self.true_density_unchecked(Constituent::Solid, rho_s);
        let rhat_f = self.true_density_unchecked(Constituent::Fluid, rho_f);
        rho_s * rhat_f + rho_f * rhat_s - rhat_f * rhat_s
    }

    /// Fluid density completing saturation for the given solid density.
    ///
    /// Under the linear compressibility law the saturation residual is affine
    /// in `rho_f`, so the root is explicit for any `c_f`.
    pub fn solve_rho_f_saturated(&self, rho_s: f64) -> Result<f64> {
        let rhat_s = self.true_density(Constituent::Solid, rho_s)?;
        if rho_s >= rhat_s {
            return Err(Error::SaturationInfeasible {
                rho_s,
                reason: format!("v_s = {} >= 1", rho_s / rhat_s),
            });
        }
        let c_f = self.material.c_f;
        let intercept = self.reference.rhat_f0 - c_f * self.reference.rho_f0;
        let slope = rhat_s * (1.0 - c_f) + c_f * rho_s;
        if slope <= 0.0 || intercept <= 0.0 {
            return Err(Error::SaturationInfeasible {
                rho_s,
                reason: format!("no root in (0, rhat_f): slope {slope}, intercept {intercept}"),
            });
        }
        let rho_f = intercept * (rhat_s - rho_s) / slope;
        let rhat_f = self.true_density(Constituent::Fluid, rho_f)?;
        if !(rho_f > 0.0 && rho_f < rhat_f) {
            return Err(Error::SaturationInfeasible {
                rho_s,
                reason: format!("root rho_f = {rho_f} outside (0, {rhat_f})"),
            });
        }
        Ok(rho_f)
    }

    /// `d rho_f_bar / d rho_s` by implicit differentiation of the saturation residual.
    pub fn saturated_slope(&self, rho_s: f64, rho_f: f64) -> f64 {
        let (c_s, c_f) = (self.material.c_s, self.material.c_f);
        let rhat_s = self.true_density_unchecked(Constituent::Solid, rho_s);
        let rhat_f = self.true_density_unchecked(Constituent::Fluid, rho_f);
        let dr_ds = rhat_f * (1.0 - c_s) + rho_f * c_s;
        let dr_df = rhat_s * (1.0 - c_f) + rho_s * c_f;
        -dr_ds / dr_df
    }

    /// Quadratic energy density.
    pub fn energy(&self, rho_s: f64, rho_f: f64) -> f64 {
        let (ds, df) = self.deviation(rho_s, rho_f);
        let m = &self.material;
        0.5 * m.eps_ss * ds * ds + 0.5 * m.eps_ff * df * df + m.eps_sf * ds * df
    }

    /// `∂eps/∂rho_f`.
    pub fn energy_slope_fluid(&self, rho_s: f64, rho_f: f64) -> f64 {
        let (ds, df) = self.deviation(rho_s, rho_f);
        self.material.eps_ff * df + self.material.eps_sf * ds
    }

    /// `∂eps/∂rho_s`.
    pub fn energy_slope_solid(&self, rho_s: f64, rho_f: f64) -> f64 {
        let (ds, df) = self.deviation(rho_s, rho_f);
        self.material.eps_ss * ds + self.material.eps_sf * df
    }

    fn deviation(&self, rho_s: f64, rho_f: f64) -> (f64, f64) {
        (rho_s - self.reference.rho_s0, rho_f - self.reference.rho_f0)
    }

    /// Linear thermodynamic pressures `(P_s, P_f)`.
    pub fn thermo_pressures(&self, rho_s: f64, rho_f: f64) -> (f64, f64) {
        let (ds, df) = self.deviation(rho_s, rho_f);
        let a = &self.stiffness;
        (a.ss * ds + a.sf * df, a.fs * ds + a.ff * df)
    }

    pub fn thermo_pressure(&self, state: &MixtureState) -> (f64, f64) {
        self.thermo_pressures(state.rho_s, state.rho_f)
    }

    /// Partial pressure `p_a = P_a + p·v_a·(1 - v_a c_a)`.
    pub fn partial_pressure(&self, a: Constituent, state: &MixtureState) -> Result<f64> {
        let (ps, pf) = self.thermo_pressure(state);
        let rho = state.density(a);
        let v = self.volume_fraction(a, rho)?;
        let thermo = match a {
            Constituent::Solid => ps,
            Constituent::Fluid => pf,
        };
        Ok(thermo + state.p * v * self.biot_factor(a, rho)?)
    }

    /// `1 - Σ_a v_a² c_a`, the factor multiplying `p` in the summed balance.
    pub fn compressibility_sum(&self, rho_s: f64, rho_f: f64) -> Result<f64> {
        let v_s = self.volume_fraction(Constituent::Solid, rho_s)?;
        let v_f = self.volume_fraction(Constituent::Fluid, rho_f)?;
        Ok(1.0 - v_s * v_s * self.material.c_s - v_f * v_f * self.material.c_f)
    }

    /// Mass fraction `xi_a = rho_a / (rho_s + rho_f)`.
    pub fn mass_fraction(a: Constituent, state: &MixtureState) -> f64 {
        state.density(a) / (state.rho_s + state.rho_f)
    }

    /// Exchange coefficient
    /// `M = p + Σ_b (P_b / v_b)(1 - xi_b)(1 - v_b c_b)^-1`.
    pub fn exchange_coefficient(&self, state: &MixtureState) -> Result<f64> {
        let (ps, pf) = self.thermo_pressure(state);
        let mut m = state.p;
        for (b, pb) in [(Constituent::Solid, ps), (Constituent::Fluid, pf)] {
            let rho = state.density(b);
            let v = self.volume_fraction(b, rho)?;
            let factor = self.biot_factor(b, rho)?;
            if factor.abs() < SINGULAR_FACTOR {
                return Err(Error::SingularCompressibility {
                    constituent: b,
                    factor,
                });
            }
            m += pb / v * (1.0 - Self::mass_fraction(b, state)) / factor;
        }
        Ok(m)
    }

    /// Exchange volume forces `(m_s, m_f) = (M ∇v_s, -M ∇v_s)`.
    pub fn exchange_forces(
        &self,
        state: &MixtureState,
        grad_v_s: Vector3<f64>,
    ) -> Result<(Vector3<f64>, Vector3<f64>)> {
        let m = self.exchange_coefficient(state)?;
        let grad_v_f = -grad_v_s;
        Ok((grad_v_s * m, grad_v_f * m))
    }

    /// First-order expansion of the exchange coefficient about the
    /// reference. Since every `P_b` vanishes there, only the derivatives of
    /// `P_b` survive: `m_a = Σ_b A_ba w_b` with
    /// `w_b = (1 - xi_b0) / (v_b0 (1 - v_b0 c_b))`.
    pub fn linearized_m_coeffs(&self) -> Result<LinearizedExchange> {
        let r = &self.reference;
        let total = r.rho_s0 + r.rho_f0;
        let mut w = [0.0; 2];
        for (i, b) in Constituent::BOTH.into_iter().enumerate() {
            let v = r.volume_fraction(b);
            let factor = 1.0 - v * self.material.compressibility(b);
            if factor.abs() < SINGULAR_FACTOR {
                return Err(Error::SingularCompressibility {
                    constituent: b,
                    factor,
                });
            }
            let xi = r.apparent(b) / total;
            w[i] = (1.0 - xi) / (v * factor);
        }
        let a = &self.stiffness;
        Ok(LinearizedExchange {
            m0: 0.0,
            m_s: a.ss * w[0] + a.fs * w[1],
            m_f: a.sf * w[0] + a.ff * w[1],
        })
    }

    /// First integral `k = p(1 - Σ v_a² c_a) + Σ P_a + phi` of the summed
    /// first-gradient balance.
    pub fn first_integral_k(&self, state: &MixtureState, phi: f64) -> Result<f64> {
        let (ps, pf) = self.thermo_pressure(state);
        Ok(state.p * self.compressibility_sum(state.rho_s, state.rho_f)? + ps + pf + phi)
    }

    /// Saturated state at `rho_s` with total derivatives along saturation.
    pub fn saturated_point(&self, rho_s: f64) -> Result<SaturatedPoint> {
        let rho_f = self.solve_rho_f_saturated(rho_s)?;
        let drho_f = self.saturated_slope(rho_s, rho_f);
        let (c_s, c_f) = (self.material.c_s, self.material.c_f);
        let rhat_s = self.true_density(Constituent::Solid, rho_s)?;
        let rhat_f = self.true_density(Constituent::Fluid, rho_f)?;
        let v_s = self.volume_fraction(Constituent::Solid, rho_s)?;
        let v_f = self.volume_fraction(Constituent::Fluid, rho_f)?;
        let b_s = 1.0 - v_s * c_s;
        let b_f = 1.0 - v_f * c_f;
        // dv_a/drho_a = (1 - v_a c_a) / rhat_a
        let dv_s = b_s / rhat_s;
        let dv_f = b_f / rhat_f * drho_f;
        let (p_s, p_f) = self.thermo_pressures(rho_s, rho_f);
        let a = &self.stiffness;
        Ok(SaturatedPoint {
            rho_s,
            rho_f,
            drho_f,
            v_s,
            v_f,
            dv_s,
            dv_f,
            b_s,
            b_f,
            db_s: -c_s * dv_s,
            db_f: -c_f * dv_f,
            p_s,
            p_f,
            dp_s: a.ss + a.sf * drho_f,
            dp_f: a.fs + a.ff * drho_f,
        })
    }
}
