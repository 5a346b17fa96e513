//! Exponential boundary layer for density-preserving constituents and the
//! static permeability quantities derived from it.

use serde::Serialize;

use super::grid::stretched_grid;
use super::numeric::FarFieldState;
use super::{Amplitude, HalfspaceModel, ProblemSpec, Profile, Track};
use crate::constitutive::Mixture;
use crate::error::{invalid, Error, Result};

/// Candidate expressions for the linearization coefficient `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LReading {
    /// `dF/drho_s` with `rho_f` eliminated through saturation,
    /// `d rho_f / d rho_s = -rhat_f0 / rhat_s0`:
    /// `A_ss + A_fs (1 - rhat_f0/rho_f0) - [A_sf + A_ff (1 - rhat_f0/rho_f0)] rhat_f0/rhat_s0`.
    FirstPrinciples,
    /// As above but with the last factor `rhat_f0 / rho_s0`.
    ApparentDensityFactor,
    /// `A_ss - A_fs rhat_f0/rho_f0 - [A_ff (1 - rhat_f0/rho_f0) + A_sf] rhat_f0/rho_s0`,
    /// which also drops the direct `A_fs` contribution to `Σ P_a`.
    Printed,
}

impl LReading {
    pub const ALL: [LReading; 3] = [
        LReading::FirstPrinciples,
        LReading::ApparentDensityFactor,
        LReading::Printed,
    ];
}

/// Value of `L` under a given reading; no sign check.
pub fn compute_l_reading(mixture: &Mixture, reading: LReading) -> f64 {
    let r = mixture.reference();
    let a = mixture.stiffness();
    let k = 1.0 - r.rhat_f0() / r.rho_f0();
    match reading {
        LReading::FirstPrinciples => {
            a.ss + a.fs * k - (a.sf + a.ff * k) * r.rhat_f0() / r.rhat_s0()
        }
        LReading::ApparentDensityFactor => {
            a.ss + a.fs * k - (a.sf + a.ff * k) * r.rhat_f0() / r.rho_s0()
        }
        LReading::Printed => {
            a.ss - a.fs * r.rhat_f0() / r.rho_f0() - (a.ff * k + a.sf) * r.rhat_f0() / r.rho_s0()
        }
    }
}

fn require_density_preserving(mixture: &Mixture) -> Result<()> {
    if mixture.material().is_density_preserving() {
        Ok(())
    } else {
        Err(invalid(
            "material",
            "the closed form requires density-preserving constituents (c_s = c_f = 0)",
        ))
    }
}

fn check_branch(l: f64) -> Result<f64> {
    if l > 0.0 && l.is_finite() {
        Ok(l)
    } else {
        Err(Error::Branching { l })
    }
}

/// `L = dF/drho_s` on the saturation line of density-preserving constituents.
pub fn compute_l(mixture: &Mixture) -> Result<f64> {
    require_density_preserving(mixture)?;
    check_branch(compute_l_reading(mixture, LReading::FirstPrinciples))
}

/// `x0 = sqrt(rho_s0 lambda_s / L)`; zero without gradient energy.
pub fn attenuation_length(mixture: &Mixture) -> Result<f64> {
    let l = compute_l(mixture)?;
    Ok(x0_for(mixture, l))
}

fn x0_for(mixture: &Mixture, l: f64) -> f64 {
    (mixture.reference().rho_s0() * mixture.material().lambda_s / l).sqrt()
}

fn drop_for(model: &HalfspaceModel, l: f64) -> f64 {
    let lambda = model.lambda_s();
    if lambda == 0.0 {
        return 0.0;
    }
    let rho_s0 = model.rho_s0();
    model.interface.double_force() / rho_s0 * (rho_s0 / (lambda * l)).sqrt()
}

/// `delta_rho_s = (D p_i / rho_s0) sqrt(rho_s0 / (lambda_s L))`.
pub fn boundary_drop(model: &HalfspaceModel) -> Result<f64> {
    let l = compute_l(&model.mixture)?;
    Ok(drop_for(model, l))
}

fn amplitude_for(model: &HalfspaceModel, delta: f64, exact: bool) -> Result<f64> {
    if !exact || delta == 0.0 {
        return Ok(-delta);
    }
    let rho_s0 = model.rho_s0();
    let q = rho_s0 * delta;
    let disc = rho_s0 * rho_s0 - 4.0 * q;
    if disc < 0.0 {
        return Err(Error::InterfaceOverload {
            discriminant: disc / (rho_s0 * rho_s0),
        });
    }
    // small root of C² + rho_s0 C + q = 0 without cancellation
    Ok(-2.0 * q / (rho_s0 + disc.sqrt()))
}

/// Boundary amplitude `C2`: `-delta_rho_s`, or the small root of
/// `C2 (rho_s0 + C2) = -D p_i sqrt(rho_s0 / (lambda_s L))` when `exact`.
pub fn c2_amplitude(model: &HalfspaceModel, exact: bool) -> Result<f64> {
    let delta = boundary_drop(model)?;
    amplitude_for(model, delta, exact)
}

/// `rho_s(x) = rho_s0 (L - g)/L + C1 e^{x/x0} + C2 e^{-x/x0}` with
/// `C1 = 0` and `g = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormSolution {
    pub l: f64,
    pub x0: f64,
    pub delta_rho_s: f64,
    pub c2: f64,
    pub g: f64,
    /// Fluid first-integral constant, `p_i / rhat_f0`.
    pub c: f64,
    pub rho_s0: f64,
    pub classical: bool,
}

impl ClosedFormSolution {
    pub fn new(model: &HalfspaceModel, amplitude: Amplitude) -> Result<Self> {
        let l = compute_l(&model.mixture)?;
        Self::with_l(model, l, amplitude)
    }

    /// Builds the profile constants with a prescribed `L`, e.g. to compare
    /// the readings of [`LReading`].
    pub fn with_l(model: &HalfspaceModel, l: f64, amplitude: Amplitude) -> Result<Self> {
        require_density_preserving(&model.mixture)?;
        let l = check_branch(l)?;
        let delta = drop_for(model, l);
        let c2 = amplitude_for(model, delta, amplitude == Amplitude::Exact)?;
        let r = model.mixture.reference();
        Ok(Self {
            l,
            x0: x0_for(&model.mixture, l),
            delta_rho_s: delta,
            c2,
            g: 0.0,
            c: model.interface.p_i / r.rhat_f0(),
            rho_s0: r.rho_s0(),
            classical: model.lambda_s() == 0.0,
        })
    }

    fn decay(&self, x: f64) -> f64 {
        if self.classical {
            0.0
        } else {
            (-x / self.x0).exp()
        }
    }

    pub fn rho_s(&self, x: f64) -> f64 {
        self.rho_s0 + self.c2 * self.decay(x)
    }

    pub fn drho_s(&self, x: f64) -> f64 {
        if self.classical {
            0.0
        } else {
            -self.c2 / self.x0 * self.decay(x)
        }
    }

    pub fn d2rho_s(&self, x: f64) -> f64 {
        if self.classical {
            0.0
        } else {
            self.c2 / (self.x0 * self.x0) * self.decay(x)
        }
    }
}

/// Closed-form profile on the grid of `spec`, with `L` from first principles.
pub fn closed_form_profile(spec: &ProblemSpec) -> Result<Profile> {
    let model = spec.model();
    let l = compute_l(&model.mixture)?;
    closed_form_profile_with_l(spec, l)
}

/// Closed-form profile built with a prescribed `L`.
pub fn closed_form_profile_with_l(spec: &ProblemSpec, l: f64) -> Result<Profile> {
    spec.validate()?;
    let model = spec.model();
    let sol = ClosedFormSolution::with_l(&model, l, spec.amplitude)?;
    let x = stretched_grid(spec.truncation(sol.l), spec.nodes, spec.grid_stretch)?;
    let rho_s = x.iter().map(|&t| sol.rho_s(t)).collect();
    let drho_s = x.iter().map(|&t| sol.drho_s(t)).collect();
    let d2rho_s = x.iter().map(|&t| sol.d2rho_s(t)).collect();
    let r = model.mixture.reference();
    let far_field = FarFieldState {
        rho_s: r.rho_s0(),
        rho_f: r.rho_f0(),
        c: sol.c,
        p: model.interface.p_i,
        l: sol.l,
    };
    let mut profile = Profile::from_solid(
        Track::ClosedForm,
        model,
        x,
        rho_s,
        drho_s,
        d2rho_s,
        sol.c,
        far_field,
        sol.l,
        0,
        sol.classical,
    )?;
    profile.x0 = sol.x0;
    profile.delta_rho_s = sol.delta_rho_s;
    profile.c2 = sol.c2;
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::{MaterialModel, ReferenceState};
    use crate::fixtures;
    use crate::hyperstress::InterfaceParams;

    fn model_with_a(a_ss: f64, a_sf: f64, a_ff: f64) -> HalfspaceModel {
        let r = ReferenceState::new(1944.0, 120.0, 2160.0, 1200.0).unwrap();
        let m = MaterialModel::from_stiffness(&r, a_ss, a_sf, a_ff, 0.0, 0.0, 0.0125).unwrap();
        HalfspaceModel::new(
            Mixture::new(r, m),
            InterfaceParams::unit_partition(1e6, 1e-3).unwrap(),
        )
    }

    #[test]
    fn l_special_cases() {
        let m = model_with_a(1000.0, 0.0, 0.0);
        assert!((compute_l(&m.mixture).unwrap() - 1000.0).abs() < 1e-9);
        let m = model_with_a(0.0, 0.0, 0.0);
        assert!(matches!(compute_l(&m.mixture), Err(Error::Branching { l }) if l == 0.0));
        let fixture = fixtures::salt_brine_spec().model();
        let l = compute_l(&fixture.mixture).unwrap();
        assert!((l - 9840.0).abs() < 1e-9, "{l}");
        let alt = compute_l_reading(&fixture.mixture, LReading::ApparentDensityFactor);
        assert!((alt - l).abs() > 10.0);
    }

    #[test]
    fn l_requires_density_preserving() {
        let spec = fixtures::salt_brine_spec();
        let mut material = spec.material;
        material.c_s = 0.1;
        let mixture = spec.mixture().with_material(material);
        assert!(matches!(
            compute_l(&mixture),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn attenuation_length_scaling() {
        let r = ReferenceState::new(1944.0, 120.0, 2160.0, 1200.0).unwrap();
        let l = 1944.0 * 0.5;
        let m = MaterialModel::from_stiffness(&r, l, 0.0, 0.0, 0.0, 0.0, 0.5).unwrap();
        let x0 = attenuation_length(&Mixture::new(r, m)).unwrap();
        assert!((x0 - 1.0).abs() < 1e-12);
        let spec = fixtures::salt_brine_spec();
        let base = attenuation_length(&spec.mixture()).unwrap();
        let mut material = spec.material;
        material.lambda_s *= 4.0;
        let four = attenuation_length(&spec.mixture().with_material(material)).unwrap();
        assert!((four / base - 2.0).abs() < 1e-12);
        material.lambda_s = 0.0;
        assert_eq!(
            attenuation_length(&spec.mixture().with_material(material)).unwrap(),
            0.0
        );
    }

    #[test]
    fn boundary_drop_linearity() {
        let spec = fixtures::salt_brine_spec();
        let model = spec.model();
        let base = boundary_drop(&model).unwrap();
        assert!((base / 1944.0 - 1e-3).abs() < 1e-12);
        let mut doubled = model;
        doubled.interface.p_i *= 2.0;
        assert!((boundary_drop(&doubled).unwrap() / base - 2.0).abs() < 1e-12);
        let mut none = model;
        none.interface.d_coeff = 0.0;
        assert_eq!(boundary_drop(&none).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_roots() {
        let model = fixtures::salt_brine_spec().model();
        let mut none = model;
        none.interface.d_coeff = 0.0;
        assert_eq!(c2_amplitude(&none, true).unwrap(), 0.0);
        assert_eq!(c2_amplitude(&none, false).unwrap(), 0.0);
        let lin = c2_amplitude(&model, false).unwrap();
        let l = compute_l(&model.mixture).unwrap();
        let expected = -model.interface.double_force() / 1944.0f64.powi(2)
            * (1944.0 / (model.lambda_s() * l)).sqrt();
        assert!((lin / 1944.0 - expected).abs() < 1e-15);
        // the exact root satisfies the quadratic
        let exact = c2_amplitude(&model, true).unwrap();
        let rhs = -model.interface.double_force() * (1944.0 / (model.lambda_s() * l)).sqrt();
        assert!((exact * (1944.0 + exact) - rhs).abs() < 1e-9 * rhs.abs());
        // quadratic convergence of the linearized root
        let gap = |scale: f64| {
            let mut m = model;
            m.interface.d_coeff *= scale;
            (c2_amplitude(&m, true).unwrap() - c2_amplitude(&m, false).unwrap()).abs()
        };
        let ratio = gap(1.0) / gap(0.5);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
        let mut overload = model;
        overload.interface.d_coeff *= 400.0;
        assert!(matches!(
            c2_amplitude(&overload, true),
            Err(Error::InterfaceOverload { .. })
        ));
    }

    #[test]
    fn profile_endpoints() {
        let spec = fixtures::salt_brine_spec();
        let p = closed_form_profile(&spec).unwrap();
        let drop = boundary_drop(&spec.model()).unwrap();
        assert!((1944.0 - p.rho_s[0] - drop).abs() < 1e-12);
        let tail = (p.rho_s[p.len() - 1] - 1944.0).abs();
        assert!((tail - drop * (-10.0f64).exp()).abs() < 1e-12);
        assert!(p.rho_s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn uniform_without_double_force() {
        let mut spec = fixtures::salt_brine_spec();
        spec.interface.d_coeff = 0.0;
        let p = closed_form_profile(&spec).unwrap();
        assert!(p.rho_s.iter().all(|&r| r == 1944.0));
        assert!(p.p.iter().all(|&v| (v - 1e6).abs() < 1e-9));
        assert_eq!(p.delta_rho_s, 0.0);
        assert!(p.x0 > 0.0);
    }

    #[test]
    fn classical_limit_is_flagged_uniform() {
        let mut spec = fixtures::salt_brine_spec();
        spec.material.lambda_s = 0.0;
        let p = closed_form_profile(&spec).unwrap();
        assert!(p.classical);
        assert_eq!(p.x0, 0.0);
        assert!(p.rho_s.iter().all(|&r| r == 1944.0));
    }
}
