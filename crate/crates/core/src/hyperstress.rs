//! Second-gradient quantities: the tensors `A_b`, `C_b`, the solid
//! hyperstress, interface actions and one-dimensional boundary residuals.
//!
//! Only `∂eps/∂f_ss = lambda_s / 2` is nonzero, so every fluid-indexed
//! second-gradient tensor vanishes.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::constitutive::{Constituent, Mixture};
use crate::error::{invalid, Result};

/// Densities, their gradients and the solid density Laplacian at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub rho_s: f64,
    pub rho_f: f64,
    pub grad_rho_s: Vector3<f64>,
    pub grad_rho_f: Vector3<f64>,
    pub lap_rho_s: f64,
}

impl FieldPoint {
    /// Point of a field depending on `x` only.
    pub fn one_d(rho_s: f64, rho_f: f64, drho_s: f64, drho_f: f64, d2rho_s: f64) -> Self {
        Self {
            rho_s,
            rho_f,
            grad_rho_s: Vector3::new(drho_s, 0.0, 0.0),
            grad_rho_f: Vector3::new(drho_f, 0.0, 0.0),
            lap_rho_s: d2rho_s,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.rho_s > 0.0
            && self.rho_f > 0.0
            && self.grad_rho_s.iter().all(|v| v.is_finite())
            && self.grad_rho_f.iter().all(|v| v.is_finite())
            && self.lap_rho_s.is_finite()
    }
}

/// Interface parameters of the saturated-matrix / fluid contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceParams {
    /// Incumbent fluid pressure.
    pub p_i: f64,
    /// Double-force coefficient: the boundary double force is `d_coeff·p_i`.
    pub d_coeff: f64,
    pub alpha: f64,
    pub l: f64,
}

impl InterfaceParams {
    pub fn new(p_i: f64, d_coeff: f64, alpha: f64, l: f64) -> Result<Self> {
        if !(p_i.is_finite() && p_i >= 0.0) {
            return Err(invalid(
                "p_i",
                format!("must be finite and >= 0, got {p_i}"),
            ));
        }
        if !d_coeff.is_finite() {
            return Err(invalid("D_coeff", "must be finite"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid("alpha", format!("must lie in [0, 1], got {alpha}")));
        }
        if !(l.is_finite() && l >= 0.0) {
            return Err(invalid("l", format!("must be finite and >= 0, got {l}")));
        }
        Ok(Self {
            p_i,
            d_coeff,
            alpha,
            l,
        })
    }

    /// `alpha = 1`, `l = 1`: the partition the boundary-value problem uses.
    pub fn unit_partition(p_i: f64, d_coeff: f64) -> Result<Self> {
        Self::new(p_i, d_coeff, 1.0, 1.0)
    }

    pub fn double_force(&self) -> f64 {
        self.d_coeff * self.p_i
    }

    pub fn is_unit_partition(&self) -> bool {
        self.alpha == 1.0 && self.l == 1.0
    }
}

/// Third-order tensor stored as `data[i][j][k]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tensor3 {
    pub data: [[[f64; 3]; 3]; 3],
}

impl Tensor3 {
    /// Contraction on the last index, `(T·n)_ij = Σ_k T_ijk n_k`.
    pub fn dot(&self, n: &Vector3<f64>) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| (0..3).map(|k| self.data[i][j][k] * n[k]).sum())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().flatten().all(|&v| v == 0.0)
    }
}

/// `A_b = Σ_a ∂eps/∂f_ab (∇rho_a ⊗ ∇rho_b + f_ab I)`.
pub fn tensor_a(b: Constituent, point: &FieldPoint, lambda_s: f64) -> Matrix3<f64> {
    match b {
        Constituent::Fluid => Matrix3::zeros(),
        Constituent::Solid => {
            let g = &point.grad_rho_s;
            (g * g.transpose() + Matrix3::identity() * g.norm_squared()) * (0.5 * lambda_s)
        }
    }
}

/// `C_b = Σ_a ∂eps/∂f_ab rho_b (I ⊗ ∇rho_a)`.
pub fn tensor_c(b: Constituent, point: &FieldPoint, lambda_s: f64) -> Tensor3 {
    let mut t = Tensor3::default();
    if b == Constituent::Solid {
        let scale = 0.5 * lambda_s * point.rho_s;
        for i in 0..3 {
            for k in 0..3 {
                t.data[i][i][k] = scale * point.grad_rho_s[k];
            }
        }
    }
    t
}

/// `(lambda_s rho_s Δrho_s + lambda_s/2 |∇rho_s|²) I - lambda_s ∇rho_s ⊗ ∇rho_s`.
pub fn solid_hyperstress(point: &FieldPoint, lambda_s: f64) -> Matrix3<f64> {
    let g = &point.grad_rho_s;
    let iso = lambda_s * point.rho_s * point.lap_rho_s + 0.5 * lambda_s * g.norm_squared();
    Matrix3::identity() * iso - g * g.transpose() * lambda_s
}

/// Treatment of the second-gradient terms in one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondGradientForm {
    /// `lambda_s rho_s rho_s'' - lambda_s/2 rho_s'²` and flux `lambda_s rho_s rho_s'`.
    Full,
    /// First order about `rho_ref`: `lambda_s rho_ref rho_s''` and flux
    /// `lambda_s rho_ref rho_s'`.
    Linearized { rho_ref: f64 },
}

impl SecondGradientForm {
    /// xx-component of the solid hyperstress.
    pub fn hyperstress_xx(&self, lambda_s: f64, rho_s: f64, drho_s: f64, d2rho_s: f64) -> f64 {
        match *self {
            SecondGradientForm::Full => {
                lambda_s * rho_s * d2rho_s - 0.5 * lambda_s * drho_s * drho_s
            }
            SecondGradientForm::Linearized { rho_ref } => lambda_s * rho_ref * d2rho_s,
        }
    }

    /// `lambda_s rho_s rho_s'` (the x-directed double-force flux).
    pub fn flux(&self, lambda_s: f64, rho_s: f64, drho_s: f64) -> f64 {
        match *self {
            SecondGradientForm::Full => lambda_s * rho_s * drho_s,
            SecondGradientForm::Linearized { rho_ref } => lambda_s * rho_ref * drho_s,
        }
    }
}

/// Traction magnitudes along `n`: `t_s = alpha v_s^l p_i`, `t_f = (1 - alpha v_s^l) p_i`.
pub fn applied_tractions(v_s_boundary: f64, params: &InterfaceParams) -> (f64, f64) {
    let share = params.alpha * v_s_boundary.powf(params.l);
    let t_s = share * params.p_i;
    (t_s, params.p_i - t_s)
}

/// Residual of the double-force condition `lambda_s rho_s ∂rho_s/∂n + d = 0`.
///
/// This scalar is twice the normal-normal component of `C_s·n`, because
/// `∂eps/∂f_ss = lambda_s / 2`; the condition is stated with the full
/// `lambda_s`.
pub fn double_force_residual(lambda_s: f64, rho_s: f64, normal_derivative: f64, d: f64) -> f64 {
    lambda_s * rho_s * normal_derivative + d
}

/// Residuals of the three boundary conditions at `x = 0` (or at the far
/// boundary when `at_infinity`), for `alpha = l = 1`:
///
/// 1. `-[P_s + p v_s (1 - v_s c_s)] + H - (-v_s p_i)`
/// 2. `P_f + p v_f (1 - v_f c_f) - v_f p_i`
/// 3. `lambda_s rho_s rho_s' - D p_i` at `x = 0`, `lambda_s rho_s rho_s'` at infinity
///
/// where `H` is the xx-hyperstress in the requested form.
pub fn bc_residuals_1d(
    mixture: &Mixture,
    point: &FieldPoint,
    p: f64,
    params: &InterfaceParams,
    at_infinity: bool,
    form: SecondGradientForm,
) -> Result<[f64; 3]> {
    if !params.is_unit_partition() {
        return Err(invalid(
            "interface",
            format!(
                "boundary residuals require alpha = 1 and l = 1 (got alpha = {}, l = {})",
                params.alpha, params.l
            ),
        ));
    }
    let lambda_s = mixture.material().lambda_s;
    let (rho_s, rho_f) = (point.rho_s, point.rho_f);
    let drho = point.grad_rho_s.x;
    let (ps, pf) = mixture.thermo_pressures(rho_s, rho_f);
    let v_s = mixture.volume_fraction(Constituent::Solid, rho_s)?;
    let v_f = mixture.volume_fraction(Constituent::Fluid, rho_f)?;
    let b_s = mixture.biot_factor(Constituent::Solid, rho_s)?;
    let b_f = mixture.biot_factor(Constituent::Fluid, rho_f)?;
    let h = form.hyperstress_xx(lambda_s, rho_s, drho, point.lap_rho_s);
    let r1 = -(ps + p * v_s * b_s) + h + v_s * params.p_i;
    let r2 = pf + p * v_f * b_f - v_f * params.p_i;
    let flux = form.flux(lambda_s, rho_s, drho);
    let r3 = if at_infinity {
        flux
    } else {
        flux - params.double_force()
    };
    Ok([r1, r2, r3])
}

/// `p(1 - Σ v_a² c_a) + Σ P_a - H - p_i`, the summed first integral once
/// the interface conditions have fixed its constant.
pub fn summed_first_integral_residual_1d(
    mixture: &Mixture,
    point: &FieldPoint,
    p: f64,
    p_i: f64,
    form: SecondGradientForm,
) -> Result<f64> {
    let lambda_s = mixture.material().lambda_s;
    let (ps, pf) = mixture.thermo_pressures(point.rho_s, point.rho_f);
    let s = mixture.compressibility_sum(point.rho_s, point.rho_f)?;
    let h = form.hyperstress_xx(lambda_s, point.rho_s, point.grad_rho_s.x, point.lap_rho_s);
    Ok(p * s + ps + pf - h - p_i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::{MaterialModel, ReferenceState};
    use nalgebra::Rotation3;
    use proptest::prelude::*;

    fn mixture(lambda_s: f64) -> Mixture {
        let r = ReferenceState::new(1944.0, 120.0, 2160.0, 1200.0).unwrap();
        Mixture::new(
            r,
            MaterialModel::new(5.0, 2.0, 0.5, 0.0, 0.0, lambda_s).unwrap(),
        )
    }

    fn point(g: Vector3<f64>, lap: f64) -> FieldPoint {
        FieldPoint {
            rho_s: 1944.0,
            rho_f: 120.0,
            grad_rho_s: g,
            grad_rho_f: -g * (1200.0 / 2160.0),
            lap_rho_s: lap,
        }
    }

    #[test]
    fn tensor_a_values() {
        assert_eq!(
            tensor_a(Constituent::Solid, &point(Vector3::zeros(), 1.0), 2.0),
            Matrix3::zeros()
        );
        let g = 3.0;
        let a = tensor_a(
            Constituent::Solid,
            &point(Vector3::new(g, 0.0, 0.0), 0.0),
            2.0,
        );
        assert_eq!(
            a,
            Matrix3::from_diagonal(&Vector3::new(2.0 * g * g, g * g, g * g))
        );
        let af = tensor_a(
            Constituent::Fluid,
            &point(Vector3::new(g, 1.0, 0.0), 0.0),
            2.0,
        );
        assert_eq!(af, Matrix3::zeros());
    }

    #[test]
    fn tensor_c_contraction_carries_half_the_flux_scalar() {
        let lambda = 0.8;
        let g = 2.5;
        let pt = point(Vector3::new(g, 0.0, 0.0), 0.0);
        assert!(tensor_c(Constituent::Solid, &point(Vector3::zeros(), 0.0), lambda).is_zero());
        assert!(tensor_c(Constituent::Fluid, &pt, lambda).is_zero());
        let n = Vector3::new(1.0, 0.0, 0.0);
        let cn = tensor_c(Constituent::Solid, &pt, lambda).dot(&n);
        let flux_scalar = lambda * pt.rho_s * g;
        assert!((cn - Matrix3::identity() * (0.5 * flux_scalar)).norm() < 1e-9);
        // the boundary condition keeps the full lambda_s
        assert_eq!(
            double_force_residual(lambda, pt.rho_s, g, -flux_scalar),
            0.0
        );
    }

    #[test]
    fn hyperstress_vanishes_for_uniform_or_classical() {
        assert_eq!(
            solid_hyperstress(&point(Vector3::zeros(), 0.0), 1.0),
            Matrix3::zeros()
        );
        assert_eq!(
            solid_hyperstress(&point(Vector3::new(1.0, 2.0, 3.0), 4.0), 0.0),
            Matrix3::zeros()
        );
    }

    #[test]
    fn hyperstress_xx_matches_one_dimensional_form() {
        let (lambda, rho, d, d2) = (0.3, 1950.0, 0.7, -0.2);
        let t = solid_hyperstress(&FieldPoint::one_d(rho, 120.0, d, 0.0, d2), lambda);
        let full = SecondGradientForm::Full.hyperstress_xx(lambda, rho, d, d2);
        assert!((t[(0, 0)] - full).abs() < 1e-12);
        assert!((t[(1, 1)] - (lambda * rho * d2 + 0.5 * lambda * d * d)).abs() < 1e-12);
    }

    #[test]
    fn tractions_partition() {
        let p = InterfaceParams::new(10.0, 0.0, 1.0, 1.0).unwrap();
        let (ts, tf) = applied_tractions(0.9, &p);
        assert!((ts - 9.0).abs() < 1e-12 && (tf - 1.0).abs() < 1e-12);
        let zero = InterfaceParams::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(applied_tractions(0.9, &zero), (0.0, 0.0));
        let fluid_only = InterfaceParams::new(10.0, 0.0, 0.0, 2.0).unwrap();
        assert_eq!(applied_tractions(0.9, &fluid_only), (0.0, 10.0));
    }

    #[test]
    fn bc_residuals_vanish_at_reference() {
        let m = mixture(0.0125);
        let params = InterfaceParams::unit_partition(1e6, 0.0).unwrap();
        let pt = FieldPoint::one_d(1944.0, 120.0, 0.0, 0.0, 0.0);
        for at_inf in [false, true] {
            let r =
                bc_residuals_1d(&m, &pt, 1e6, &params, at_inf, SecondGradientForm::Full).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-9), "{r:?}");
        }
        let none = InterfaceParams::unit_partition(0.0, 1e-3).unwrap();
        let r = bc_residuals_1d(&m, &pt, 0.0, &none, false, SecondGradientForm::Full).unwrap();
        assert_eq!(r, [0.0, 0.0, 0.0]);
        let general = InterfaceParams::new(1e6, 0.0, 0.5, 1.0).unwrap();
        assert!(bc_residuals_1d(&m, &pt, 1e6, &general, false, SecondGradientForm::Full).is_err());
    }

    #[test]
    fn summed_first_integral_classical_limit() {
        let r = ReferenceState::new(1944.0, 120.0, 2160.0, 1200.0).unwrap();
        let m = Mixture::new(r, MaterialModel::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap());
        let pt = FieldPoint::one_d(1950.0, 116.0, 3.0, 0.0, 9.0);
        let res =
            summed_first_integral_residual_1d(&m, &pt, 7.0, 5.0, SecondGradientForm::Full).unwrap();
        assert!((res - 2.0).abs() < 1e-12);
        let at_ref = FieldPoint::one_d(1944.0, 120.0, 0.0, 0.0, 0.0);
        let m = mixture(0.01);
        assert_eq!(
            summed_first_integral_residual_1d(&m, &at_ref, 5.0, 5.0, SecondGradientForm::Full)
                .unwrap(),
            0.0
        );
    }

    /// d/dx of the xx-hyperstress equals lambda rho rho''' for any 1-D field;
    /// central differences of the xx-component converge to it at O(h²).
    #[test]
    fn divergence_reduces_to_third_derivative() {
        let lambda = 0.05;
        let rho = |x: f64| 1944.0 - 2.0 * (-x / 0.3).exp() + 0.5 * (3.0 * x).sin();
        let d1 = |x: f64| 2.0 / 0.3 * (-x / 0.3).exp() + 1.5 * (3.0 * x).cos();
        let d2 = |x: f64| -2.0 / 0.09 * (-x / 0.3).exp() - 4.5 * (3.0 * x).sin();
        let d3 = |x: f64| 2.0 / 0.027 * (-x / 0.3).exp() - 13.5 * (3.0 * x).cos();
        let txx = |x: f64| {
            solid_hyperstress(&FieldPoint::one_d(rho(x), 120.0, d1(x), 0.0, d2(x)), lambda)[(0, 0)]
        };
        let x = 0.2;
        let exact = lambda * rho(x) * d3(x);
        let err = |h: f64| ((txx(x + h) - txx(x - h)) / (2.0 * h) - exact).abs();
        let (e1, e2) = (err(1e-2), err(5e-3));
        assert!(e1 < 1e-2 * exact.abs());
        let ratio = e1 / e2;
        assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
    }

    proptest! {
        #[test]
        fn hyperstress_is_objective(
            gx in -10.0..10.0f64, gy in -10.0..10.0f64, gz in -10.0..10.0f64,
            ax in -1.0..1.0f64, ay in -1.0..1.0f64, az in -1.0..1.0f64,
            angle in -3.1..3.1f64, lap in -50.0..50.0f64,
        ) {
            let axis = Vector3::new(ax, ay, az);
            prop_assume!(axis.norm() > 1e-3);
            let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
            let g = Vector3::new(gx, gy, gz);
            let base = solid_hyperstress(&point(g, lap), 0.7);
            let rotated = solid_hyperstress(&point(rot * g, lap), 0.7);
            let expected = rot.matrix() * base * rot.matrix().transpose();
            prop_assert!((rotated - expected).norm() <= 1e-9 * (1.0 + base.norm()));
        }

        #[test]
        fn traction_partition_sums_to_incumbent_pressure(
            p_i in 0.0..1e7f64, alpha in 0.0..1.0f64, l in 0.0..4.0f64, v in 0.01..0.99f64,
        ) {
            let params = InterfaceParams::new(p_i, 0.0, alpha, l).unwrap();
            let (ts, tf) = applied_tractions(v, &params);
            prop_assert!(ts >= 0.0 && tf >= 0.0);
            prop_assert!((ts + tf - p_i).abs() <= 1e-9 * p_i.max(1.0));
        }
    }
}
