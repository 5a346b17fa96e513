//! Residual diagnostics of a profile against every equation it should
//! satisfy.
//!
//! Residuals are relative. Pressure-type balances are scaled by
//! `max(p_i, max|H|, max|Σ P_a|)`, the second-gradient equations by the
//! magnitude of their second-gradient term, the double-force condition by
//! `|D p_i|`, saturation by `rhat_f0 rhat_s0`.
//!
//! Boundary balances are checked in the same first-order form the profile
//! is built with: linearized about the far-field state. Their full
//! nonlinear defects are listed as informational entries.

use std::fmt;

use super::{GWeight, Profile};
use crate::hyperstress::{bc_residuals_1d, FieldPoint, SecondGradientForm};

/// One diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    /// Informational entries never fail a report.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, value: f64) {
        self.checks.push(Check {
            name,
            value,
            informational: false,
        });
    }

    fn info(&mut self, name: &'static str, value: f64) {
        self.checks.push(Check {
            name,
            value,
            informational: true,
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.value)
    }

    /// Largest non-informational residual (NaN counts as infinite).
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| {
                if c.value.is_nan() {
                    f64::INFINITY
                } else {
                    c.value
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }

    /// Names of non-informational checks above `tol`.
    pub fn failures(&self, tol: f64) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.informational && !(c.value <= tol))
            .map(|c| c.name)
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.informational { " (info)" } else { "" };
            writeln!(f, "{}={:.6e}{}", c.name, c.value, tag)?;
        }
        Ok(())
    }
}

fn nonzero(scale: f64, fallback: f64) -> f64 {
    if scale > 0.0 && scale.is_finite() {
        scale
    } else if fallback > 0.0 {
        fallback
    } else {
        1.0
    }
}

fn max_abs(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(
        0.0,
        |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) },
    )
}

/// Evaluates every residual of `profile`; never fails, unevaluable
/// residuals are reported as NaN.
pub fn validate_profile(profile: &Profile) -> ValidationReport {
    let mut report = ValidationReport::default();
    let model = &profile.model;
    let m = &model.mixture;
    let r = *m.reference();
    let n = profile.len();
    let p_i = model.interface.p_i;
    let lambda = model.lambda_s();
    let k = lambda * r.rho_s0();
    let c = profile.c;
    let h: Vec<f64> = (0..n).map(|i| profile.hyperstress(i)).collect();
    let sum_p: Vec<f64> = (0..n).map(|i| profile.p_s[i] + profile.p_f[i]).collect();
    let h_max = max_abs(h.iter().copied());
    let scale_p = nonzero(p_i.max(h_max).max(max_abs(sum_p.iter().copied())), 0.0);

    report.push(
        "saturation",
        max_abs((0..n).map(|i| m.saturation_residual(profile.rho_s[i], profile.rho_f[i])))
            / (r.rhat_f0() * r.rhat_s0()),
    );

    // fluid first integral: constant along the profile
    let fi: Vec<f64> = (0..n)
        .map(|i| {
            model
                .fluid_first_integral(profile.rho_s[i], profile.rho_f[i], profile.p[i])
                .unwrap_or(f64::NAN)
        })
        .collect();
    let mean = fi.iter().sum::<f64>() / n as f64;
    let spread = fi.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - fi.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    report.push(
        "fluid_first_integral_spread",
        spread / nonzero(mean.abs(), 1.0),
    );
    report.info("fluid_first_integral_mean", mean);

    let summed = max_abs((0..n).map(|i| {
        let s = m
            .compressibility_sum(profile.rho_s[i], profile.rho_f[i])
            .unwrap_or(f64::NAN);
        profile.p[i] * s + sum_p[i] - h[i] - p_i
    }));
    report.push("summed_first_integral", summed / scale_p);

    let f: Vec<f64> = (0..n)
        .map(|i| {
            model
                .assemble_f(profile.rho_s[i], profile.rho_f[i], c)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let scale_h = nonzero(h_max, scale_p);
    report.push(
        "ode_normal_form",
        max_abs((0..n).map(|i| h[i] - f[i])) / scale_h,
    );

    if lambda > 0.0 {
        let g1 = model.f_saturated(r.rho_s0(), c).unwrap_or(f64::NAN) / r.rho_s0();
        let lhs: Vec<f64> = profile.d2rho_s.iter().map(|d| lambda * d).collect();
        let integrated = max_abs((0..n).map(|i| {
            let g = model
                .assemble_g(profile.rho_s[i], c, GWeight::FirstOrder)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
            lhs[i] - g - g1
        }));
        report.push(
            "ode_integrated",
            integrated / nonzero(max_abs(lhs.iter().copied()), scale_p / r.rho_s0()),
        );
    }

    if m.material().is_density_preserving() {
        // p eliminated between the summed and the fluid first integrals
        let incompressible = max_abs((0..n).map(|i| {
            let e_f = m.energy_slope_fluid(profile.rho_s[i], profile.rho_f[i]);
            (c - e_f) * r.rhat_f0() - (-sum_p[i] + h[i] + p_i)
        }));
        report.push("ode_incompressible", incompressible / scale_p);
    }

    boundary_checks(profile, &mut report, scale_p, k);
    report
}

fn boundary_checks(profile: &Profile, report: &mut ValidationReport, scale_p: f64, k: f64) {
    let model = &profile.model;
    let m = &model.mixture;
    let p_i = model.interface.p_i;
    let far = profile.far_field;
    let dp = model.interface.double_force();
    let flux_scale = nonzero(dp.abs(), k * max_abs(profile.drho_s.iter().copied()));

    let Ok(sp) = m.saturated_point(far.rho_s) else {
        for name in ["bc_x0_solid", "bc_x0_fluid", "bc_far_solid", "bc_far_fluid"] {
            report.push(name, f64::NAN);
        }
        return;
    };
    let p_inf = far.p;
    let r1_base = -sp.p_s - p_inf * sp.v_s * sp.b_s + sp.v_s * p_i;
    let r1_rho = -sp.dp_s - sp.dv_s * (p_inf * sp.b_s - p_i) - sp.v_s * p_inf * sp.db_s;
    let r1_p = -sp.v_s * sp.b_s;
    let r2_base = sp.p_f + sp.v_f * (p_inf * sp.b_f - p_i);
    let r2_rho = sp.dp_f + sp.dv_f * (p_inf * sp.b_f - p_i) + sp.v_f * p_inf * sp.db_f;
    let r2_p = sp.v_f * sp.b_f;

    let d_rho = profile.rho_s[0] - far.rho_s;
    let d_p = profile.p[0] - p_inf;
    let h0 = profile.hyperstress(0);
    report.push(
        "bc_x0_solid",
        (r1_base + r1_rho * d_rho + r1_p * d_p + h0).abs() / scale_p,
    );
    report.push(
        "bc_x0_fluid",
        (r2_base + r2_rho * d_rho + r2_p * d_p).abs() / scale_p,
    );
    report.push(
        "bc_x0_double_force",
        (k * profile.drho_s[0] - dp).abs() / flux_scale,
    );
    // x -> ∞: all derivatives vanish at the far-field state
    report.push("bc_far_solid", r1_base.abs() / scale_p);
    report.push("bc_far_fluid", r2_base.abs() / scale_p);
    report.push("bc_far_double_force", 0.0);

    let last = profile.len() - 1;
    report.info(
        "tail_at_X",
        (profile.rho_s[last] - far.rho_s).abs() / nonzero(profile.delta_rho_s.abs(), 1.0),
    );
    report.info(
        "bc_X_double_force",
        (k * profile.drho_s[last]).abs() / flux_scale,
    );

    let point = FieldPoint::one_d(
        profile.rho_s[0],
        profile.rho_f[0],
        profile.drho_s[0],
        0.0,
        profile.d2rho_s[0],
    );
    match bc_residuals_1d(
        m,
        &point,
        profile.p[0],
        &model.interface,
        false,
        SecondGradientForm::Full,
    ) {
        Ok([r1, r2, r3]) => {
            report.info("bc_x0_solid_nonlinear", r1.abs() / scale_p);
            report.info("bc_x0_fluid_nonlinear", r2.abs() / scale_p);
            report.info("bc_x0_double_force_nonlinear", r3.abs() / flux_scale);
        }
        Err(_) => report.info("bc_x0_solid_nonlinear", f64::NAN),
    }
}
