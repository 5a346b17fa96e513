//! Finite-difference Newton solver for compressible constituents.
//!
//! The far-field state `(rho_s∞, c)` is fixed first by the two algebraic
//! conditions that hold where all derivatives vanish: `F = 0` and the fluid
//! boundary balance `P_f + p v_f (1 - v_f c_f) = v_f p_i` with `p` from the
//! fluid first integral. The nodal densities then solve
//!
//! ```text
//! row 0:        (lambda_s rho_s0 rho_s'(0) - D p_i) / ell          = 0
//! row j:        lambda_s rho_s0 D2[rho_s]_j - F(rho_s_j, c)         = 0
//! row N-1:      lambda_s rho_s0 (rho_s'(X) + (rho_s(X) - rho_s∞)/ell) / ell = 0
//! ```
//!
//! The last row admits only the decaying mode `e^{-x/ell}` of the
//! linearization about the far field, `ell = sqrt(lambda_s rho_s0 / L∞)`,
//! so the truncated problem reproduces the half-space solution instead of
//! reflecting it at `X`.

use serde::Serialize;

use super::grid::{
    backward_first_weights, derivatives, forward_first_weights, second_derivative_weights,
    stretched_grid,
};
use super::{HalfspaceModel, ProblemSpec, Profile, Track};
use crate::error::{Error, Result};

const FAR_FIELD_MAX_ITER: usize = 60;
const MAX_HALVINGS: usize = 30;
/// Multiple of the rounding-error estimate accepted as converged.
const ROUNDOFF_FACTOR: f64 = 4.0;

/// State approached as `x -> ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldState {
    pub rho_s: f64,
    pub rho_f: f64,
    /// Fluid first-integral constant.
    pub c: f64,
    /// Saturation pressure.
    pub p: f64,
    /// `dF/drho_s` along saturation.
    pub l: f64,
}

/// Residuals `(F, Φ)` of the far-field conditions and their Jacobian.
fn far_field_system(
    model: &HalfspaceModel,
    rho_s: f64,
    c: f64,
) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let m = &model.mixture;
    let mat = m.material();
    let sp = m.saturated_point(rho_s)?;
    let (f, df_ds, df_dc) = model.f_saturated_with_slope(rho_s, c)?;
    let e_f = m.energy_slope_fluid(rho_s, sp.rho_f);
    let de_f = mat.eps_sf + mat.eps_ff * sp.drho_f;
    let p_i = model.interface.p_i;
    let phi = sp.p_f + sp.rho_f * (c - e_f) - sp.v_f * p_i;
    let dphi_ds = sp.dp_f + sp.drho_f * (c - e_f) - sp.rho_f * de_f - sp.dv_f * p_i;
    Ok(([f, phi], [[df_ds, df_dc], [dphi_ds, sp.rho_f]]))
}

/// Solves `F(rho_s, c) = 0`, `Φ(rho_s, c) = 0` by Newton iteration from the
/// reference density and `c = p_i / rhat_f0`.
pub fn far_field_state(model: &HalfspaceModel) -> Result<FarFieldState> {
    let r = *model.mixture.reference();
    let p_i = model.interface.p_i;
    let mut rho = r.rho_s0();
    let mut c = p_i / r.rhat_f0();
    let scale = [
        p_i.max(1.0),
        (r.volume_fraction(crate::Constituent::Fluid) * p_i).max(1.0),
    ];
    let mut converged = false;
    let mut last = f64::INFINITY;
    for _ in 0..FAR_FIELD_MAX_ITER {
        let (res, jac) = far_field_system(model, rho, c)?;
        last = (res[0] / scale[0]).abs().max((res[1] / scale[1]).abs());
        if last <= 1e-15 {
            converged = true;
            break;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NewtonDivergence {
                iterations: 0,
                residual: last,
                reason: "singular far-field Jacobian".into(),
            });
        }
        let d_rho = (-res[0] * jac[1][1] + res[1] * jac[0][1]) / det;
        let d_c = (-res[1] * jac[0][0] + res[0] * jac[1][0]) / det;
        rho += d_rho;
        c += d_c;
        if d_rho.abs() <= 1e-15 * rho && d_c.abs() <= 1e-15 * c.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NewtonDivergence {
            iterations: FAR_FIELD_MAX_ITER,
            residual: last,
            reason: "far-field state did not converge".into(),
        });
    }
    let (_, l, _) = model.f_saturated_with_slope(rho, c)?;
    if !(l > 0.0) {
        return Err(Error::Branching { l });
    }
    let rho_f = model.mixture.solve_rho_f_saturated(rho)?;
    Ok(FarFieldState {
        rho_s: rho,
        rho_f,
        c,
        p: model.pressure_from_c(rho, rho_f, c)?,
        l,
    })
}

/// Tridiagonal system with one extra entry in the first row (column 2) and
/// in the last row (column n-3).
struct Banded {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    first_extra: f64,
    last_extra: f64,
}

impl Banded {
    fn zeros(n: usize) -> Self {
        Self {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
            first_extra: 0.0,
            last_extra: 0.0,
        }
    }

    /// Solves `J x = rhs` in place of `rhs`.
    fn solve(mut self, rhs: &mut [f64]) -> Result<()> {
        let n = rhs.len();
        // fold the boundary rows' third entries into tridiagonal form
        let k = self.first_extra / self.sup[1];
        self.diag[0] -= k * self.sub[1];
        self.sup[0] -= k * self.diag[1];
        rhs[0] -= k * rhs[1];
        let k = self.last_extra / self.sub[n - 2];
        self.sub[n - 1] -= k * self.diag[n - 2];
        self.diag[n - 1] -= k * self.sup[n - 2];
        rhs[n - 1] -= k * rhs[n - 2];
        // Thomas
        for i in 1..n {
            let w = self.sub[i] / self.diag[i - 1];
            self.diag[i] -= w * self.sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        if self.diag.iter().any(|d| *d == 0.0 || !d.is_finite()) {
            return Err(Error::NewtonDivergence {
                iterations: 0,
                residual: f64::NAN,
                reason: "singular Jacobian".into(),
            });
        }
        rhs[n - 1] /= self.diag[n - 1];
        for i in (0..n - 1).rev() {
            rhs[i] = (rhs[i] - self.sup[i] * rhs[i + 1]) / self.diag[i];
        }
        Ok(())
    }
}

struct Discretization<'a> {
    model: &'a HalfspaceModel,
    x: &'a [f64],
    k: f64,
    ell: f64,
    far: FarFieldState,
}

impl Discretization<'_> {
    /// Unknowns are deviations from the far-field density.
    fn rho(&self, delta: f64) -> f64 {
        self.far.rho_s + delta
    }

    /// Rounding error of the largest residual row: on strongly clustered
    /// grids the stencil weights are large enough that this floor exceeds
    /// the requested tolerance.
    fn roundoff_floor(&self, delta: &[f64]) -> Result<f64> {
        let x = self.x;
        let mut floor: f64 = 0.0;
        for i in 1..delta.len() - 1 {
            let w = second_derivative_weights(x[i] - x[i - 1], x[i + 1] - x[i]);
            let f = self.model.f_saturated(self.rho(delta[i]), self.far.c)?;
            // nodal values carry a relative rounding error that the weights amplify
            let terms = self.k
                * (w[0] * delta[i - 1])
                    .abs()
                    .max((w[1] * delta[i]).abs())
                    .max((w[2] * delta[i + 1]).abs());
            floor = floor.max(terms.max(f.abs()));
        }
        Ok(floor * f64::EPSILON)
    }

    fn residual(&self, delta: &[f64], jac: Option<&mut Banded>) -> Result<Vec<f64>> {
        let n = delta.len();
        let x = self.x;
        let mut r = vec![0.0; n];
        let mut jac = jac;
        let dp = self.model.interface.double_force();
        let w = forward_first_weights(x[1] - x[0], x[2] - x[1]);
        let s = self.k / self.ell;
        r[0] = s * (w[0] * delta[0] + w[1] * delta[1] + w[2] * delta[2]) - dp / self.ell;
        if let Some(j) = jac.as_deref_mut() {
            j.diag[0] = s * w[0];
            j.sup[0] = s * w[1];
            j.first_extra = s * w[2];
        }
        for i in 1..n - 1 {
            let w = second_derivative_weights(x[i] - x[i - 1], x[i + 1] - x[i]);
            let (f, df, _) = self
                .model
                .f_saturated_with_slope(self.rho(delta[i]), self.far.c)?;
            let (h1, h2) = (x[i] - x[i - 1], x[i + 1] - x[i]);
            // difference of slopes: far less cancellation than the weighted sum
            let d2 =
                2.0 / (h1 + h2) * ((delta[i + 1] - delta[i]) / h2 - (delta[i] - delta[i - 1]) / h1);
            r[i] = self.k * d2 - f;
            if let Some(j) = jac.as_deref_mut() {
                j.sub[i] = self.k * w[0];
                j.diag[i] = self.k * w[1] - df;
                j.sup[i] = self.k * w[2];
            }
        }
        let w = backward_first_weights(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3]);
        r[n - 1] = s
            * (w[0] * delta[n - 1]
                + w[1] * delta[n - 2]
                + w[2] * delta[n - 3]
                + delta[n - 1] / self.ell);
        if let Some(j) = jac {
            j.diag[n - 1] = s * (w[0] + 1.0 / self.ell);
            j.sub[n - 1] = s * w[1];
            j.last_extra = s * w[2];
        }
        Ok(r)
    }
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Uniform profile at the far-field state: the solution without gradient
/// energy, where no boundary layer can form.
fn classical_profile(
    spec: &ProblemSpec,
    model: HalfspaceModel,
    far: FarFieldState,
    track: Track,
) -> Result<Profile> {
    let x = stretched_grid(spec.truncation(far.l), spec.nodes, spec.grid_stretch)?;
    let n = x.len();
    Profile::from_solid(
        track,
        model,
        x,
        vec![far.rho_s; n],
        vec![0.0; n],
        vec![0.0; n],
        far.c,
        far,
        far.l,
        0,
        true,
    )
}

/// Damped Newton solution of the discretized boundary-layer problem; see
/// the module documentation for the equations.
pub fn solve_compressible(spec: &ProblemSpec) -> Result<Profile> {
    spec.validate()?;
    let model = spec.model();
    let far = far_field_state(&model)?;
    if model.lambda_s() == 0.0 {
        return classical_profile(spec, model, far, Track::Compressible);
    }
    let rho_s0 = model.rho_s0();
    let k = model.lambda_s() * rho_s0;
    let ell = (k / far.l).sqrt();
    let x = stretched_grid(spec.truncation(far.l), spec.nodes, spec.grid_stretch)?;
    let n = x.len();
    let disc = Discretization {
        model: &model,
        x: &x,
        k,
        ell,
        far,
    };
    // decaying linearization about the far field satisfying the flux condition
    let dp = model.interface.double_force();
    let amplitude = -dp * ell / k;
    let mut delta: Vec<f64> = x.iter().map(|&t| amplitude * (-t / ell).exp()).collect();
    // rows are second-gradient stresses; those of the boundary layer set the scale
    let layer = k * amplitude.abs() / (ell * ell);
    let scale = if layer > 0.0 {
        layer
    } else {
        model.interface.p_i.max(1.0)
    };
    let target = spec.newton_tol * scale;

    let mut residual = disc.residual(&delta, None)?;
    let mut norm = max_norm(&residual);
    let mut iterations = 0;
    while norm > target.max(ROUNDOFF_FACTOR * disc.roundoff_floor(&delta)?) {
        if iterations == spec.newton_max_iter {
            return Err(Error::NewtonDivergence {
                iterations,
                residual: norm / scale,
                reason: "iteration limit reached".into(),
            });
        }
        iterations += 1;
        let mut jac = Banded::zeros(n);
        disc.residual(&delta, Some(&mut jac))?;
        let mut step: Vec<f64> = residual.iter().map(|r| -r).collect();
        jac.solve(&mut step)?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = delta.iter().zip(&step).map(|(d, s)| d + t * s).collect();
            if let Ok(r) = disc.residual(&trial, None) {
                let trial_norm = max_norm(&r);
                if trial_norm < norm || trial_norm <= target {
                    accepted = Some((trial, r, trial_norm));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((d, r, nr)) => {
                delta = d;
                residual = r;
                norm = nr;
            }
            None => {
                return Err(Error::NewtonDivergence {
                    iterations,
                    residual: norm / scale,
                    reason: format!("no decrease after {MAX_HALVINGS} step halvings"),
                })
            }
        }
    }

    let rho_s: Vec<f64> = delta.iter().map(|d| far.rho_s + d).collect();
    let (drho_s, d2rho_s) = derivatives(&x, &delta);
    let mut profile = Profile::from_solid(
        Track::Compressible,
        model,
        x,
        rho_s,
        drho_s,
        d2rho_s,
        far.c,
        far,
        far.l,
        iterations,
        false,
    )?;
    profile.x0 = ell;
    Ok(profile)
}
