//! Invariant suite run by `poro2g validate`.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constitutive::{Constituent, MaterialModel, Mixture, MixtureState};
use crate::halfspace::{
    attenuation_length, boundary_drop, closed_form_profile, solve, solve_compressible,
    validate_profile, ProblemSpec, Track,
};

const SAMPLES: usize = 1000;
const SEED: u64 = 0x5eed;

/// One measured invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl SuiteEntry {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            detail: String::new(),
        }
    }

    fn failed(name: &'static str, detail: String) -> Self {
        Self {
            name,
            value: f64::NAN,
            tolerance: 0.0,
            detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Random saturated states around the reference, with arbitrary pressure.

fn random_states(mixture: &Mixture, rng: &mut ChaCha8Rng) -> Result<Vec<MixtureState>, String> {
    let r = mixture.reference();
    let mut out = Vec::with_capacity(SAMPLES);
    for _ in 0..100 * SAMPLES {
        if out.len() == SAMPLES {
            break;
        }
        let rho_s = r.rho_s0() * rng.gen_range(0.97..1.03);
        let p = rng.gen_range(-1e7..1e7);
        let Ok(rho_f) = mixture.solve_rho_f_saturated(rho_s) else {
            continue;
        };
        let valid = Constituent::BOTH.iter().all(|&a| {
            let rho = if a == Constituent::Solid {
                rho_s
            } else {
                rho_f
            };
            mixture.volume_fraction(a, rho).is_ok()
        });
        if valid && p != 0.0 {
            out.push(MixtureState { rho_s, rho_f, p });
        }
    }
    if out.len() < SAMPLES {
        return Err(format!(
            "only {} of {SAMPLES} sampled states are saturable",
            out.len()
        ));
    }
    Ok(out)
}

/// Partial pressures reduce to `p v_a` and `M` to `p` once the energy and
/// the compressibilities are removed.
pub fn delesse_recovery(mixture: &Mixture) -> SuiteEntry {
    let stripped = Mixture::new(
        *mixture.reference(),
        MaterialModel::new(0.0, 0.0, 0.0, 0.0, 0.0, mixture.material().lambda_s)
            .expect("zero model is valid"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let states = match random_states(&stripped, &mut rng) {
        Ok(v) => v,
        Err(e) => return SuiteEntry::failed("delesse_recovery", e),
    };
    for s in states {
        for a in Constituent::BOTH {
            let v = stripped
                .volume_fraction(a, s.density(a))
                .unwrap_or(f64::NAN);
            let pa = stripped.partial_pressure(a, &s).unwrap_or(f64::NAN);
            worst = worst.max((pa - s.p * v).abs() / s.p.abs());
        }
        let m = stripped.exchange_coefficient(&s).unwrap_or(f64::NAN);
        worst = worst.max((m - s.p).abs() / s.p.abs());
    }
    SuiteEntry::new("delesse_recovery", nan_to_inf(worst), 1e-12)
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn exchange_antisymmetry(mixture: &Mixture) -> SuiteEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    let states = match random_states(mixture, &mut rng) {
        Ok(v) => v,
        Err(e) => return SuiteEntry::failed("exchange_antisymmetry", e),
    };
    for s in states {
        let g = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        match mixture.exchange_forces(&s, g) {
            Ok((ms, mf)) => {
                let scale = ms.norm().max(f64::MIN_POSITIVE);
                worst = worst.max((ms + mf).norm() / scale);
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    SuiteEntry::new("exchange_antisymmetry", worst, 1e-12)
}

pub fn pressure_sum_identity(mixture: &Mixture) -> SuiteEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst: f64 = 0.0;
    let states = match random_states(mixture, &mut rng) {
        Ok(v) => v,
        Err(e) => return SuiteEntry::failed("pressure_sum_identity", e),
    };
    for s in states {
        let sum: f64 = Constituent::BOTH
            .iter()
            .map(|&a| mixture.partial_pressure(a, &s).unwrap_or(f64::NAN))
            .sum();
        let (ps, pf) = mixture.thermo_pressure(&s);
        let factor = mixture
            .compressibility_sum(s.rho_s, s.rho_f)
            .unwrap_or(f64::NAN);
        let expected = ps + pf + s.p * factor;
        let scale = ps.abs() + pf.abs() + (s.p * factor).abs();
        worst = worst.max(nan_to_inf((sum - expected).abs() / scale));
    }
    SuiteEntry::new("pressure_sum_identity", worst, 1e-12)
}

pub fn cross_consistency(mixture: &Mixture) -> SuiteEntry {
    SuiteEntry::new(
        "cross_consistency",
        mixture.cross_consistency_defect(),
        1e-12,
    )
}

/// Linearized exchange coefficients against central differences of `M`
/// with steps `1e-6 rho_a0`.
pub fn linearized_exchange(mixture: &Mixture) -> SuiteEntry {
    let Ok(lin) = mixture.linearized_m_coeffs() else {
        return SuiteEntry::failed("linearized_exchange", "coefficients undefined".into());
    };
    let r = mixture.reference();
    let m_at = |rho_s: f64, rho_f: f64| {
        mixture
            .exchange_coefficient(&MixtureState {
                rho_s,
                rho_f,
                p: 0.0,
            })
            .unwrap_or(f64::NAN)
    };
    let hs = 1e-6 * r.rho_s0();
    let hf = 1e-6 * r.rho_f0();
    let fd_s = (m_at(r.rho_s0() + hs, r.rho_f0()) - m_at(r.rho_s0() - hs, r.rho_f0())) / (2.0 * hs);
    let fd_f = (m_at(r.rho_s0(), r.rho_f0() + hf) - m_at(r.rho_s0(), r.rho_f0() - hf)) / (2.0 * hf);
    let rel = |a: f64, b: f64| {
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            0.0
        } else {
            (a - b).abs() / scale
        }
    };
    let mut e = SuiteEntry::new(
        "linearized_exchange",
        nan_to_inf(rel(lin.m_s, fd_s).max(rel(lin.m_f, fd_f)).max(lin.m0.abs())),
        1e-8,
    );
    e.detail = format!("m_s={:e} m_f={:e} m0={:e}", lin.m_s, lin.m_f, lin.m0);
    e
}

/// Solves the configured problem and checks the first integrals and all
/// profile residuals.
pub fn first_integrals(spec: &ProblemSpec, track: Track) -> Vec<SuiteEntry> {
    let resolved = track.resolve(&spec.material);
    match solve(spec, track) {
        Ok(profile) => {
            let report = validate_profile(&profile);
            let tol = if resolved == Track::ClosedForm {
                1e-8
            } else {
                1e-6
            };
            let get = |n: &str| nan_to_inf(report.get(n).unwrap_or(f64::NAN));
            let mut residuals = SuiteEntry::new("profile_residuals", report.max_residual(), tol);
            residuals.detail = report.failures(tol).join(" ");
            vec![
                SuiteEntry::new(
                    "fluid_first_integral",
                    get("fluid_first_integral_spread"),
                    1e-6,
                ),
                SuiteEntry::new("summed_first_integral", get("summed_first_integral"), 1e-8),
                residuals,
            ]
        }
        Err(e) => vec![SuiteEntry::failed("profile_residuals", e.to_string())],
    }
}

/// Finite-difference solver against the closed form with the
/// compressibilities zeroed.
pub fn oracle_equivalence(spec: &ProblemSpec) -> SuiteEntry {
    let mut spec = spec.clone();
    spec.material = spec.material.density_preserving();
    let (num, cf) = match (solve_compressible(&spec), closed_form_profile(&spec)) {
        (Ok(n), Ok(c)) => (n, c),
        (Err(e), _) | (_, Err(e)) => {
            return SuiteEntry::failed("oracle_equivalence", e.to_string())
        }
    };
    let drop = cf.delta_rho_s.abs();
    let p_i = spec.interface.p_i;
    let d_rho = max_deviation(&num.rho_s, &cf.rho_s);
    let d_p = max_deviation(&num.p, &cf.p);
    let rel_rho = if drop > 0.0 {
        d_rho / drop
    } else {
        d_rho / cf.rho_s[0]
    };
    let rel_p = if p_i > 0.0 { d_p / p_i } else { d_p };
    let mut e = SuiteEntry::new("oracle_equivalence", rel_rho.max(rel_p), 1e-6);
    e.detail = format!(
        "rho_s={rel_rho:e} p={rel_p:e} iterations={}",
        num.iterations
    );
    e
}

pub fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `x0(4 lambda_s) = 2 x0(lambda_s)` and `delta_rho_s(2 p_i) = 2 delta_rho_s(p_i)`.
pub fn scaling_laws(spec: &ProblemSpec) -> SuiteEntry {
    let base = spec.model();
    let mixture = base
        .mixture
        .with_material(base.mixture.material().density_preserving());
    let mut model = base;
    model.mixture = mixture;
    let mut quadrupled = *mixture.material();
    quadrupled.lambda_s *= 4.0;
    let mut doubled = model;
    doubled.interface.p_i *= 2.0;
    let result = (|| {
        let x0 = attenuation_length(&mixture)?;
        let x4 = attenuation_length(&mixture.with_material(quadrupled))?;
        let d1 = boundary_drop(&model)?;
        let d2 = boundary_drop(&doubled)?;
        Ok::<_, crate::Error>((x0, x4, d1, d2))
    })();
    match result {
        Ok((x0, x4, d1, d2)) => {
            let a = if x0 > 0.0 {
                (x4 / x0 - 2.0).abs() / 2.0
            } else {
                x4
            };
            let b = if d1 != 0.0 {
                (d2 / d1 - 2.0).abs() / 2.0
            } else {
                d2.abs()
            };
            let mut e = SuiteEntry::new("scaling_laws", a.max(b), 1e-12);
            e.detail = format!("x0_ratio={} drop_ratio={}", x4 / x0, d2 / d1);
            e
        }
        Err(e) => SuiteEntry::failed("scaling_laws", e.to_string()),
    }
}

/// The whole suite for one scenario.
pub fn run_suite(spec: &ProblemSpec, track: Track) -> Vec<SuiteEntry> {
    let mixture = spec.mixture();
    let mut entries = vec![
        delesse_recovery(&mixture),
        exchange_antisymmetry(&mixture),
        pressure_sum_identity(&mixture),
        cross_consistency(&mixture),
        linearized_exchange(&mixture),
    ];
    entries.extend(first_integrals(spec, track));
    entries.push(oracle_equivalence(spec));
    entries.push(scaling_laws(spec));
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::Stiffness;
    use crate::fixtures;

    #[test]
    fn fixture_passes_everything() {
        let entries = run_suite(&fixtures::salt_brine_spec(), Track::Auto);
        for e in &entries {
            assert!(e.passed(), "{e:?}");
        }
    }

    #[test]
    fn raw_stiffness_breaks_cross_consistency() {
        let mut spec = fixtures::salt_brine_spec();
        spec.stiffness = Some(Stiffness {
            ss: 9720.0,
            sf: 972.0,
            fs: 972.0,
            ff: 240.0,
        });
        let e = cross_consistency(&spec.mixture());
        assert!(!e.passed());
    }

    #[test]
    fn delesse_is_exact() {
        let e = delesse_recovery(&fixtures::salt_brine_spec().mixture());
        assert_eq!(e.value, 0.0);
    }
}
