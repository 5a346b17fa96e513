use nalgebra::Vector3;
use porous_second_gradient::halfspace::{
    attenuation_length, boundary_drop, closed_form_profile, compute_l,
};
use porous_second_gradient::hyperstress::{applied_tractions, tensor_a, tensor_c};
use porous_second_gradient::{
    fixtures, Constituent, FieldPoint, InterfaceParams, MaterialModel, Mixture, MixtureState,
    ReferenceState,
};
use proptest::prelude::*;

fn reference(v_s0: f64) -> ReferenceState {
    ReferenceState::from_volume_fraction(2160.0, 1200.0, v_s0).unwrap()
}

/// Stable quadratic energies with compressibilities.
fn material() -> impl Strategy<Value = MaterialModel> {
    (
        1.0..10.0f64,
        0.5..5.0f64,
        -0.9..0.9f64,
        0.0..0.2f64,
        0.0..0.2f64,
        1e-3..0.1f64,
    )
        .prop_map(|(ss, ff, corr, c_s, c_f, lambda)| {
            let sf = corr * (ss * ff).sqrt();
            MaterialModel::new(ss, ff, sf, c_s, c_f, lambda).unwrap()
        })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exchange_forces_are_antisymmetric(
        m in material(),
        v_s0 in 0.5..0.95f64,
        ds in -0.02..0.02f64,
        df in -0.2..0.2f64,
        p in -1e7..1e7f64,
        g in prop::array::uniform3(-1e3..1e3f64),
    ) {
        let r = reference(v_s0);
        let mix = Mixture::new(r, m);
        let s = MixtureState::new(r.rho_s0() * (1.0 + ds), r.rho_f0() * (1.0 + df), p).unwrap();
        prop_assume!(mix.exchange_coefficient(&s).is_ok());
        let (ms, mf) = mix.exchange_forces(&s, Vector3::from(g)).unwrap();
        prop_assert_eq!(ms + mf, Vector3::zeros());
    }

    #[test]
    fn partial_pressures_sum_on_saturated_states(
        m in material(),
        v_s0 in 0.5..0.95f64,
        ds in -0.02..0.02f64,
        p in -1e7..1e7f64,
    ) {
        let r = reference(v_s0);
        let mix = Mixture::new(r, m);
        let rho_s = r.rho_s0() * (1.0 + ds);
        let rho_f = mix.solve_rho_f_saturated(rho_s);
        prop_assume!(rho_f.is_ok());
        let s = MixtureState::new(rho_s, rho_f.unwrap(), p).unwrap();
        let sum = mix.partial_pressure(Constituent::Solid, &s).unwrap()
            + mix.partial_pressure(Constituent::Fluid, &s).unwrap();
        let (ps, pf) = mix.thermo_pressure(&s);
        let pressure = p * mix.compressibility_sum(s.rho_s, s.rho_f).unwrap();
        let scale = ps.abs() + pf.abs() + pressure.abs();
        prop_assert!((sum - (ps + pf + pressure)).abs() < 1e-12 * scale);
    }

    #[test]
    fn delesse_limit_is_exact(
        v_s0 in 0.5..0.95f64,
        ds in -0.02..0.02f64,
        df in -0.2..0.2f64,
        p in -1e7..1e7f64,
    ) {
        let r = reference(v_s0);
        let mix = Mixture::new(r, MaterialModel::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.01).unwrap());
        let s = MixtureState::new(r.rho_s0() * (1.0 + ds), r.rho_f0() * (1.0 + df), p).unwrap();
        prop_assume!(mix.exchange_coefficient(&s).is_ok());
        for a in Constituent::BOTH {
            let v = mix.volume_fraction(a, s.density(a)).unwrap();
            prop_assert_eq!(mix.partial_pressure(a, &s).unwrap(), p * v);
        }
        prop_assert_eq!(mix.exchange_coefficient(&s).unwrap(), p);
    }

    #[test]
    fn derived_stiffness_is_cross_consistent(m in material(), v_s0 in 0.5..0.95f64) {
        let mix = Mixture::new(reference(v_s0), m);
        prop_assert!(mix.cross_consistency_defect() < 1e-15);
    }

    #[test]
    fn linearized_exchange_matches_central_differences(m in material(), v_s0 in 0.5..0.95f64) {
        let r = reference(v_s0);
        let mix = Mixture::new(r, m);
        let lin = mix.linearized_m_coeffs().unwrap();
        prop_assert_eq!(lin.m0, 0.0);
        let at = |rho_s: f64, rho_f: f64| {
            mix.exchange_coefficient(&MixtureState::new(rho_s, rho_f, 0.0).unwrap()).unwrap()
        };
        let (hs, hf) = (1e-6 * r.rho_s0(), 1e-6 * r.rho_f0());
        let fd_s = (at(r.rho_s0() + hs, r.rho_f0()) - at(r.rho_s0() - hs, r.rho_f0())) / (2.0 * hs);
        let fd_f = (at(r.rho_s0(), r.rho_f0() + hf) - at(r.rho_s0(), r.rho_f0() - hf)) / (2.0 * hf);
        prop_assert!(relative(lin.m_s, fd_s) < 1e-8, "{} vs {}", lin.m_s, fd_s);
        prop_assert!(relative(lin.m_f, fd_f) < 1e-8, "{} vs {}", lin.m_f, fd_f);
    }

    #[test]
    fn tractions_partition_the_load(
        p_i in 0.0..1e8f64,
        alpha in 0.0..=1.0f64,
        l in 0.0..4.0f64,
        v_s in 0.01..0.99f64,
    ) {
        let params = InterfaceParams::new(p_i, 0.0, alpha, l).unwrap();
        let (t_s, t_f) = applied_tractions(v_s, &params);
        prop_assert!(t_s >= 0.0 && t_f >= 0.0);
        prop_assert!((t_s + t_f - p_i).abs() <= 4.0 * f64::EPSILON * p_i);
    }

    #[test]
    fn fluid_second_gradient_tensors_vanish(
        g in prop::array::uniform3(-1e3..1e3f64),
        h in prop::array::uniform3(-1e3..1e3f64),
        lambda in 0.0..1.0f64,
    ) {
        let point = FieldPoint {
            rho_s: 1944.0,
            rho_f: 120.0,
            grad_rho_s: Vector3::from(g),
            grad_rho_f: Vector3::from(h),
            lap_rho_s: 5.0,
        };
        prop_assert!(tensor_a(Constituent::Fluid, &point, lambda).iter().all(|&v| v == 0.0));
        prop_assert!(tensor_c(Constituent::Fluid, &point, lambda).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn first_integral_is_constant_along_closed_form(
        lambda in 1e-3..0.1f64,
        p_i in 1e4..1e7f64,
        drop in 1e-5..1e-3f64,
    ) {
        let mut spec = fixtures::salt_brine_spec();
        spec.material.lambda_s = lambda;
        let mix = spec.mixture();
        let d = fixtures::double_force_for_drop(&mix, p_i, drop);
        spec.interface = InterfaceParams::unit_partition(p_i, d).unwrap();
        let profile = closed_form_profile(&spec).unwrap();
        let rho_s0 = spec.reference.rho_s0();
        let k: Vec<f64> = (0..profile.len())
            .map(|i| {
                let s = MixtureState::new(profile.rho_s[i], profile.rho_f[i], profile.p[i]).unwrap();
                // Potential of the second-gradient stress in the first-order model.
                let phi = -lambda * rho_s0 * profile.d2rho_s[i];
                mix.first_integral_k(&s, phi).unwrap()
            })
            .collect();
        let spread = k.iter().cloned().fold(f64::MIN, f64::max) - k.iter().cloned().fold(f64::MAX, f64::min);
        prop_assert!(spread <= 1e-8 * p_i, "spread {}", spread);
        prop_assert!((k[0] - p_i).abs() <= 1e-8 * p_i);
    }

    #[test]
    fn scaling_laws_hold(
        m in material(),
        v_s0 in 0.6..0.95f64,
        p_i in 1e4..1e7f64,
        d in 1e-6..1e-3f64,
    ) {
        let r = reference(v_s0);
        let m = m.density_preserving();
        let mix = Mixture::new(r, m);
        prop_assume!(compute_l(&mix).is_ok());
        let mut quad = m;
        quad.lambda_s *= 4.0;
        let x0 = attenuation_length(&mix).unwrap();
        let x4 = attenuation_length(&Mixture::new(r, quad)).unwrap();
        prop_assert!(relative(x4, 2.0 * x0) < 1e-12);

        let model = |p: f64, dd: f64| porous_second_gradient::HalfspaceModel::new(
            mix,
            InterfaceParams::unit_partition(p, dd).unwrap(),
        );
        let base = boundary_drop(&model(p_i, d)).unwrap();
        prop_assert!(relative(boundary_drop(&model(2.0 * p_i, d)).unwrap(), 2.0 * base) < 1e-12);
        prop_assert!(relative(boundary_drop(&model(p_i, 3.0 * d)).unwrap(), 3.0 * base) < 1e-12);
    }
}
