//! With no deformation energy the partial pressures reduce to `p·v_a`
//! and the exchange coefficient to `p` — exactly, for any state.

use porous_second_gradient::{fixtures, Constituent, MaterialModel, Mixture, MixtureState};

fn main() -> porous_second_gradient::Result<()> {
    let reference = fixtures::salt_brine_reference();
    let mix = Mixture::new(
        reference,
        MaterialModel::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0125)?,
    );
    let mut worst: f64 = 0.0;
    for (ds, df, p) in [
        (0.0, 0.0, 1.0e6),
        (0.01, -0.1, 3.5e5),
        (-0.02, 0.15, -2.0e6),
    ] {
        let state = MixtureState::new(
            reference.rho_s0() * (1.0 + ds),
            reference.rho_f0() * (1.0 + df),
            p,
        )?;
        for a in Constituent::BOTH {
            let v = mix.volume_fraction(a, state.density(a))?;
            let dev = (mix.partial_pressure(a, &state)? - p * v).abs();
            println!("{a:?} at p = {p:e}: p_a - p v_a = {dev:e}");
            worst = worst.max(dev);
        }
        worst = worst.max((mix.exchange_coefficient(&state)? - p).abs());
    }
    println!("largest deviation: {worst:e}");
    Ok(())
}
