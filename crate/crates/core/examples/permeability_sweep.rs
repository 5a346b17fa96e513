//! Static permeability quantities across the gradient-energy coefficient
//! and the applied pressure: `x0` grows like `sqrt(lambda_s)` and the
//! boundary drop is linear in `p_i` at a fixed double-force coefficient.

use porous_second_gradient::halfspace::{attenuation_length, boundary_drop};
use porous_second_gradient::{fixtures, HalfspaceModel, InterfaceParams, Mixture};

fn main() -> porous_second_gradient::Result<()> {
    let reference = fixtures::salt_brine_reference();
    let base = fixtures::salt_brine_material();

    println!("{:>10} {:>14} {:>14}", "lambda_s", "x0", "x0/sqrt(lam)");
    for factor in [0.25, 1.0, 4.0, 16.0] {
        let mut m = base;
        m.lambda_s *= factor;
        let x0 = attenuation_length(&Mixture::new(reference, m))?;
        println!(
            "{:>10.5} {x0:>14.6e} {:>14.6e}",
            m.lambda_s,
            x0 / m.lambda_s.sqrt()
        );
    }

    let mix = Mixture::new(reference, base);
    let d_coeff = fixtures::salt_brine_interface().d_coeff;
    println!("\n{:>12} {:>14} {:>14}", "p_i", "delta_rho_s", "per MPa");
    for p_i in [0.25e6, 0.5e6, 1.0e6, 2.0e6] {
        let interface = InterfaceParams::unit_partition(p_i, d_coeff)?;
        let drop = boundary_drop(&HalfspaceModel::new(mix, interface))?;
        println!("{p_i:>12.3e} {drop:>14.8} {:>14.8}", drop / (p_i / 1e6));
    }
    Ok(())
}
