//! Second-gradient tensors, the solid hyperstress and the interface
//! tractions at a point with a steep solid-density gradient.

use nalgebra::Vector3;
use porous_second_gradient::hyperstress::{
    applied_tractions, solid_hyperstress, tensor_a, tensor_c,
};
use porous_second_gradient::{fixtures, Constituent, FieldPoint};

fn main() {
    let lambda = fixtures::salt_brine_material().lambda_s;
    let g = Vector3::new(-200.0, 0.0, 0.0);
    let point = FieldPoint {
        rho_s: 1942.0,
        rho_f: 120.3,
        grad_rho_s: g,
        grad_rho_f: -g * (120.3 / 1942.0),
        lap_rho_s: 4.0e3,
    };

    println!("A_s =\n{}", tensor_a(Constituent::Solid, &point, lambda));
    println!("A_f =\n{}", tensor_a(Constituent::Fluid, &point, lambda));
    let c_n = tensor_c(Constituent::Solid, &point, lambda).dot(&Vector3::x());
    println!("C_s · n =\n{c_n}");
    println!("solid hyperstress =\n{}", solid_hyperstress(&point, lambda));

    let interface = fixtures::salt_brine_interface();
    let (t_s, t_f) = applied_tractions(0.9, &interface);
    println!("tractions at v_s = 0.9: solid {t_s:.6e} Pa, fluid {t_f:.6e} Pa");
}
