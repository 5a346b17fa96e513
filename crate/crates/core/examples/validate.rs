//! Runs the invariant suite behind `poro2g validate` on the fixture and
//! on a mixture whose stiffness violates cross-consistency.

use porous_second_gradient::cli::suite::run_suite;
use porous_second_gradient::constitutive::Stiffness;
use porous_second_gradient::{fixtures, Track};

fn report(title: &str, spec: &porous_second_gradient::ProblemSpec) {
    println!("{title}");
    for entry in run_suite(spec, Track::Auto) {
        println!(
            "  {:<4} {:<26} {:>10.3e} (tol {:.0e})",
            if entry.passed() { "ok" } else { "FAIL" },
            entry.name,
            entry.value,
            entry.tolerance
        );
    }
}

fn main() {
    let spec = fixtures::salt_brine_spec();
    report("salt/brine fixture", &spec);

    let mut broken = spec.clone();
    let a = *spec.mixture().stiffness();
    broken.stiffness = Some(Stiffness {
        fs: 1.5 * a.fs,
        ..a
    });
    report("stiffness with A_fs scaled by 1.5", &broken);
}
