//! The exterior Dirichlet problem: a profile with `z(r0) = eta`,
//! non-increasing, decaying at infinity, obtained as the limit of reflected
//! Dirichlet problems on growing windows (with Aitken extrapolation across
//! the windows for weakly screened data).
//!
//! For the harmonic case on R^3 the closed form is `z = eta r0 / r`.
//!
//! Run with: `cargo run --example exterior_dirichlet`

use std::sync::Arc;

use korad::construct::{solve_exterior_dirichlet, ExteriorSpec};
use korad::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction, Triple, WeightProfile};

fn main() {
    let spec = ExteriorSpec {
        triple: Triple::new(
            PhiFunction::power_law(2.0),
            // vanishes on [0, 10]: the equation is harmonic in the range of z
            Nonlinearity::power_above(1.0, 10.0),
            GradientTerm::constant(1.0),
        ),
        volume: Arc::new(|r: f64| 4.0 * std::f64::consts::PI * r * r),
        beta: WeightProfile::power_decay(2.0, 1.0),
        r0: 1.0,
        step: 1.0,
        eta: 0.05,
        xi: 0.9,
    };
    let prof = solve_exterior_dirichlet(&spec).unwrap();
    println!("exterior problem on R^3 with f = 0 near the range of z:");
    for c in &prof.certificates {
        println!("  certificate {}: {}", c.name, if c.passed { "pass" } else { "fail" });
    }
    println!("{:>6} {:>12} {:>12}", "r", "z(r)", "eta r0/r");
    for r in [1.0, 1.5, 2.0, 3.0, 5.0, 9.0] {
        println!("{r:>6} {:>12.8} {:>12.8}", prof.profile.eval(r), 0.05 / r);
    }
}
