//! The singular two-point problems and the origin-slope dichotomy.
//!
//! For `[phi(w')]' = f(w) l(|w'|)` with `w(0) = 0`, `w(T) = eta`, the sign
//! of `w'(0)` is governed by the Keller-Osserman condition at zero: under
//! it (and below the dead-core separatrix) the solution leaves zero with
//! vanishing slope, otherwise the slope stays bounded away from zero.
//!
//! Run with: `cargo run --example bvp_dichotomy`

use korad::bvp::{
    classify_origin_slope, dead_core_separatrix, solve_dirichlet, solve_mixed, BoundaryData,
    BvpProblem, ClassifyOptions,
};
use korad::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction, Triple};

fn linear_triple(omega: f64) -> Triple {
    Triple::new(
        PhiFunction::power_law(2.0),
        Nonlinearity::power(omega),
        GradientTerm::constant(1.0),
    )
}

fn main() {
    // calibration: w'' = w has the closed forms eta sinh(t)/sinh(T) and
    // eta cosh(t)/cosh(T)
    let dirichlet = BvpProblem::with_unit_coefficients(
        linear_triple(1.0),
        1.0,
        BoundaryData::Dirichlet { eta: 1.0 },
        5.0,
    );
    let sol = solve_dirichlet(&dirichlet).unwrap();
    let mut sup = 0.0f64;
    for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
        sup = sup.max((v - t.sinh() / 1f64.sinh()).abs());
    }
    println!("dirichlet w'' = w: sup error vs sinh profile = {sup:.3e}");

    let mixed = BvpProblem::with_unit_coefficients(
        linear_triple(1.0),
        1.0,
        BoundaryData::Mixed { eta: 1.0 },
        5.0,
    );
    let sol = solve_mixed(&mixed).unwrap();
    let mut sup = 0.0f64;
    for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
        sup = sup.max((v - t.cosh() / 1f64.cosh()).abs());
    }
    println!("mixed     w'' = w: sup error vs cosh profile = {sup:.3e}");

    // the dichotomy for f = w^omega (chi = 1)
    for omega in [0.5, 2.0] {
        let triple = linear_triple(omega);
        let eta = match dead_core_separatrix(&triple, 1.0) {
            Some(sep) => 0.25 * sep,
            None => 0.05,
        };
        let problem = BvpProblem::with_unit_coefficients(
            triple,
            1.0,
            BoundaryData::Dirichlet { eta },
            5.0,
        );
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        println!("omega = {omega}, eta = {eta:.4e}: origin slope class {class:?}");
    }

    // a mixed problem developing a genuine plateau (dead core at level 0)
    let plateau = BvpProblem::with_unit_coefficients(
        linear_triple(0.5),
        6.0,
        BoundaryData::Mixed { eta: 0.5 },
        5.0,
    );
    let sol = solve_mixed(&plateau).unwrap();
    println!(
        "mixed dead core on [0, 6]: plateau radius t0 = {:.4}, w(t0) = {:.3e}",
        sol.plateau_radius,
        sol.profile.eval(sol.plateau_radius)
    );
}
