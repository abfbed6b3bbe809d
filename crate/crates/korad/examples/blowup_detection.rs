//! Maximal forward extension and blow-up detection.
//!
//! Seeding from the mixed problem on [0, 1], the march distinguishes
//! `w'' = w^3` (finite blow-up radius, cross-checked against the conserved
//! energy `E = w'^2/2 - w^4/4`) from `w'' = w` (grows like `e^r` forever;
//! the march switches to logarithmic variables past 1e12 instead of
//! misreading plain exponential growth as a blow-up).
//!
//! Run with: `cargo run --example blowup_detection`

use korad::bvp::{extend_maximal, solve_mixed, BoundaryData, BvpProblem, Extension};
use korad::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction, Triple};
use korad::quad;

fn problem(omega: f64) -> BvpProblem {
    BvpProblem::with_unit_coefficients(
        Triple::new(
            PhiFunction::power_law(2.0),
            Nonlinearity::power(omega),
            GradientTerm::constant(1.0),
        ),
        1.0,
        BoundaryData::Mixed { eta: 1.0 },
        20.0,
    )
}

fn main() {
    let cubic = problem(3.0);
    let sol = solve_mixed(&cubic).unwrap();
    let (w1, wp1) = (sol.profile.eval(1.0), sol.profile.eval_deriv(1.0));
    let energy = wp1 * wp1 / 2.0 - w1.powi(4) / 4.0;
    let oracle = 1.0
        + quad::integrate_to_infinity(|w| 1.0 / (2.0 * energy + w.powi(4) / 2.0).sqrt(), w1, 1e-10)
            .finite()
            .unwrap();
    let ext = extend_maximal(&sol, &cubic, 50.0);
    match ext.extension {
        Extension::Finite(r) => println!(
            "w'' = w^3: blow-up at R = {r:.6} (energy oracle {oracle:.6}, stabilized: {})",
            ext.stabilized
        ),
        Extension::Infinite => unreachable!(),
    }

    let linear = problem(1.0);
    let sol = solve_mixed(&linear).unwrap();
    let ext = extend_maximal(&sol, &linear, 50.0);
    match ext.extension {
        Extension::Infinite => println!("w'' = w:   no blow-up through r = 50 (grows like e^r)"),
        Extension::Finite(r) => println!("w'' = w:   unexpected blow-up at {r}"),
    }
}
