//! Keller-Osserman verdicts across the p-Laplacian power family
//! `phi = t^{p-1}`, `l = t^{p-1-chi}`, `f = t^omega`.
//!
//! The condition at zero (dead cores, compact support) holds exactly when
//! `omega < chi`; the condition at infinity (Liouville statements) exactly
//! when `omega > chi`. Both the closed-form route and the numeric exponent
//! estimate are shown.
//!
//! Run with: `cargo run --example ko_truth_table`

use korad::ko::{ko_verdict, Endpoint};
use korad::nonlinearity::{KernelKind, Triple};

fn main() {
    println!("{:>5} {:>5} {:>6} | {:>14} {:>14} | {:>9}", "p", "chi", "omega", "KO at 0", "KO at inf", "exponent");
    for p in [1.5, 2.0, 3.0] {
        for chi in [0.5, 1.0] {
            for omega in [chi / 2.0, chi, 2.0 * chi] {
                let triple = Triple::power_family(p, chi, omega);
                let zero = ko_verdict(&triple, Endpoint::Zero, KernelKind::Standard).unwrap();
                let inf = ko_verdict(&triple, Endpoint::Infinity, KernelKind::Standard).unwrap();
                println!(
                    "{p:>5} {chi:>5} {omega:>6} | {:>8} ({:?}) {:>8} ({:?}) | {:>9.4}",
                    zero.outcome.to_string(),
                    zero.route,
                    inf.outcome.to_string(),
                    inf.route,
                    inf.exponent.unwrap_or(f64::NAN),
                );
            }
        }
    }

    // The mean curvature operator saturates: with l = 1 the standard kernel
    // has K(inf) = 1, so the condition at infinity is meaningless there and
    // the variant kernel K = int phi/l (with l = phi/t^chi) is the right
    // object.
    use korad::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction};
    let mc_flat = Triple::new(
        PhiFunction::MeanCurvature,
        Nonlinearity::power(2.0),
        GradientTerm::constant(1.0),
    );
    match ko_verdict(&mc_flat, Endpoint::Infinity, KernelKind::Standard) {
        Err(e) => println!("\nmean curvature with l = 1, standard kernel: {e}"),
        Ok(v) => println!("\nunexpected verdict {v:?}"),
    }
    let mc = Triple::new(
        PhiFunction::MeanCurvature,
        Nonlinearity::power(2.0),
        GradientTerm::phi_quotient(1.0),
    );
    let v = ko_verdict(&mc, Endpoint::Infinity, KernelKind::MeanCurvatureVariant).unwrap();
    println!("mean curvature, variant kernel, omega=2 > chi=1: {}", v.outcome);
}
