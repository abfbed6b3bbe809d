//! Khas'minskii potentials: slowly growing exhaustions with a controlled
//! drift, built from the explicit double integral
//! `w(r) = base + int phi^{-1}( (sigma/v) int v beta )`.
//!
//! On Euclidean space with `beta = (1+r)^{-2}` the inner ratio stays
//! bounded and the potential grows like `sigma log r`; with a flat weight
//! the ratio diverges and the construction refuses.
//!
//! Run with: `cargo run --example khasminskii_potential`

use std::sync::Arc;

use korad::construct::{build_khasminskii, KhasminskiiSpec};
use korad::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction, Triple, WeightProfile};

fn spec(mu: f64) -> KhasminskiiSpec {
    KhasminskiiSpec {
        triple: Triple::new(
            PhiFunction::power_law(2.0),
            Nonlinearity::power(1.0),
            GradientTerm::constant(1.0),
        ),
        volume: Arc::new(|r: f64| 4.0 * std::f64::consts::PI * r * r),
        beta: WeightProfile::power_decay(mu, 1.0),
        r0: 1.0,
        r1: 2.0,
        eta: 0.5,
        epsilon: 0.1,
        k_const: 1.0,
        r_max: 1e6,
    }
}

fn main() {
    let prof = build_khasminskii(&spec(2.0)).unwrap();
    let sigma = prof.search_trace.last().unwrap().1;
    println!("beta = (1+r)^-2 on R^3: built with sigma = {sigma}");
    for c in &prof.certificates {
        println!("  certificate {}: {}", c.name, if c.passed { "pass" } else { "fail" });
    }
    let w = &prof.profile;
    println!(
        "  w(1e2) = {:.4}, w(1e4) = {:.4}, w(1e6) = {:.4}  (log growth: increments per two decades {:.4} / {:.4})",
        w.eval(1e2),
        w.eval(1e4),
        w.eval(1e6),
        w.eval(1e4) - w.eval(1e2),
        w.eval(1e6) - w.eval(1e4),
    );

    match build_khasminskii(&spec(0.0)) {
        Err(e) => println!("beta = 1 on R^3: {e}"),
        Ok(_) => unreachable!(),
    }
}
