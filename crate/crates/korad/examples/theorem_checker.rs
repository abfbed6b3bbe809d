//! The theorem-applicability checker: pure inequality evaluation of the
//! hypothesis clauses for the four main statements (strong and weak maximum
//! principles at infinity, compact support principle, strong Liouville),
//! with the Keller-Osserman clauses decided by the ko module.
//!
//! Run with: `cargo run --example theorem_checker`

use korad::verify::{theorem_applicability, TheoremParams};

fn main() {
    let rows = [
        ("euclidean, chi=1, mu at the border", TheoremParams {
            m: 3, p: 2.0, p_bar: 2.0, kappa: 0.0, alpha: -2.0,
            mu: 2.0, chi: 1.0, omega: 0.5, v_infinity: 3.0,
        }),
        ("hyperbolic, superlinear f", TheoremParams {
            m: 3, p: 2.0, p_bar: 2.0, kappa: 1.0, alpha: 0.0,
            mu: 1.0, chi: 1.0, omega: 2.0, v_infinity: 1.0,
        }),
        ("borderline chi = 0 (needs alpha = -2 and small kbar)", TheoremParams {
            m: 3, p: 2.0, p_bar: 2.0, kappa: 1.0, alpha: 0.0,
            mu: -1.0, chi: 0.0, omega: 1.0, v_infinity: 0.0,
        }),
        ("omega = chi: both Keller-Osserman clauses fail", TheoremParams {
            m: 3, p: 2.0, p_bar: 2.0, kappa: 0.0, alpha: -2.0,
            mu: 1.0, chi: 1.0, omega: 1.0, v_infinity: 3.0,
        }),
    ];
    for (label, params) in rows {
        println!("{label}:");
        for v in theorem_applicability(&params) {
            match v.failed_clause {
                None => println!("  {:<26} applicable", v.theorem.name()),
                Some(c) => println!("  {:<26} not applicable: {c}", v.theorem.name()),
            }
        }
    }
}
