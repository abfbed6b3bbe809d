//! The counterexample gallery: explicit profiles on explicit models that
//! solve the inequality inside their admissible parameter range and stop
//! solving it outside.
//!
//! Each family carries its exact range predicate; the checker scans the
//! residual on doubling windows `[R, 100R]` and reports whether the sign
//! settles non-negative. The seeded sweep draws admissible parameters and
//! margin-violating partners.
//!
//! Run with: `cargo run --example counterexample_gallery`

use korad::cli::{gallery_sweep, GALLERY_FAMILIES};
use korad::verify::{counterexample_check, CounterexampleCase};

fn main() {
    // the classical shrinking-end example: u = (1+r)^{-beta} solves
    // Delta u >= C u^omega on a model pinching like exp(-t^alpha), exactly
    // for beta (1 - omega) <= alpha - 2
    let case = CounterexampleCase::CspIntro {
        m: 3,
        alpha: 3.0,
        omega: 0.5,
        beta: 2.0, // the borderline value (alpha-2)/(1-omega)
    };
    let rep = counterexample_check(&case);
    println!(
        "shrinking-end profile at the borderline: in_range={} nonneg beyond R={:?}",
        rep.in_range, rep.stabilized_at
    );

    let sharp = CounterexampleCase::SlSharp {
        m: 3,
        kappa: 1.0,
        alpha: 0.0,
        mu: -1.0, // equality in 2 sigma (omega - chi) = alpha/2 + mu - chi
        chi: 1.0,
        omega: 0.5,
        sigma: 2.0,
    };
    let rep = counterexample_check(&sharp);
    println!(
        "mean curvature sharpness profile at equality: in_range={} consistent={}",
        rep.in_range, rep.consistent
    );

    println!("\nseeded 20-in / 20-out sweeps:");
    for family in GALLERY_FAMILIES {
        let (in_ok, in_total, out_ok, out_total) = gallery_sweep(family, 20, 42);
        println!(
            "  {family:>9}: admissible {in_ok}/{in_total} confirmed, violated {out_ok}/{out_total} refuted"
        );
    }
}
