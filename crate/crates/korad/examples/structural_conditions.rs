//! The sampled structural-condition checkers: kernel doubling and
//! submultiplicativity, the C-increasing ratios, and the weight conditions.
//!
//! These are sampled suprema on log grids, never proofs: a supremum that
//! keeps growing toward an asymptotic end comes back `Inconclusive`.
//!
//! Run with: `cargo run --example structural_conditions`

use korad::nonlinearity::{check_condition, ConditionId, Triple, WeightProfile};

fn main() {
    // K(t) ~ t^{chi+1}: the doubling constant is exactly chi + 1
    for chi in [0.5, 1.0, 2.0] {
        let triple = Triple::power_family(2.5, chi, 1.0);
        let rep = check_condition(ConditionId::C1, &triple, None, None).unwrap();
        println!("chi = {chi}: {rep}");
    }

    // C4 holds exactly for omega <= chi
    for omega in [0.5, 1.0, 1.5] {
        let triple = Triple::power_family(2.0, 1.0, omega);
        let rep = check_condition(ConditionId::C4, &triple, None, None).unwrap();
        println!("omega = {omega} vs chi = 1: {rep}");
    }

    // the borderline weight (1+t)^{-chi-1}
    let triple = Triple::power_family(2.0, 1.0, 0.5);
    let border = WeightProfile::power_decay(2.0, 1.0);
    let rep = check_condition(ConditionId::Beta2, &triple, Some(&border), None).unwrap();
    println!("borderline weight (1+t)^-2: {rep}");
    let too_slow = WeightProfile::power_decay(4.0, 1.0);
    let rep = check_condition(ConditionId::Beta2, &triple, Some(&too_slow), None).unwrap();
    println!("fast-decay weight (1+t)^-4: {rep}");
}
