//! Property tests for the crate-wide invariants.

use proptest::prelude::*;

use korad::ko::{ko_verdict, Endpoint};
use korad::nonlinearity::{
    KernelKind, Nonlinearity, PhiFunction, Triple,
};
use korad::verdict::Verdict;

fn arb_phi() -> impl Strategy<Value = PhiFunction> {
    prop_oneof![
        (1.2f64..4.0).prop_map(PhiFunction::power_law),
        Just(PhiFunction::MeanCurvature),
        Just(PhiFunction::ExpHarmonic),
        (1.1f64..2.0, 2.1f64..4.0).prop_map(|(q, p)| PhiFunction::power_sum(p, q)),
        (1.5f64..4.0, 1.0f64..1.4).prop_map(|(p, q)| PhiFunction::rational_power(p, q)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// phi_inverse o phi is the identity across all built-in operators.
    #[test]
    fn phi_inverse_round_trip(phi in arb_phi(), t in 1e-6f64..10.0) {
        let y = phi.eval(t);
        let back = phi.inverse(y).unwrap();
        prop_assert!((back - t).abs() <= 1e-10 * t.max(1.0),
            "{phi:?}: t = {t}, back = {back}");
    }

    /// The kernel table round-trips K^{-1}(K(t)) = t on its range.
    #[test]
    fn kernel_table_round_trip(p in 1.3f64..3.5, chi in 0.1f64..1.5, t in 1e-6f64..1e5) {
        let triple = Triple::power_family(p, chi, 1.0);
        let table = triple.kernel_table(KernelKind::Standard, 1e-8, 1e6, 64).unwrap();
        let back = table.eval_inv(table.eval(t));
        prop_assert!((back - t).abs() <= 1e-8 * t.max(1e-8));
    }

    /// Scaling f by sigma never changes a Keller-Osserman verdict.
    #[test]
    fn ko_verdict_scaling_invariant(
        p in 1.3f64..3.0,
        chi in 0.2f64..1.5,
        delta in 0.15f64..1.0,
        sign in proptest::bool::ANY,
        sigma in prop_oneof![Just(0.1f64), Just(10.0f64)],
    ) {
        let omega = if sign { chi + delta } else { (chi - delta).max(0.01) };
        let base = Triple::power_family(p, chi, omega);
        let scaled = Triple {
            phi: base.phi.clone(),
            l: base.l.clone(),
            f: Nonlinearity::Custom {
                eval: std::sync::Arc::new(move |t: f64| sigma * t.max(0.0).powf(omega)),
            },
        };
        for ep in [Endpoint::Zero, Endpoint::Infinity] {
            let a = ko_verdict(&base, ep, KernelKind::Standard).unwrap().outcome;
            let b = ko_verdict(&scaled, ep, KernelKind::Standard).unwrap().outcome;
            prop_assert_eq!(a, b, "sigma = {}, endpoint {:?}", sigma, ep);
        }
    }

    /// Away from the diagonal the verdicts at zero and infinity are
    /// complementary across omega = chi.
    #[test]
    fn ko_complementary_across_diagonal(
        p in 1.3f64..3.0,
        chi in 0.2f64..1.5,
        delta in 0.1f64..1.0,
    ) {
        let below = Triple::power_family(p, chi, (chi - delta).max(0.01));
        let above = Triple::power_family(p, chi, chi + delta);
        prop_assert_eq!(
            ko_verdict(&below, Endpoint::Zero, KernelKind::Standard).unwrap().outcome,
            Verdict::Holds
        );
        prop_assert_eq!(
            ko_verdict(&below, Endpoint::Infinity, KernelKind::Standard).unwrap().outcome,
            Verdict::Fails
        );
        prop_assert_eq!(
            ko_verdict(&above, Endpoint::Zero, KernelKind::Standard).unwrap().outcome,
            Verdict::Fails
        );
        prop_assert_eq!(
            ko_verdict(&above, Endpoint::Infinity, KernelKind::Standard).unwrap().outcome,
            Verdict::Holds
        );
    }

    /// The Green kernel is strictly decreasing and tends to zero.
    #[test]
    fn green_kernel_decreasing(m in 3usize..6, r in 0.2f64..5.0) {
        let model = korad::model::ModelManifold::euclidean(m);
        let g1 = model.green_kernel(2.0, r).unwrap();
        let g2 = model.green_kernel(2.0, r * 1.5).unwrap();
        let g3 = model.green_kernel(2.0, r * 100.0).unwrap();
        prop_assert!(g1 > g2 && g2 > g3);
        prop_assert!(g3 < 0.05 * g1);
    }

    /// Config text round-trips through parse -> canonical text -> parse.
    #[test]
    fn config_round_trip(
        keys in proptest::collection::btree_map(
            "[a-z][a-z0-9]{0,6}(\\.[a-z][a-z0-9]{0,6}){0,2}",
            -1e6f64..1e6,
            1..12,
        )
    ) {
        let mut text = String::new();
        for (k, v) in &keys {
            text.push_str(&format!("{k} = {v}\n"));
        }
        let cfg = korad::config::Config::parse("prop", &text).unwrap();
        let canon = cfg.to_text();
        let cfg2 = korad::config::Config::parse("prop2", &canon).unwrap();
        prop_assert_eq!(canon, cfg2.to_text());
    }

    /// Decreasing mu never turns an applicable theorem verdict into a
    /// non-applicable one.
    #[test]
    fn theorem_checker_monotone_in_mu(
        mu in -2.0f64..3.0,
        step in 0.01f64..2.0,
        chi in 0.0f64..2.0,
        alpha in -2.0f64..2.0,
        omega in 0.0f64..3.0,
    ) {
        let params = korad::verify::TheoremParams {
            m: 3, p: 2.0, p_bar: 2.0, kappa: 1.0,
            alpha, mu, chi, omega, v_infinity: 0.0,
        };
        let mut lower = params;
        lower.mu = mu - step;
        let before = korad::verify::theorem_applicability(&params);
        let after = korad::verify::theorem_applicability(&lower);
        for (a, b) in before.iter().zip(&after) {
            if a.applicable {
                prop_assert!(b.applicable, "{:?} broke when mu decreased", a.theorem);
            }
        }
    }
}

/// The domain types are immutable after construction and safe to share
/// across threads, as the concurrency model promises.
#[test]
fn domain_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<korad::nonlinearity::Triple>();
    assert_send_sync::<korad::nonlinearity::PhiFunction>();
    assert_send_sync::<korad::nonlinearity::WeightProfile>();
    assert_send_sync::<korad::nonlinearity::KernelTable>();
    assert_send_sync::<korad::model::ModelManifold>();
    assert_send_sync::<korad::bvp::BvpProblem>();
    assert_send_sync::<korad::bvp::BvpSolution>();
    assert_send_sync::<korad::construct::CertifiedProfile>();
    assert_send_sync::<korad::grid::RadialFunction>();
}
