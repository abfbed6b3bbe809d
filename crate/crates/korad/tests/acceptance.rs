//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Tolerances and thresholds are pinned here, in code. Run with
//! `cargo test --test acceptance -- --nocapture` to see the per-criterion
//! lines.

use std::sync::Arc;

use korad::bvp::{self, BoundaryData, BvpProblem, ClassifyOptions, Extension, OriginSlopeClass};
use korad::construct::{self, CspLocatedSpec, CspSpec, SlSpec};
use korad::ko::{self, Endpoint, Route};
use korad::model::{
    jacobi_solve, ComparisonDirection, CurvatureProfile, GrowthEstimate, GrowthRegime,
    JacobiData, ModelManifold,
};
use korad::nonlinearity::{GradientTerm, KernelKind, Nonlinearity, PhiFunction, Triple, WeightProfile};
use korad::quad;
use korad::verdict::Verdict;
use korad::verify::{self, TheoremParams};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

const SWEEP_P: [f64; 3] = [1.5, 2.0, 3.0];
const SWEEP_CHI: [f64; 2] = [0.5, 1.0];

/// Criterion 1: the 12-point Keller-Osserman truth table, closed-form and
/// numeric routes agreeing in every cell. Runtime < 5 s.
#[test]
fn criterion_1_ko_truth_table() {
    let t0 = std::time::Instant::now();
    let mut worst = String::new();
    let mut ok = true;
    for &p in &SWEEP_P {
        for &chi in &SWEEP_CHI {
            for &omega in &[chi / 2.0, 2.0 * chi] {
                let triple = Triple::power_family(p, chi, omega);
                let zero = ko::ko_verdict(&triple, Endpoint::Zero, KernelKind::Standard).unwrap();
                let inf = ko::ko_verdict(&triple, Endpoint::Infinity, KernelKind::Standard).unwrap();
                let zero_expect = if omega < chi { Verdict::Holds } else { Verdict::Fails };
                let inf_expect = if omega > chi { Verdict::Holds } else { Verdict::Fails };
                let cell_ok = zero.outcome == zero_expect
                    && inf.outcome == inf_expect
                    && zero.route == Route::Both
                    && inf.route == Route::Both;
                if !cell_ok {
                    ok = false;
                    worst = format!(
                        "p={p} chi={chi} omega={omega}: zero={:?}/{:?} inf={:?}/{:?}",
                        zero.outcome, zero.route, inf.outcome, inf.route
                    );
                }
            }
        }
    }
    let detail = if ok {
        format!("12 cells, both routes agree, {:?}", t0.elapsed())
    } else {
        worst
    };
    report("1 (KO truth table)", ok && t0.elapsed().as_secs() < 5, &detail);
}

fn linear_triple(omega: f64) -> Triple {
    Triple::new(
        PhiFunction::power_law(2.0),
        Nonlinearity::power(omega),
        GradientTerm::constant(1.0),
    )
}

/// Criterion 2: Dirichlet and mixed calibration against sinh/cosh at
/// sup-error 1e-7, N = 512. Runtime < 2 s.
#[test]
fn criterion_2_bvp_calibration() {
    let t0 = std::time::Instant::now();
    let dirichlet = BvpProblem::with_unit_coefficients(
        linear_triple(1.0),
        1.0,
        BoundaryData::Dirichlet { eta: 1.0 },
        5.0,
    );
    let sol = bvp::solve_dirichlet(&dirichlet).unwrap();
    let mut sup_d = 0.0f64;
    for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
        sup_d = sup_d.max((v - t.sinh() / 1f64.sinh()).abs());
    }
    let mixed = BvpProblem::with_unit_coefficients(
        linear_triple(1.0),
        1.0,
        BoundaryData::Mixed { eta: 1.0 },
        5.0,
    );
    let sol = bvp::solve_mixed(&mixed).unwrap();
    let mut sup_m = 0.0f64;
    for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
        sup_m = sup_m.max((v - t.cosh() / 1f64.cosh()).abs());
    }
    let pass = sup_d <= 1e-7 && sup_m <= 1e-7 && t0.elapsed().as_secs() < 2;
    report(
        "2 (BVP calibration)",
        pass,
        &format!("sinh sup-error {sup_d:.2e}, cosh sup-error {sup_m:.2e}, {:?}", t0.elapsed()),
    );
}

/// Criterion 3: the origin-slope dichotomy agrees with the Keller-Osserman
/// verdict at zero across the 12-point sweep. Runtime < 60 s.
#[test]
fn criterion_3_origin_slope_dichotomy() {
    let t0 = std::time::Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for &p in &SWEEP_P {
        for &chi in &SWEEP_CHI {
            for &omega in &[chi / 2.0, 2.0 * chi] {
                let triple = Triple::power_family(p, chi, omega);
                let ko_zero = ko::ko_verdict(&triple, Endpoint::Zero, KernelKind::Standard)
                    .unwrap()
                    .outcome;
                let t_end = 1.0;
                // the dead-core side needs a boundary value below the
                // separatrix, which is the inverse Keller-Osserman integral
                let eta = match bvp::dead_core_separatrix(&triple, t_end) {
                    Some(sep) => 0.25 * sep,
                    None => 0.05,
                };
                // the admissible gradient ceiling depends on the growth of
                // the gradient factor: singular factors need headroom for
                // phi(xi) to beat the floored l_xi, growing ones must keep
                // l_xi itself small
                let mut class = None;
                for &xi in &[5.0, 10.0, 100.0, 1e4, 1e6] {
                    let mut problem = BvpProblem::with_unit_coefficients(
                        triple.clone(),
                        t_end,
                        BoundaryData::Dirichlet { eta },
                        xi,
                    );
                    problem.grid_n = 512;
                    match bvp::classify_origin_slope(&problem, ClassifyOptions::default()) {
                        Ok(c) => {
                            class = Some(c);
                            break;
                        }
                        Err(korad::error::BvpError::RestrictionViolated { .. }) => continue,
                        Err(e) => panic!("cell p={p} chi={chi} omega={omega}: {e}"),
                    }
                }
                let class = class.expect("no admissible gradient ceiling found");
                let agrees = match ko_zero {
                    Verdict::Holds => class == OriginSlopeClass::Zero,
                    Verdict::Fails => class == OriginSlopeClass::Positive,
                    Verdict::Inconclusive => false,
                };
                if !agrees {
                    ok = false;
                    detail = format!("p={p} chi={chi} omega={omega}: ko={ko_zero:?} class={class:?}");
                }
            }
        }
    }
    let pass = ok && t0.elapsed().as_secs() < 60;
    if detail.is_empty() {
        detail = format!("12 cells agree, {:?}", t0.elapsed());
    }
    report("3 (origin-slope dichotomy)", pass, &detail);
}

/// Criterion 4: blow-up detection. `w'' = w^3` blows up at the
/// energy-quadrature radius within 1%; `w'' = w` reaches r = 50. Runtime < 5 s.
#[test]
fn criterion_4_blowup_detection() {
    let t0 = std::time::Instant::now();
    let cubic = BvpProblem::with_unit_coefficients(
        linear_triple(3.0),
        1.0,
        BoundaryData::Mixed { eta: 1.0 },
        20.0,
    );
    let sol = bvp::solve_mixed(&cubic).unwrap();
    let wt = sol.profile.eval(1.0);
    let wpt = sol.profile.eval_deriv(1.0);
    let energy = wpt * wpt / 2.0 - wt.powi(4) / 4.0;
    let oracle = 1.0
        + quad::integrate_to_infinity(
            |w| 1.0 / (2.0 * energy + w.powi(4) / 2.0).sqrt(),
            wt,
            1e-10,
        )
        .finite()
        .unwrap();
    let ext = bvp::extend_maximal(&sol, &cubic, 50.0);
    let (finite_ok, r_detail) = match ext.extension {
        Extension::Finite(r) => ((r - oracle).abs() <= 0.01 * oracle && ext.stabilized, r),
        Extension::Infinite => (false, f64::NAN),
    };

    let linear = BvpProblem::with_unit_coefficients(
        linear_triple(1.0),
        1.0,
        BoundaryData::Mixed { eta: 1.0 },
        5.0,
    );
    let sol = bvp::solve_mixed(&linear).unwrap();
    let ext_lin = bvp::extend_maximal(&sol, &linear, 50.0);
    let infinite_ok = ext_lin.extension == Extension::Infinite && ext_lin.stabilized;

    let pass = finite_ok && infinite_ok && t0.elapsed().as_secs() < 5;
    report(
        "4 (blow-up detection)",
        pass,
        &format!(
            "cubic R = {r_detail:.6} vs oracle {oracle:.6}, linear reaches 50: {infinite_ok}, {:?}",
            t0.elapsed()
        ),
    );
}

fn csp_triple() -> Triple {
    // phi = t, l = 1 (chi = 1), f = sqrt(t)
    Triple::new(
        PhiFunction::power_law(2.0),
        Nonlinearity::power(0.5),
        GradientTerm::constant(1.0),
    )
}

/// Criterion 5: both compact support constructions pass their certificates
/// on the power family, the independent residual report agrees in sign at
/// every node, and the located variant's support is `[R, 2R]` within one
/// grid cell. Runtime < 30 s.
#[test]
fn criterion_5_csp_certificates() {
    let t0 = std::time::Instant::now();
    // theta = 0 is an admissible drift bound on Euclidean models, whose
    // radial Laplacian is non-negative
    let spec = CspSpec {
        triple: csp_triple(),
        beta: WeightProfile::power_decay(2.0, 1.0),
        beta_bar: WeightProfile::power_decay(2.0, 0.25),
        theta: Arc::new(|_| 0.0),
        r0: 1.0,
        support_start: 2.0,
        epsilon: 0.5,
    };
    let free = construct::build_csp_supersolution(&spec).unwrap();
    let free_ok = free.all_passed();

    // independent oracle on the Euclidean model: for a decreasing profile
    // the full phi-Laplacian is below the certified drift form, so the
    // supersolution sign must persist node by node
    let model = ModelManifold::euclidean(3);
    let delta_r: korad::nonlinearity::DynFn = {
        let m = model.clone();
        Arc::new(move |r: f64| m.laplacian(r))
    };
    let eps_beta: korad::nonlinearity::DynFn = {
        let beta = spec.beta.clone();
        let eps = spec.epsilon;
        Arc::new(move |r: f64| eps * beta.eval(r))
    };
    let oracle = verify::residual_report_grid(
        &delta_r,
        &spec.triple,
        &eps_beta,
        &free.profile,
        &[free.support_end.unwrap()],
    );
    let oracle_ok = oracle.sign_verdict(verify::ResidualSide::NonPositive);

    let located_spec = CspLocatedSpec {
        triple: csp_triple(),
        beta: WeightProfile::power_decay(2.0, 0.25),
        theta: Arc::new(|_| 0.0),
        r0: 1.0,
        support_start: 2.0,
        epsilon: 0.5,
        b2: construct::DEFAULT_B2,
    };
    let located = construct::build_csp_supersolution_located(&located_spec).unwrap();
    let located_ok = located.all_passed();
    let big_r = located.search_trace[0].1;
    let cell = big_r / 512.0;
    let support_ok = (located.support_end.unwrap() - 2.0 * big_r).abs() <= cell;

    let pass = free_ok && oracle_ok && located_ok && support_ok && t0.elapsed().as_secs() < 30;
    report(
        "5 (CSP supersolutions)",
        pass,
        &format!(
            "free: {free_ok}, oracle sign: {oracle_ok} (min {:.2e}, max {:.2e}), located: {located_ok}, support end {:.4} vs 2R = {:.4}, {:?}",
            oracle.min,
            oracle.max,
            located.support_end.unwrap(),
            2.0 * big_r,
            t0.elapsed()
        ),
    );
}

/// Criterion 6: blow-up supersolutions, standard kernel on p-Laplacian data
/// and the mean curvature variant, pass plateau, divergence and residual
/// certificates. Runtime < 30 s.
#[test]
fn criterion_6_sl_certificates() {
    let t0 = std::time::Instant::now();
    let standard = SlSpec {
        triple: Triple::power_family(2.0, 1.0, 2.0),
        beta: WeightProfile::power_decay(1.0, 1.0),
        beta_bar: WeightProfile::power_decay(1.0, 1.0),
        theta: Arc::new(|_| 0.0),
        r0: 1.0,
        r1: 2.0,
        delta: 0.1,
        lambda: 0.5,
        epsilon: 1.0,
        mc_variant: false,
    };
    let std_profile = construct::build_sl_supersolution(&standard).unwrap();

    let mc = SlSpec {
        triple: Triple::new(
            PhiFunction::MeanCurvature,
            Nonlinearity::power(2.0),
            GradientTerm::phi_quotient(1.0),
        ),
        beta: WeightProfile::power_decay(1.0, 1.0),
        beta_bar: WeightProfile::power_decay(1.0, 1.0),
        theta: Arc::new(|_| 0.0),
        r0: 1.0,
        r1: 2.0,
        delta: 0.1,
        lambda: 0.5,
        epsilon: 1.0,
        mc_variant: true,
    };
    let mc_profile = construct::build_sl_supersolution(&mc).unwrap();

    // independent residual check of the standard profile, certified drift
    // form with theta = 0
    let delta_r: korad::nonlinearity::DynFn = Arc::new(|_| 0.0);
    let eps_beta: korad::nonlinearity::DynFn = {
        let beta = standard.beta.clone();
        Arc::new(move |r: f64| beta.eval(r))
    };
    let oracle = verify::residual_report_grid(
        &delta_r,
        &standard.triple,
        &eps_beta,
        &std_profile.profile,
        &[],
    );
    let oracle_ok = oracle.sign_verdict(verify::ResidualSide::NonPositive);

    let pass = std_profile.all_passed()
        && mc_profile.all_passed()
        && oracle_ok
        && t0.elapsed().as_secs() < 30;
    report(
        "6 (SL supersolutions)",
        pass,
        &format!(
            "standard: {}, mc variant: {}, oracle sign: {oracle_ok}, {:?}",
            std_profile.all_passed(),
            mc_profile.all_passed(),
            t0.elapsed()
        ),
    );
}

/// Criterion 7: comparison calibration — sinh reproduction, hyperbolic
/// radial Laplacian, and the volume-growth exponent for alpha = -2.
/// Runtime < 5 s.
#[test]
fn criterion_7_comparison_calibration() {
    let t0 = std::time::Instant::now();
    let kappa = 2.0;
    let data = JacobiData {
        profile: CurvatureProfile::Constant { value: kappa * kappa },
        g0: 0.0,
        dg0: 1.0,
        direction: ComparisonDirection::Upper,
    };
    let sol = jacobi_solve(&data, 5.0);
    let expect = (kappa * 5.0).sinh() / kappa;
    let jacobi_err = ((sol.g_at(5.0) - expect) / expect).abs();

    let m = 4;
    let model = ModelManifold::hyperbolic(m, kappa);
    let mut lap_err = 0.0f64;
    for &r in &[0.5, 1.0, 2.0] {
        let expect = (m as f64 - 1.0) * kappa / (kappa * r).tanh();
        lap_err = lap_err.max(((model.laplacian(r) - expect) / expect).abs());
    }

    let growth_model = ModelManifold::from_jacobi(
        3,
        CurvatureProfile::PowerOneR2 { kappa: 1.0, alpha: -2.0 },
        2048.0,
    );
    let kbar = 0.5 * (1.0 + 5f64.sqrt());
    let expect = 2.0 * kbar + 1.0;
    let growth_err = match growth_model.volume_growth_exponent(GrowthRegime::LogOfR) {
        GrowthEstimate::Stable(v) => (v - expect).abs(),
        GrowthEstimate::Inconclusive => f64::INFINITY,
    };

    let pass = jacobi_err <= 1e-8 && lap_err <= 1e-8 && growth_err <= 1e-2
        && t0.elapsed().as_secs() < 5;
    report(
        "7 (comparison calibration)",
        pass,
        &format!(
            "sinh rel {jacobi_err:.2e}, laplacian rel {lap_err:.2e}, growth exponent err {growth_err:.2e}, {:?}",
            t0.elapsed()
        ),
    );
}

/// Criterion 8: Green kernel and critical-curve calibration plus the fake
/// distance round trip. Runtime < 5 s.
#[test]
fn criterion_8_green_calibration() {
    let t0 = std::time::Instant::now();
    let euclid = ModelManifold::euclidean(3);
    let mut green_err = 0.0f64;
    for &r in &[0.5, 1.0, 4.0] {
        let expect = 1.0 / (4.0 * std::f64::consts::PI * r);
        green_err = green_err.max(((euclid.green_kernel(2.0, r).unwrap() - expect) / expect).abs());
    }

    let (m, p, kappa) = (3usize, 2.0f64, 0.5f64);
    let expo = ModelManifold::custom(
        m,
        Arc::new(move |r: f64| (kappa * r).exp()),
        Some(Arc::new(move |r: f64| kappa * (kappa * r).exp())),
        korad::model::Origin::Boundary { offset: 0.0 },
    );
    let chi_expect = ((m as f64 - 1.0) / p).powf(p) * kappa.powf(p);
    let mut chi_err = 0.0f64;
    for &tpt in &[0.5, 1.0, 3.0] {
        chi_err = chi_err.max(((expo.critical_curve(p, tpt).unwrap() - chi_expect) / chi_expect).abs());
    }

    let mut fake_err = 0.0f64;
    for &r in &[0.3, 1.0, 5.0] {
        let gv = euclid.green_kernel(2.0, r).unwrap();
        fake_err = fake_err.max((euclid.fake_distance(2.0, gv).unwrap() - r).abs());
    }

    let pass = green_err <= 1e-6 && chi_err <= 1e-6 && fake_err <= 1e-8
        && t0.elapsed().as_secs() < 5;
    report(
        "8 (Green / critical curve)",
        pass,
        &format!(
            "green rel {green_err:.2e}, critical-curve rel {chi_err:.2e}, fake-distance {fake_err:.2e}, {:?}",
            t0.elapsed()
        ),
    );
}

/// Criterion 9: the counterexample gallery passes the seeded 20-in/20-out
/// sweep for all five families. Runtime < 2 min.
#[test]
fn criterion_9_counterexample_gallery() {
    let t0 = std::time::Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for family in korad::cli::GALLERY_FAMILIES {
        let (in_ok, in_total, out_ok, out_total) = korad::cli::gallery_sweep(family, 20, 42);
        detail.push_str(&format!("{family} {in_ok}/{in_total}+{out_ok}/{out_total} "));
        ok &= in_ok == in_total && out_ok == out_total;
    }
    let pass = ok && t0.elapsed().as_secs() < 120;
    report(
        "9 (counterexample gallery)",
        pass,
        &format!("{detail}{:?}", t0.elapsed()),
    );
}

/// Criterion 10: thirty hand-enumerated parameter tuples covering every
/// clause of the four theorems return the expected verdicts and failed
/// clauses. Runtime < 1 s.
#[test]
fn criterion_10_theorem_checker() {
    let t0 = std::time::Instant::now();
    // (m, p, kappa, alpha, mu, chi, omega, vinf,
    //  expect [smp, wmp, csp, sl], substring of the expected failed clause
    //  or "" when all four applicable)
    struct Row {
        m: usize,
        p: f64,
        kappa: f64,
        alpha: f64,
        mu: f64,
        chi: f64,
        omega: f64,
        vinf: f64,
        expect: [bool; 4],
        clause: &'static str,
    }
    let rows = vec![
        // every clause satisfied (SL needs omega > chi, CSP omega < chi:
        // they can never hold simultaneously)
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: -2.0, mu: 2.0, chi: 1.0, omega: 0.5, vinf: 3.0, expect: [true, true, true, false], clause: "Keller-Osserman" },
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: -2.0, mu: 1.5, chi: 1.0, omega: 2.0, vinf: 3.0, expect: [true, true, false, true], clause: "" },
        // mu violation flips everything
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: -2.0, mu: 2.5, chi: 1.0, omega: 0.5, vinf: 3.0, expect: [false, false, false, false], clause: "mu <= chi - alpha/2" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: 0.0, mu: 1.0, chi: 1.0, omega: 2.0, vinf: 1.0, expect: [true, true, false, true], clause: "" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: 0.0, mu: 1.1, chi: 1.0, omega: 2.0, vinf: 1.0, expect: [false, false, false, false], clause: "mu <=" },
        // borderline chi = 0 on the strong principle: needs alpha = -2 and
        // kbar <= (p-1)/(m-1); kappa = 0 gives kbar = 1, so m = p = 2 is
        // the equality case
        Row { m: 2, p: 2.0, kappa: 0.0, alpha: -2.0, mu: 0.5, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [true, true, false, false], clause: "chi > 0" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: -2.0, mu: 0.5, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [false, true, false, false], clause: "kbar" },
        Row { m: 3, p: 5.0, kappa: 1.0, alpha: -2.0, mu: 0.5, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [true, true, false, false], clause: "" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: 0.0, mu: -0.5, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [false, true, false, false], clause: "alpha = -2" },
        // weak principle borderline mu = -alpha/2 with chi = 0
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: 0.0, mu: 0.0, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [false, true, false, false], clause: "" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: 0.0, mu: 0.0, chi: 0.0, omega: 1.0, vinf: 0.5, expect: [false, false, false, false], clause: "V_infinity = 0" },
        Row { m: 3, p: 2.0, kappa: 0.5, alpha: -2.0, mu: 1.0, chi: 0.0, omega: 1.0, vinf: 1.5, expect: [false, true, false, false], clause: "" },
        Row { m: 3, p: 2.0, kappa: 0.5, alpha: -2.0, mu: 1.0, chi: 0.0, omega: 1.0, vinf: 2.5, expect: [false, false, false, false], clause: "V_infinity <= p" },
        // CSP needs chi > 0
        Row { m: 2, p: 3.0, kappa: 0.0, alpha: -2.0, mu: 0.5, chi: 0.0, omega: 0.0, vinf: 0.0, expect: [true, true, false, false], clause: "chi > 0" },
        // CSP borderline omega = chi: the C-increasing condition holds but
        // KO_0 fails
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: -2.0, mu: 1.0, chi: 1.0, omega: 1.0, vinf: 3.0, expect: [true, true, false, false], clause: "Keller-Osserman" },
        // SL borderline omega = chi
        Row { m: 3, p: 3.0, kappa: 1.0, alpha: 0.0, mu: 0.5, chi: 2.0, omega: 2.0, vinf: 1.0, expect: [true, true, false, false], clause: "Keller-Osserman" },
        // SL mu <= min(chi+1, chi - alpha/2): the chi+1 branch binds for
        // alpha < -2 ... alpha >= -2 keeps chi - alpha/2 <= chi + 1
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: -2.0, mu: 1.9, chi: 1.0, omega: 3.0, vinf: 1.0, expect: [true, true, false, true], clause: "" },
        Row { m: 3, p: 2.0, kappa: 1.0, alpha: -2.0, mu: 2.1, chi: 1.0, omega: 3.0, vinf: 1.0, expect: [false, false, false, false], clause: "min(chi_1 + 1" },
        // dimension and kappa sweeps on the kbar clause
        Row { m: 2, p: 2.0, kappa: 1.0, alpha: -2.0, mu: 0.0, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [false, true, false, false], clause: "kbar" },
        Row { m: 2, p: 3.0, kappa: 1.0, alpha: -2.0, mu: 0.0, chi: 0.0, omega: 1.0, vinf: 0.0, expect: [true, true, false, false], clause: "" },
        // generic positive-chi rows across alpha
        Row { m: 4, p: 2.5, kappa: 2.0, alpha: 2.0, mu: -0.5, chi: 0.5, omega: 0.25, vinf: 0.0, expect: [true, true, true, false], clause: "" },
        Row { m: 4, p: 2.5, kappa: 2.0, alpha: 2.0, mu: -0.4, chi: 0.5, omega: 0.25, vinf: 0.0, expect: [false, false, false, false], clause: "mu <=" },
        Row { m: 4, p: 2.5, kappa: 2.0, alpha: 2.0, mu: -0.5, chi: 0.5, omega: 1.0, vinf: 0.0, expect: [true, true, false, true], clause: "" },
        Row { m: 5, p: 1.5, kappa: 0.7, alpha: -1.0, mu: 1.0, chi: 0.5, omega: 0.1, vinf: 0.0, expect: [true, true, true, false], clause: "" },
        Row { m: 5, p: 1.5, kappa: 0.7, alpha: -1.0, mu: 1.0, chi: 0.5, omega: 1.5, vinf: 0.0, expect: [true, true, false, true], clause: "" },
        Row { m: 5, p: 1.5, kappa: 0.7, alpha: -1.0, mu: 1.01, chi: 0.5, omega: 1.5, vinf: 0.0, expect: [false, false, false, false], clause: "mu <=" },
        // decreasing mu from a failing row turns things back on
        Row { m: 5, p: 1.5, kappa: 0.7, alpha: -1.0, mu: 0.0, chi: 0.5, omega: 1.5, vinf: 0.0, expect: [true, true, false, true], clause: "" },
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: 0.0, mu: 0.5, chi: 1.0, omega: 0.5, vinf: 0.0, expect: [true, true, true, false], clause: "" },
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: 0.0, mu: 1.0, chi: 1.0, omega: 0.5, vinf: 0.0, expect: [true, true, true, false], clause: "" },
        Row { m: 3, p: 2.0, kappa: 0.0, alpha: 0.0, mu: 1.5, chi: 1.0, omega: 0.5, vinf: 0.0, expect: [false, false, false, false], clause: "mu <=" },
    ];
    assert_eq!(rows.len(), 30, "the table must enumerate 30 tuples");
    let mut ok = true;
    let mut detail = String::new();
    for (i, row) in rows.iter().enumerate() {
        let params = TheoremParams {
            m: row.m,
            p: row.p,
            p_bar: row.p,
            kappa: row.kappa,
            alpha: row.alpha,
            mu: row.mu,
            chi: row.chi,
            omega: row.omega,
            v_infinity: row.vinf,
        };
        let verdicts = verify::theorem_applicability(&params);
        let got: Vec<bool> = verdicts.iter().map(|v| v.applicable).collect();
        if got != row.expect {
            ok = false;
            detail = format!("row {i}: got {got:?}, expected {:?}", row.expect);
            break;
        }
        if !row.clause.is_empty() {
            let found = verdicts
                .iter()
                .filter_map(|v| v.failed_clause.as_deref())
                .any(|c| c.contains(row.clause));
            if !found {
                ok = false;
                detail = format!(
                    "row {i}: no failed clause contains `{}` in {:?}",
                    row.clause,
                    verdicts
                        .iter()
                        .filter_map(|v| v.failed_clause.clone())
                        .collect::<Vec<_>>()
                );
                break;
            }
        }
    }
    let pass = ok && t0.elapsed().as_millis() < 1000;
    if detail.is_empty() {
        detail = format!("30 tuples verified, {:?}", t0.elapsed());
    }
    report("10 (theorem checker)", pass, &detail);
}
