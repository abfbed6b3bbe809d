//! Model manifold geometry: comparison (Jacobi) solutions, volume growth,
//! Green kernels, the critical curve, and the fake distance.
//!
//! Run with: `cargo run --example model_geometry`

use std::sync::Arc;

use korad::model::{
    closed_form_comparison, csp_initial_slope, jacobi_solve, ComparisonDirection,
    CurvatureProfile, GrowthEstimate, GrowthRegime, JacobiData, ModelManifold, Origin,
};

fn main() {
    // Jacobi comparison: constant curvature reproduces sinh
    let kappa = 2.0;
    let sol = jacobi_solve(
        &JacobiData {
            profile: CurvatureProfile::Constant { value: kappa * kappa },
            g0: 0.0,
            dg0: 1.0,
            direction: ComparisonDirection::Upper,
        },
        5.0,
    );
    println!(
        "jacobi g'' = {kappa}^2 g: g(5) = {:.10e} (sinh closed form {:.10e})",
        sol.g_at(5.0),
        (kappa * 5.0).sinh() / kappa
    );

    // hyperbolic radial geometry
    let hyp = ModelManifold::hyperbolic(3, 1.0);
    let geo = hyp.radial_geometry(1.0);
    println!(
        "hyperbolic m=3, kappa=1 at r=1: Delta r = {:.6} (2 coth 1 = {:.6}), curvature = {:.3}",
        geo.laplacian,
        2.0 / 1f64.tanh(),
        geo.curvature
    );

    // volume growth exponents
    let euclid = ModelManifold::euclidean(4);
    if let GrowthEstimate::Stable(v) = euclid.volume_growth_exponent(GrowthRegime::LogOfR) {
        println!("euclidean m=4: log V / log r -> {v:.6}");
    }
    let slow = ModelManifold::from_jacobi(
        3,
        CurvatureProfile::PowerOneR2 { kappa: 1.0, alpha: -2.0 },
        2048.0,
    );
    if let GrowthEstimate::Stable(v) = slow.volume_growth_exponent(GrowthRegime::LogOfR) {
        let kbar = 0.5 * (1.0 + 5f64.sqrt());
        println!("alpha=-2 model: log V / log r -> {v:.6} ((m-1) kbar + 1 = {:.6})", 2.0 * kbar + 1.0);
    }

    // Green kernel and fake distance on R^3
    let e3 = ModelManifold::euclidean(3);
    let g1 = e3.green_kernel(2.0, 1.0).unwrap();
    println!("green kernel R^3, p=2, r=1: {g1:.8e} (1/(4 pi) = {:.8e})", 0.25 / std::f64::consts::PI);
    let back = e3.fake_distance(2.0, g1).unwrap();
    println!("fake distance round trip at r=1: {back:.12}");

    // the plane is parabolic: no positive Green kernel
    match ModelManifold::euclidean(2).green_kernel(2.0, 1.0) {
        Err(e) => println!("euclidean m=2: {e}"),
        Ok(_) => unreachable!(),
    }

    // critical curve on the exponential warp is a constant
    let expo = ModelManifold::custom(
        3,
        Arc::new(|r: f64| (0.5 * r).exp()),
        Some(Arc::new(|r: f64| 0.5 * (0.5 * r).exp())),
        Origin::Boundary { offset: 0.0 },
    );
    println!(
        "critical curve on g = e^(r/2), m=3, p=2: chi(1) = {:.8} (((m-1) kappa / p)^p = {:.8})",
        expo.critical_curve(2.0, 1.0).unwrap(),
        (2.0f64 * 0.5 / 2.0).powi(2)
    );

    // closed-form comparison solutions and the boundary-slope constant
    for (alpha, kappa) in [(0.0, 1.0), (-1.0, 1.0)] {
        let c = csp_initial_slope(alpha, kappa);
        let profile = CurvatureProfile::PowerOneR { kappa, alpha };
        let ok = closed_form_comparison(&profile, -c, ComparisonDirection::Lower, 10.0).is_ok();
        println!("admissible boundary slope for K_rad <= -{kappa}^2 (1+r)^{alpha}: {c:.6} (admissible: {ok})");
    }
}
