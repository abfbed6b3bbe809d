//! Singular two-point boundary value problems for
//! `[p phi(w')]' = p a f(w) l(|w'|)` on `(0, T)`, solved by damped Picard
//! iteration of the explicit integral fixed-point operators, with
//! classification of the origin slope and maximal forward extension with
//! blow-up detection.
//!
//! The Dirichlet operator is
//!
//! ```text
//! H(w, sigma)(t) = sigma eta
//!     - int_t^T phi^{-1}( [delta + sigma int_0^s p a f(w) l(|w'|)] / p(s) ) ds
//! ```
//!
//! with the split constant `delta` chosen at every evaluation so that
//! `H(w, sigma)(0) = 0`; the mixed (Neumann-Dirichlet) operator is the same
//! expression with `delta = 0`, which automatically enforces `w'(0) = 0`.
//! Derivatives of solutions always come from the integral formula, never
//! from differencing.

use crate::error::BvpError;
use crate::grid::{self, RadialFunction};
use crate::nonlinearity::{DynFn, PhiFunction, Triple};
use crate::ode;

/// Boundary data for the normalized problem on `[0, T]`.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryData {
    /// `w(0) = 0`, `w(T) = eta`
    Dirichlet { eta: f64 },
    /// `w'(0) = 0`, `w(T) = eta`
    Mixed { eta: f64 },
}

impl BoundaryData {
    pub fn eta(&self) -> f64 {
        match self {
            BoundaryData::Dirichlet { eta } | BoundaryData::Mixed { eta } => *eta,
        }
    }
}

/// A singular two-point problem.
///
/// `volume_factor` is the coefficient inside the divergence (`p` above,
/// typically a sphere-volume factor) and `weight_a` the radial weight in
/// front of `f`. Both must be evaluable on `[0, T]`, and beyond `T` when the
/// solution is to be extended maximally.
#[derive(Clone)]
pub struct BvpProblem {
    pub triple: Triple,
    pub weight_a: DynFn,
    pub volume_factor: DynFn,
    pub t_end: f64,
    pub boundary: BoundaryData,
    /// gradient ceiling `xi`: the a-priori bound `|w'| < xi` is enforced
    /// through the restriction inequality before solving
    pub gradient_ceiling: f64,
    /// grid size (number of intervals); nodes cluster quadratically at 0
    pub grid_n: usize,
}

impl std::fmt::Debug for BvpProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BvpProblem")
            .field("triple", &self.triple)
            .field("t_end", &self.t_end)
            .field("boundary", &self.boundary)
            .field("gradient_ceiling", &self.gradient_ceiling)
            .field("grid_n", &self.grid_n)
            .finish()
    }
}

impl BvpProblem {
    /// Problem with constant coefficients `a = p = 1`.
    pub fn with_unit_coefficients(
        triple: Triple,
        t_end: f64,
        boundary: BoundaryData,
        gradient_ceiling: f64,
    ) -> Self {
        Self {
            triple,
            weight_a: std::sync::Arc::new(|_| 1.0),
            volume_factor: std::sync::Arc::new(|_| 1.0),
            t_end,
            boundary,
            gradient_ceiling,
            grid_n: 512,
        }
    }
}

/// Trend of the discrete origin slope under grid refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginSlopeClass {
    /// `w'(0) = 0` (dead-core side of the dichotomy)
    Zero,
    /// `w'(0) > 0`
    Positive,
    Undetermined { value: f64, trend: f64 },
}

/// A solved profile with its diagnostics.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub profile: RadialFunction,
    /// `w'(0)` from the integral formula
    pub origin_slope: f64,
    /// end of the initial plateau (`w` constant on `[0, t0]`)
    pub plateau_radius: f64,
    /// split constant `delta` of the Dirichlet operator (0 for mixed)
    pub delta: f64,
    pub picard_iterations: usize,
    pub continuation_path: Vec<f64>,
}

/// phi extended to a strictly increasing bijection of the real line:
/// odd below zero and linear above the knee. Iterates may leave `[0, xi)`
/// transiently; ultimate solutions never do, so the extension does not
/// affect them.
struct ExtendedPhi<'a> {
    phi: &'a PhiFunction,
    knee: f64,
    phi_knee: f64,
    slope: f64,
}

impl<'a> ExtendedPhi<'a> {
    fn new(phi: &'a PhiFunction, knee: f64) -> Self {
        let phi_knee = phi.eval(knee);
        let slope = phi.deriv(knee).max(1e-8);
        Self {
            phi,
            knee,
            phi_knee,
            slope,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return -self.eval(-t);
        }
        if t <= self.knee {
            self.phi.eval(t)
        } else {
            self.phi_knee + self.slope * (t - self.knee)
        }
    }

    fn inverse(&self, y: f64) -> f64 {
        if y < 0.0 {
            return -self.inverse(-y);
        }
        if y <= self.phi_knee {
            // inside the genuine range of phi
            self.phi.inverse(y).unwrap_or(self.knee)
        } else {
            self.knee + (y - self.phi_knee) / self.slope
        }
    }
}

struct Discretization {
    ts: Vec<f64>,
    p: Vec<f64>,
    pa: Vec<f64>,
    p_min: f64,
    p_max: f64,
    theta: f64,
    f_eta: f64,
    l_xi: f64,
}

impl Discretization {
    fn build(problem: &BvpProblem) -> Self {
        let ts = grid::quadratic_grid(problem.t_end, problem.grid_n);
        let p: Vec<f64> = ts.iter().map(|&t| (problem.volume_factor)(t)).collect();
        let pa: Vec<f64> = ts
            .iter()
            .zip(&p)
            .map(|(&t, &pv)| pv * (problem.weight_a)(t))
            .collect();
        let p_min = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let p_max = p.iter().cloned().fold(0.0f64, f64::max);
        // Theta(T) = sup (1/p) int_0^t p a
        let cum_pa = grid::cumulative_integral(&ts, &pa);
        let theta = ts
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, _)| cum_pa[i] / p[i])
            .fold(0.0f64, f64::max);
        let eta = problem.boundary.eta();
        let f_eta = sample_max(|w| problem.triple.f.eval(w), 0.0, eta);
        let xi = problem.gradient_ceiling;
        // A singular gradient factor is sampled away from its pole, a
        // thousandth of the natural slope scale: the dead-core product
        // convention keeps the actual integrand finite there.
        let l_lo = if problem.triple.l.singular_at_zero(&problem.triple.phi) {
            1e-3 * (eta / problem.t_end).min(xi)
        } else {
            0.0
        };
        let l_xi = sample_max(|s| problem.triple.l_eval(s), l_lo, xi);
        Self {
            ts,
            p,
            pa,
            p_min,
            p_max,
            theta,
            f_eta,
            l_xi,
        }
    }

    /// `p a f(w) l(|w'|)` with the clamped modification of `f, l` outside
    /// `[0, eta] x [0, xi]` (any ultimate solution stays inside).
    fn rhs(&self, problem: &BvpProblem, i: usize, w: f64, wp: f64) -> f64 {
        let eta = problem.boundary.eta();
        let xi = problem.gradient_ceiling;
        let wc = w.clamp(0.0, eta);
        let sc = wp.abs().min(xi);
        self.pa[i] * problem.triple.f_times_l(wc, sc)
    }
}

fn sample_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = 400;
    (0..=n)
        .map(|i| f(lo + (hi - lo) * i as f64 / n as f64))
        .fold(0.0f64, f64::max)
}

fn check_restriction(problem: &BvpProblem, disc: &Discretization) -> Result<f64, BvpError> {
    let eta = problem.boundary.eta();
    let xi = problem.gradient_ceiling;
    let phi = &problem.triple.phi;
    let phi_xi = phi.eval(xi);
    let lhs = match problem.boundary {
        BoundaryData::Dirichlet { .. } => {
            disc.p_max / disc.p_min * phi.eval(eta / problem.t_end)
                + 2.0 * disc.theta * disc.f_eta * disc.l_xi
        }
        BoundaryData::Mixed { .. } => disc.theta * disc.f_eta * disc.l_xi,
    };
    if lhs >= phi_xi {
        return Err(BvpError::RestrictionViolated { lhs, rhs: phi_xi });
    }
    Ok(lhs)
}

/// One evaluation of the fixed-point operator at parameter `sigma`:
/// returns `(w_new, wp_new, delta)` on the grid.
#[allow(clippy::too_many_arguments)]
fn apply_operator(
    problem: &BvpProblem,
    disc: &Discretization,
    phi: &ExtendedPhi,
    w: &[f64],
    wp: &[f64],
    sigma: f64,
    mu1: f64,
    delta_hint: f64,
) -> (Vec<f64>, Vec<f64>, f64) {
    let n = disc.ts.len();
    let integrand: Vec<f64> = (0..n)
        .map(|i| disc.rhs(problem, i, w[i], wp[i]))
        .collect();
    let cum = grid::cumulative_integral(&disc.ts, &integrand);
    let eta = problem.boundary.eta();

    let wp_for = |delta: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let denom = disc.p[i];
                let arg = if denom > 0.0 {
                    (delta + sigma * cum[i]) / denom
                } else {
                    // p(0) = 0 in the degenerate mixed case: the ratio has
                    // limit zero when p' >= 0 near 0
                    0.0
                };
                phi.inverse(arg)
            })
            .collect()
    };

    let delta = match problem.boundary {
        BoundaryData::Mixed { .. } => 0.0,
        BoundaryData::Dirichlet { .. } => {
            // defect(delta) = int_0^T phi^{-1}((delta + sigma cum)/p) - sigma eta,
            // strictly increasing in delta; bisect, warm-started at the hint.
            let defect = |delta: f64| -> f64 {
                let wp = wp_for(delta);
                let cumw = grid::cumulative_integral(&disc.ts, &wp);
                cumw[n - 1] - sigma * eta
            };
            let full_lo = -disc.p_max * mu1;
            let full_hi = disc.p_min * mu1;
            // expanding warm bracket around the hint
            let mut lo = delta_hint;
            let mut hi = delta_hint;
            let mut radius = (1e-3 * mu1).max(1e-300);
            for _ in 0..64 {
                lo = (delta_hint - radius).max(full_lo);
                hi = (delta_hint + radius).min(full_hi);
                if (defect(lo) <= 0.0 || lo <= full_lo) && (defect(hi) >= 0.0 || hi >= full_hi) {
                    break;
                }
                radius *= 4.0;
            }
            let tol = 1e-12 * (1.0 + mu1 * (disc.p_max + disc.p_min));
            for _ in 0..200 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if defect(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };

    let wp_new = wp_for(delta);
    let cumw = grid::cumulative_integral(&disc.ts, &wp_new);
    let w_new: Vec<f64> = match problem.boundary {
        // anchored at w(0) = 0 (the split constant absorbs the defect)
        BoundaryData::Dirichlet { .. } => cumw,
        // anchored at w(T) = sigma eta
        BoundaryData::Mixed { .. } => cumw.iter().map(|c| sigma * eta - (cumw[n - 1] - c)).collect(),
    };
    (w_new, wp_new, delta)
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

const PICARD_RELAXATION: f64 = 0.5;
const PICARD_TOL: f64 = 1e-10;
const PICARD_MAX_ITER: usize = 150;

fn solve(problem: &BvpProblem) -> Result<BvpSolution, BvpError> {
    let disc = Discretization::build(problem);
    let restriction_lhs = check_restriction(problem, &disc)?;
    let eta = problem.boundary.eta();
    let phi_ext = ExtendedPhi::new(&problem.triple.phi, problem.gradient_ceiling);
    // mu1 from the existence bound; the split constant lives in
    // [-p_max mu1, p_min mu1]
    let mu1 = restriction_lhs.max(problem.triple.phi.eval(eta / problem.t_end));

    let n = disc.ts.len();
    let mut w: Vec<f64> = disc.ts.iter().map(|&t| eta * t / problem.t_end).collect();
    let mut wp: Vec<f64> = vec![eta / problem.t_end; n];
    let mut delta = 0.0;
    let mut total_iters = 0usize;
    let mut path = Vec::new();

    // sigma-continuation toward the genuine problem, bisecting the step on
    // stalls
    let mut sigma_reached = 0.0f64;
    let mut step = 0.1;
    'continuation: while sigma_reached < 1.0 {
        let sigma = (sigma_reached + step).min(1.0);
        let mut w_try = w.clone();
        let mut wp_try = wp.clone();
        let mut converged = false;
        // Iterates are projected back onto the solution cone 0 <= w <= sigma eta
        // after every update: exact solutions live there, and without the
        // projection a transiently negative iterate flips f on and off and
        // drives a period-two oscillation where f is non-Lipschitz at zero.
        let mut relax = PICARD_RELAXATION;
        let mut prev_change = f64::INFINITY;
        for _ in 0..PICARD_MAX_ITER {
            total_iters += 1;
            let (w_new, wp_new, d) =
                apply_operator(problem, &disc, &phi_ext, &w_try, &wp_try, sigma, mu1, delta);
            let change = sup_diff(&w_new, &w_try);
            delta = d;
            if change > prev_change {
                relax = (relax * 0.5).max(0.05);
            } else if change < 0.5 * prev_change {
                relax = (relax * 1.3).min(PICARD_RELAXATION);
            }
            prev_change = change;
            for i in 0..n {
                w_try[i] = (w_try[i] + relax * (w_new[i] - w_try[i])).clamp(0.0, sigma * eta);
                wp_try[i] += relax * (wp_new[i] - wp_try[i]);
            }
            if change <= PICARD_TOL * (1.0 + sup_norm(&w_try)) {
                // land exactly on the operator output
                w_try = w_new;
                wp_try = wp_new;
                converged = true;
                break;
            }
        }
        if converged {
            w = w_try;
            wp = wp_try;
            sigma_reached = sigma;
            path.push(sigma);
            continue 'continuation;
        }
        step *= 0.5;
        if step < 1.0 / 320.0 {
            return Err(BvpError::NoConvergence {
                detail: format!(
                    "picard stalled at sigma = {sigma_reached} with step {step} after {total_iters} iterations"
                ),
            });
        }
    }

    // plateau: the solution is constant until the cumulative right-hand side
    // first becomes positive
    let integrand: Vec<f64> = (0..n).map(|i| disc.rhs(problem, i, w[i], wp[i])).collect();
    let cum = grid::cumulative_integral(&disc.ts, &integrand);
    let plateau_radius = match problem.boundary {
        BoundaryData::Mixed { .. } => {
            let mut t0 = 0.0;
            for i in 0..n {
                if cum[i] > 1e-14 * (1.0 + cum[n - 1]) {
                    break;
                }
                t0 = disc.ts[i];
            }
            t0
        }
        BoundaryData::Dirichlet { .. } => {
            let mut t0 = 0.0;
            for (&t, &wi) in disc.ts.iter().zip(&w) {
                if wi > 1e-12 * eta {
                    break;
                }
                t0 = t;
            }
            t0
        }
    };

    Ok(BvpSolution {
        origin_slope: wp[0],
        profile: RadialFunction::new(disc.ts, w, wp),
        plateau_radius,
        delta,
        picard_iterations: total_iters,
        continuation_path: path,
    })
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Solves the Dirichlet problem `w(0) = 0`, `w(T) = eta`.
///
/// Requires `f(0) l(0) = 0` (in the dead-core product sense) and the
/// restriction inequality; falls back to shooting on the boundary defect
/// when the damped Picard iteration stalls, which happens in dead-core
/// regimes where the operator is not Lipschitz at `w = 0`.
pub fn solve_dirichlet(problem: &BvpProblem) -> Result<BvpSolution, BvpError> {
    assert!(matches!(problem.boundary, BoundaryData::Dirichlet { .. }));
    assert!(
        problem.triple.f_times_l(0.0, 0.0) == 0.0,
        "the Dirichlet problem needs f(0) l(0) = 0"
    );
    // A gradient factor singular at zero sits outside the continuity
    // assumptions of the fixed-point operator; the dead-core shooting
    // handles it directly instead of stalling first.
    if problem.triple.l.singular_at_zero(&problem.triple.phi) {
        let disc = Discretization::build(problem);
        check_restriction(problem, &disc)?;
        return shooting_fallback(problem);
    }
    match solve(problem) {
        Ok(s) => Ok(s),
        Err(BvpError::NoConvergence { .. }) => shooting_fallback(problem),
        Err(e) => Err(e),
    }
}

/// Solves the mixed problem `w'(0) = 0`, `w(T) = eta`.
///
/// Supports a degenerate volume factor with `p(0) = 0`, `p' >= 0` near 0.
pub fn solve_mixed(problem: &BvpProblem) -> Result<BvpSolution, BvpError> {
    assert!(matches!(problem.boundary, BoundaryData::Mixed { .. }));
    match solve(problem) {
        Ok(s) => Ok(s),
        Err(BvpError::NoConvergence { .. }) => shooting_fallback(problem),
        Err(e) => Err(e),
    }
}

/// Boundary value below which the Dirichlet problem on `[0, t]` with unit
/// coefficients develops a dead core: the liftoff trajectory satisfies
/// `K(w') = F(w)`, so its graph is the inverse of the Keller-Osserman
/// integral `t(w) = int_0^w ds / K^{-1}(F(s))`. Returns `None` when that
/// integral diverges at zero (no dead core for any boundary value).
pub fn dead_core_separatrix(triple: &Triple, t: f64) -> Option<f64> {
    use crate::nonlinearity::KernelKind;
    let table = triple.kernel_table(KernelKind::Standard, 1e-14, 1e6, 100).ok()?;
    let integrand = |s: f64| 1.0 / table.eval_inv(triple.f.big_f(s));
    let phi_of = |w: f64| crate::quad::integrate_from_zero(integrand, w, 1e-9);
    phi_of(1.0)?; // diverging integral: no dead core
    let mut hi = 1.0;
    for _ in 0..200 {
        match phi_of(hi) {
            Some(v) if v >= t => break,
            _ => hi *= 2.0,
        }
    }
    // descend the lower bracket until the integral drops below the target
    // (far below, F underflows and the integrand is no longer evaluable)
    let mut lo = hi;
    for _ in 0..200 {
        lo *= 0.5;
        match phi_of(lo) {
            Some(v) if v < t => break,
            Some(_) => {}
            None => return None,
        }
    }
    Some(crate::root::bisect_increasing(
        |w| phi_of(w).unwrap_or(f64::INFINITY),
        lo,
        hi,
        t,
        1e-12 * hi,
    ))
}

/// Initial state for a trajectory lifting off the dead core at `t0`:
/// locally the energy relation `K(w') = a(t0) F(w)` pins the slope, so the
/// march can start from a representable positive value instead of the
/// degenerate exact zero.
fn liftoff_state(problem: &BvpProblem, t0: f64, eps: f64) -> (f64, f64) {
    let a0 = (problem.weight_a)(t0).max(1e-300);
    let f_eps = problem.triple.f.big_f(eps);
    let wp = match problem.triple.kernel_power_form(crate::nonlinearity::KernelKind::Standard) {
        Some(pk) => (a0 * f_eps / pk.coeff).powf(1.0 / pk.exponent),
        None => problem
            .triple
            .kernel_table(crate::nonlinearity::KernelKind::Standard, 1e-14, 1e2, 64)
            .map(|t| t.eval_inv(a0 * f_eps))
            .unwrap_or(0.0),
    };
    (eps, wp)
}

/// Forward march of `(w, z = p phi(w'))` from `(t_start, w0, z0)` to `T`.
fn forward_march(
    problem: &BvpProblem,
    phi_ext: &ExtendedPhi,
    t_start: f64,
    w0: f64,
    z0: f64,
) -> (f64, Vec<f64>, Vec<[f64; 2]>) {
    let p = &problem.volume_factor;
    let march = ode::march_adaptive(
        |t, y: &[f64; 2]| {
            let pv = (p)(t).max(1e-300);
            let wp = phi_ext.inverse(y[1] / pv);
            [
                wp,
                pv * (problem.weight_a)(t) * problem.triple.f_times_l(y[0].max(0.0), wp.abs()),
            ]
        },
        t_start,
        [w0, z0],
        problem.t_end,
        1e-11,
        1e-15,
        |_, _| false,
    );
    let wt = march.states.last().unwrap()[0];
    (wt, march.ts, march.states)
}

/// Shooting reformulation on the scalar boundary defect `w(T) - eta`.
///
/// The shooting parameter `x` covers both sides of the origin-slope
/// dichotomy: for `x >= 0` the trajectory starts at `t = 0` with slope `x`
/// (Dirichlet) or value `x` (mixed); for `x < 0` it has a dead core on
/// `[0, -x]` and lifts off there. The defect is monotone across the whole
/// range, so bisection is reliable; a final secant step polishes the root.
fn shooting_fallback(problem: &BvpProblem) -> Result<BvpSolution, BvpError> {
    let eta = problem.boundary.eta();
    let t_end = problem.t_end;
    let phi_ext = ExtendedPhi::new(&problem.triple.phi, problem.gradient_ceiling);
    let p = problem.volume_factor.clone();
    let eps = 1e-18 * (1.0 + eta);
    let dirichlet = matches!(problem.boundary, BoundaryData::Dirichlet { .. });

    let shoot = |x: f64| -> (f64, f64, Vec<f64>, Vec<[f64; 2]>) {
        if x >= 0.0 {
            let (w0, z0) = if dirichlet {
                (0.0, (p)(0.0) * phi_ext.eval(x))
            } else {
                (x, 0.0)
            };
            let (wt, ts, states) = forward_march(problem, &phi_ext, 0.0, w0, z0);
            (wt - eta, 0.0, ts, states)
        } else {
            let t0 = (-x).min(t_end * (1.0 - 1e-9));
            let (w0, wp0) = liftoff_state(problem, t0, eps);
            let z0 = (p)(t0) * phi_ext.eval(wp0);
            let (wt, ts, states) = forward_march(problem, &phi_ext, t0, w0, z0);
            (wt - eta, t0, ts, states)
        }
    };

    // bracket: x = -T gives the zero function (defect -eta < 0); expand the
    // positive side until the defect changes sign
    let mut hi = if dirichlet { eta / t_end } else { eta };
    let mut d_hi = shoot(hi).0;
    let mut guard = 0;
    while d_hi < 0.0 && guard < 60 {
        hi *= 2.0;
        d_hi = shoot(hi).0;
        guard += 1;
    }
    if d_hi < 0.0 {
        return Err(BvpError::NoConvergence {
            detail: "shooting bracket expansion failed".into(),
        });
    }
    let mut lo = -t_end;
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
            break;
        }
        if shoot(mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // secant polish from the bisection bracket
    let (mut x0, mut x1) = (lo, hi);
    let mut d0 = shoot(x0).0;
    let d1 = shoot(x1).0;
    if (d1 - d0).abs() > 0.0 {
        let x2 = x1 - d1 * (x1 - x0) / (d1 - d0);
        if x2.is_finite() && x2 > lo - (hi - lo) && x2 < hi + (hi - lo) {
            let d2 = shoot(x2).0;
            if d2.abs() < d1.abs() {
                x0 = x1;
                d0 = d1;
                x1 = x2;
            }
        }
    }
    let _ = (x0, d0);
    let (defect, t0, ts, states) = shoot(x1);
    if defect.abs() > 1e-6 * (1.0 + eta) {
        return Err(BvpError::NoConvergence {
            detail: format!("shooting defect {defect:e} did not close"),
        });
    }

    // assemble the profile: exact plateau, then the marched branch
    let mut full_ts = Vec::new();
    let mut vals = Vec::new();
    let mut derivs = Vec::new();
    if t0 > 0.0 {
        let plateau_n = 32;
        for i in 0..plateau_n {
            let t = t0 * i as f64 / plateau_n as f64;
            full_ts.push(t);
            vals.push(0.0);
            derivs.push(0.0);
        }
    }
    for (i, &t) in ts.iter().enumerate() {
        if !full_ts.is_empty() && t <= *full_ts.last().unwrap() {
            continue;
        }
        full_ts.push(t);
        vals.push(states[i][0]);
        derivs.push(phi_ext.inverse(states[i][1] / (p)(t).max(1e-300)));
    }
    let origin_slope = derivs[0];
    let delta = (p)(0.0) * phi_ext.eval(origin_slope);
    Ok(BvpSolution {
        origin_slope: if t0 > 0.0 { 0.0 } else { origin_slope },
        plateau_radius: t0,
        delta: if t0 > 0.0 { 0.0 } else { delta },
        picard_iterations: 0,
        continuation_path: vec![f64::NAN],
        profile: RadialFunction::new(full_ts, vals, derivs),
    })
}

/// Classification thresholds (relative to the natural slope scale `eta/T`).
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// below this (after geometric decrease) the slope counts as zero
    pub zero_threshold: f64,
    /// above this across all levels the slope counts as positive
    pub positive_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            zero_threshold: 1e-3,
            positive_threshold: 1e-2,
        }
    }
}

/// Solves the Dirichlet problem at three grid resolutions (N, 2N, 4N) and
/// classifies `w'(0)` by its refinement trend.
pub fn classify_origin_slope(
    problem: &BvpProblem,
    options: ClassifyOptions,
) -> Result<OriginSlopeClass, BvpError> {
    let scale = problem.boundary.eta() / problem.t_end;
    let mut slopes = Vec::new();
    for level in 0..3 {
        let mut p = problem.clone();
        p.grid_n = problem.grid_n << level;
        let sol = solve_dirichlet(&p)?;
        slopes.push(sol.origin_slope / scale);
    }
    let finest = slopes[2];
    let trend = if slopes[0] > 0.0 { slopes[2] / slopes[0] } else { 0.0 };
    let non_increasing = slopes[2] <= slopes[1] * (1.0 + 1e-6) && slopes[1] <= slopes[0] * (1.0 + 1e-6);
    let all_small = slopes.iter().all(|&s| s < options.zero_threshold);
    if all_small || (finest < options.zero_threshold && non_increasing) {
        Ok(OriginSlopeClass::Zero)
    } else if slopes.iter().all(|&s| s >= options.positive_threshold) {
        Ok(OriginSlopeClass::Positive)
    } else {
        Ok(OriginSlopeClass::Undetermined {
            value: finest,
            trend,
        })
    }
}

/// Outcome of the maximal extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extension {
    /// the march reached `r_max` with healthy steps
    Infinite,
    /// blow-up at the given radius
    Finite(f64),
}

#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub extension: Extension,
    /// true when two refinement levels agreed within 1%
    pub stabilized: bool,
    /// the extended profile on the linear-scale range
    pub profile: RadialFunction,
}

/// Cap after which the linear-scale march hands over to the logarithmic one.
const BLOWUP_CAP: f64 = 1e12;

/// Extends a solved profile forward as far as `r_max`, marching the
/// first-order system `(w, z = p phi(w'))`.
///
/// Requires `p' >= 0` on the extension range. Blow-up is a result, not an
/// error: for power-law data the march continues in logarithmic variables
/// once `w` passes 1e12, so genuinely finite blow-up radii are separated
/// from grid-scale exponential growth; the reported radius is re-run at a
/// sharper tolerance and flagged `stabilized` when the two agree within 1%.
pub fn extend_maximal(
    solution: &BvpSolution,
    problem: &BvpProblem,
    r_max: f64,
) -> ExtensionResult {
    let run = |tol: f64| -> (Extension, RadialFunction) { extend_once(solution, problem, r_max, tol) };
    let (e1, _) = run(1e-9);
    let (e2, profile) = run(2.5e-10);
    let (extension, stabilized) = match (e1, e2) {
        (Extension::Infinite, Extension::Infinite) => (Extension::Infinite, true),
        (Extension::Finite(a), Extension::Finite(b)) => {
            (Extension::Finite(b), (a - b).abs() <= 0.01 * b.abs())
        }
        (_, e2) => (e2, false),
    };
    ExtensionResult {
        extension,
        stabilized,
        profile,
    }
}

fn extend_once(
    solution: &BvpSolution,
    problem: &BvpProblem,
    r_max: f64,
    tol: f64,
) -> (Extension, RadialFunction) {
    let t_end = problem.t_end;
    let phi_ext = ExtendedPhi::new(&problem.triple.phi, problem.gradient_ceiling);
    let p = problem.volume_factor.clone();
    let a = problem.weight_a.clone();
    let triple = &problem.triple;
    let w0 = solution.profile.eval(t_end);
    let z0 = (p)(t_end) * phi_ext.eval(solution.profile.eval_deriv(t_end));

    let march = ode::march_adaptive(
        |t, y: &[f64; 2]| {
            let pv = (p)(t).max(1e-300);
            let wp = phi_ext.inverse(y[1] / pv);
            [wp, pv * (a)(t) * triple.f_times_l(y[0].max(0.0), wp.abs())]
        },
        t_end,
        [w0, z0],
        r_max,
        tol,
        1e-12,
        |_, y| y[0] > BLOWUP_CAP,
    );
    let mut ts = march.ts.clone();
    let mut vals: Vec<f64> = march.states.iter().map(|s| s[0]).collect();
    let mut derivs: Vec<f64> = march
        .ts
        .iter()
        .zip(&march.states)
        .map(|(&t, s)| phi_ext.inverse(s[1] / (p)(t).max(1e-300)))
        .collect();
    // prepend the solved profile
    let mut full_ts = solution.profile.ts().to_vec();
    full_ts.pop();
    let mut full_vals = solution.profile.values().to_vec();
    full_vals.pop();
    let mut full_derivs = solution.profile.derivs().to_vec();
    full_derivs.pop();
    full_ts.append(&mut ts);
    full_vals.append(&mut vals);
    full_derivs.append(&mut derivs);
    let profile = RadialFunction::new(full_ts, full_vals, full_derivs);

    match march.stop {
        ode::StopReason::ReachedEnd => (Extension::Infinite, profile),
        ode::StopReason::StepCollapse | ode::StopReason::StateInvalid => {
            (Extension::Finite(*march.ts.last().unwrap()), profile)
        }
        ode::StopReason::Event => {
            // passed the cap: continue in logarithmic variables where the
            // family admits them, otherwise report the cap radius
            let t_cap = *march.ts.last().unwrap();
            let state = *march.states.last().unwrap();
            match log_march(problem, &phi_ext, t_cap, state, r_max, tol) {
                Some(ext) => (ext, profile),
                None => (Extension::Finite(t_cap), profile),
            }
        }
    }
}

/// Logarithmic continuation `(W, Z) = (log w, log z)` for power-law
/// families: exact for `phi = t^{p-1}` with power `f` and `l`, so the march
/// can follow super-exponential growth without overflow.
fn log_march(
    problem: &BvpProblem,
    _phi: &ExtendedPhi,
    t0: f64,
    state: [f64; 2],
    r_max: f64,
    tol: f64,
) -> Option<Extension> {
    use crate::nonlinearity::{GradientTerm, Nonlinearity};
    let p_exp = match problem.triple.phi {
        PhiFunction::PowerLaw { p } => p,
        _ => return None,
    };
    let omega = match problem.triple.f {
        Nonlinearity::Power { omega, threshold: 0.0 } => omega,
        _ => return None,
    };
    let l_exp = match problem.triple.l {
        GradientTerm::Constant { .. } => 0.0,
        GradientTerm::Power { exponent } => exponent,
        GradientTerm::PhiQuotient { chi } => p_exp - 1.0 - chi,
        GradientTerm::Custom { .. } => return None,
    };
    let pfun = problem.volume_factor.clone();
    let afun = problem.weight_a.clone();
    let y0 = [state[0].ln(), state[1].max(1e-300).ln()];
    let march = ode::march_adaptive(
        move |t, y: &[f64; 2]| {
            let lp = (pfun)(t).max(1e-300).ln();
            let la = (afun)(t).max(1e-300).ln();
            // log w' = (Z - log p)/(p-1)
            let lwp = (y[1] - lp) / (p_exp - 1.0);
            [
                (lwp - y[0]).exp(),
                (lp + la + omega * y[0] + l_exp * lwp - y[1]).exp(),
            ]
        },
        t0,
        y0,
        r_max,
        tol,
        1e-12,
        |_, _| false,
    );
    match march.stop {
        ode::StopReason::ReachedEnd => Some(Extension::Infinite),
        _ => Some(Extension::Finite(*march.ts.last().unwrap())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction};
    use crate::quad;

    fn linear_triple(omega: f64) -> Triple {
        // phi = t (p = 2), l = 1, so chi = 1
        Triple::new(
            PhiFunction::power_law(2.0),
            Nonlinearity::power(omega),
            GradientTerm::constant(1.0),
        )
    }

    #[test]
    fn dirichlet_without_f_is_linear() {
        // f = 0: [phi(w')]' = 0 with constant coefficients gives the ramp
        let triple = Triple::new(
            PhiFunction::power_law(2.0),
            Nonlinearity::power_above(1.0, 10.0), // vanishes on [0, 10]
            GradientTerm::constant(1.0),
        );
        let problem = BvpProblem::with_unit_coefficients(
            triple,
            1.0,
            BoundaryData::Dirichlet { eta: 1.0 },
            5.0,
        );
        let sol = solve_dirichlet(&problem).unwrap();
        for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
            assert!((v - t).abs() < 1e-9, "t = {t}: w = {v}");
        }
        assert!((sol.origin_slope - 1.0).abs() < 1e-9);
        // and the classifier reads the positive slope
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        assert_eq!(class, OriginSlopeClass::Positive);
    }

    #[test]
    fn mixed_without_f_is_constant() {
        // with f = 0 on the solution range the mixed operator fixes the
        // constant eta (the sigma = 0 stage of the continuation is the
        // zero function for the same reason)
        let triple = Triple::new(
            PhiFunction::power_law(2.0),
            Nonlinearity::power_above(1.0, 10.0),
            GradientTerm::constant(1.0),
        );
        let problem = BvpProblem::with_unit_coefficients(
            triple,
            1.0,
            BoundaryData::Mixed { eta: 1.0 },
            5.0,
        );
        let sol = solve_mixed(&problem).unwrap();
        for v in sol.profile.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert_eq!(sol.origin_slope, 0.0);
    }

    #[test]
    fn dirichlet_sinh_calibration() {
        // w'' = w: w = eta sinh(t)/sinh(T)
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Dirichlet { eta: 1.0 },
            5.0,
        );
        let sol = solve_dirichlet(&problem).unwrap();
        let mut sup = 0.0f64;
        for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
            sup = sup.max((v - t.sinh() / 1f64.sinh()).abs());
        }
        assert!(sup <= 1e-7, "sup error = {sup:e}");
        // w'(0) = eta/sinh(T)
        assert!((sol.origin_slope - 1.0 / 1f64.sinh()).abs() < 1e-7);
    }

    #[test]
    fn mixed_cosh_calibration() {
        // w'' = w with w'(0) = 0: w = eta cosh(t)/cosh(T)
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Mixed { eta: 1.0 },
            5.0,
        );
        let sol = solve_mixed(&problem).unwrap();
        let mut sup = 0.0f64;
        for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
            sup = sup.max((v - t.cosh() / 1f64.cosh()).abs());
        }
        assert!(sup <= 1e-7, "sup error = {sup:e}");
        assert_eq!(sol.origin_slope, 0.0);
        assert_eq!(sol.plateau_radius, 0.0);
    }

    #[test]
    fn solution_bounds_and_ceiling() {
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Dirichlet { eta: 1.0 },
            5.0,
        );
        let sol = solve_dirichlet(&problem).unwrap();
        for (v, d) in sol.profile.values().iter().zip(sol.profile.derivs()) {
            assert!((-1e-12..=1.0 + 1e-9).contains(v));
            assert!(*d >= -1e-12);
            assert!(*d < 5.0);
        }
    }

    #[test]
    fn integrated_equation_residual() {
        // p phi(w')(t) - p phi(w')(0) = int_0^t p a f(w) l(w'), re-checked
        // with an independent trapezoid quadrature on a resampled grid
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Dirichlet { eta: 1.0 },
            5.0,
        );
        let sol = solve_dirichlet(&problem).unwrap();
        let phi = &problem.triple.phi;
        let m = 4096;
        let mut acc = 0.0;
        let mut prev = 0.0;
        let scale = phi.eval(sol.profile.eval_deriv(1.0));
        for k in 1..=m {
            let t = k as f64 / m as f64;
            let f_here = problem.triple.f_times_l(sol.profile.eval(t), sol.profile.eval_deriv(t));
            acc += 0.5 * (f_here + prev) / m as f64;
            prev = f_here;
            let lhs = phi.eval(sol.profile.eval_deriv(t)) - phi.eval(sol.origin_slope);
            assert!(
                (lhs - acc).abs() <= 1e-7 * (1.0 + scale),
                "t = {t}: residual {}",
                lhs - acc
            );
        }
    }

    #[test]
    fn dirichlet_dead_core_class() {
        // omega = 1/2 < chi = 1: KO_0 holds and eta below the dead-core
        // separatrix forces w'(0) = 0. The separatrix solution of
        // [phi(w')]' = f(w) l(w') lifting off at t = 0 satisfies
        // K(w') = F(w), i.e. t(w) is the Keller-Osserman integral, giving
        // w_sep(T) = T^4/144 here (w = t^4/144 solves w'' = sqrt(w)).
        let separatrix_at_one = 1.0 / 144.0;
        let eta = 0.25 * separatrix_at_one;
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(0.5),
            1.0,
            BoundaryData::Dirichlet { eta },
            5.0,
        );
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        assert_eq!(class, OriginSlopeClass::Zero);
    }

    #[test]
    fn dirichlet_above_separatrix_is_positive() {
        // same triple, eta above the separatrix: w'(0) > 0 even though the
        // Keller-Osserman condition holds (the dichotomy needs small eta)
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(0.5),
            1.0,
            BoundaryData::Dirichlet { eta: 0.05 },
            5.0,
        );
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        assert_eq!(class, OriginSlopeClass::Positive);
    }

    #[test]
    fn dirichlet_positive_slope_class() {
        // omega = 2 > chi = 1: the Keller-Osserman condition fails at zero
        // and the slope stays positive
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(2.0),
            1.0,
            BoundaryData::Dirichlet { eta: 0.05 },
            5.0,
        );
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        assert_eq!(class, OriginSlopeClass::Positive);
    }

    #[test]
    fn mixed_plateau_dead_core() {
        // on a long interval with omega < chi the mixed solution has a
        // genuine plateau: w constant (at zero) on [0, t0]
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(0.5),
            6.0,
            BoundaryData::Mixed { eta: 0.5 },
            5.0,
        );
        let sol = solve_mixed(&problem).unwrap();
        assert!(sol.plateau_radius > 0.1, "t0 = {}", sol.plateau_radius);
        let w0 = sol.profile.values()[0];
        for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
            if *t <= sol.plateau_radius {
                assert!((v - w0).abs() <= 1e-9, "t = {t}");
            }
        }
    }

    #[test]
    fn mixed_with_degenerate_volume_factor() {
        // p(t) = t^2 with p(0) = 0: [t^2 w']' = t^2 w has the spherical
        // closed form w = eta (sinh(t)/t) / (sinh(T)/T)
        let problem = BvpProblem {
            triple: linear_triple(1.0),
            weight_a: std::sync::Arc::new(|_| 1.0),
            volume_factor: std::sync::Arc::new(|t: f64| t * t),
            t_end: 1.0,
            boundary: BoundaryData::Mixed { eta: 1.0 },
            gradient_ceiling: 5.0,
            grid_n: 512,
        };
        let sol = solve_mixed(&problem).unwrap();
        let norm = 1f64.sinh();
        let mut sup = 0.0f64;
        for (t, v) in sol.profile.ts().iter().zip(sol.profile.values()) {
            let exact = if *t == 0.0 { 1.0 / norm } else { t.sinh() / t / norm };
            sup = sup.max((v - exact).abs());
        }
        assert!(sup <= 1e-7, "sup error vs spherical closed form = {sup:e}");
        assert_eq!(sol.origin_slope, 0.0);
    }

    #[test]
    fn failed_ko_at_infinity_means_no_blowup() {
        // omega <= chi: the Keller-Osserman condition at infinity fails and
        // every extension reaches the horizon
        for omega in [0.5, 1.0] {
            let problem = BvpProblem::with_unit_coefficients(
                linear_triple(omega),
                1.0,
                BoundaryData::Mixed { eta: 1.0 },
                20.0,
            );
            let sol = solve_mixed(&problem).unwrap();
            let ext = extend_maximal(&sol, &problem, 50.0);
            assert_eq!(ext.extension, Extension::Infinite, "omega = {omega}");
        }
    }

    #[test]
    fn restriction_violated() {
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            0.05,
            BoundaryData::Dirichlet { eta: 10.0 },
            1.0,
        );
        assert!(matches!(
            solve(&problem),
            Err(BvpError::RestrictionViolated { .. })
        ));
    }

    #[test]
    fn extend_linear_growth_is_infinite() {
        // w'' = w grows exponentially: no finite blow-up radius
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Mixed { eta: 1.0 },
            5.0,
        );
        let sol = solve_mixed(&problem).unwrap();
        let ext = extend_maximal(&sol, &problem, 50.0);
        assert_eq!(ext.extension, Extension::Infinite);
        assert!(ext.stabilized);
    }

    #[test]
    fn extend_cubic_blowup_matches_energy_oracle() {
        // w'' = w^3: blow-up radius from the conserved energy
        // E = w'^2/2 - w^4/4, R = T + int_{w(T)}^inf dw/sqrt(2E + w^4/2)
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(3.0),
            1.0,
            BoundaryData::Mixed { eta: 1.0 },
            20.0,
        );
        let sol = solve_mixed(&problem).unwrap();
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
            .expect("energy integral converges");
        let ext = extend_maximal(&sol, &problem, 50.0);
        match ext.extension {
            Extension::Finite(r) => {
                assert!(
                    (r - oracle).abs() <= 0.01 * oracle,
                    "r = {r}, oracle = {oracle}"
                );
                assert!(ext.stabilized);
            }
            Extension::Infinite => panic!("w'' = w^3 must blow up"),
        }
    }

    #[test]
    fn shooting_fallback_agrees_with_picard() {
        let problem = BvpProblem::with_unit_coefficients(
            linear_triple(1.0),
            1.0,
            BoundaryData::Dirichlet { eta: 1.0 },
            5.0,
        );
        let picard = solve_dirichlet(&problem).unwrap();
        let shot = shooting_fallback(&problem).unwrap();
        assert!((picard.origin_slope - shot.origin_slope).abs() < 1e-6);
        for &t in &[0.25, 0.5, 0.9] {
            assert!((picard.profile.eval(t) - shot.profile.eval(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn separatrix_matches_closed_form() {
        // phi = t, l = 1, f = sqrt(w): the liftoff solution is t^4/144
        let triple = linear_triple(0.5);
        let sep = dead_core_separatrix(&triple, 1.0).expect("KO_0 holds");
        assert!((sep - 1.0 / 144.0).abs() < 1e-6, "sep = {sep}");
        // omega >= chi: the Keller-Osserman integral diverges, no dead core
        assert!(dead_core_separatrix(&linear_triple(2.0), 1.0).is_none());
    }

    #[test]
    fn singular_gradient_factor_dead_core() {
        // p = 1.5, chi = 1: l = phi/t^chi = t^{-1/2} is singular at zero;
        // the dichotomy must still see omega = 1/2 < chi = 1 as a dead core
        let triple = Triple::power_family(1.5, 1.0, 0.5);
        let eta = 0.25 * dead_core_separatrix(&triple, 0.25).unwrap();
        let mut problem = BvpProblem::with_unit_coefficients(
            triple,
            0.25,
            BoundaryData::Dirichlet { eta },
            100.0,
        );
        problem.grid_n = 256;
        let class = classify_origin_slope(&problem, ClassifyOptions::default()).unwrap();
        assert_eq!(class, OriginSlopeClass::Zero);
    }
}
