//! The structural functions of the inequality `Delta_phi u >= b f(u) l(|grad u|)`:
//! the operator profile `phi`, the gradient factor `l`, the zero-order term
//! `f` and the radial weight, together with the derived kernels
//!
//! ```text
//! K(t) = int_0^t s phi'(s)/l(s) ds      (standard kind)
//! K(t) = int_0^t phi(s)/l(s) ds          (mean curvature variant)
//! F(t) = int_{eta}^t f(s) ds
//! ```
//!
//! and the sampled checkers for the structural conditions used by the
//! supersolution constructions.

use std::sync::Arc;

use crate::error::NonlinearityError;
use crate::quad;
use crate::root::{self, MonotoneTable};
use crate::verdict::{ConditionReport, Verdict};

pub type DynFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Central finite difference used when a custom function comes without a
/// derivative. Step per the documented fallback: `1e-6 * max(1, t)`.
fn central_diff(f: &DynFn, t: f64) -> f64 {
    let h = 1e-6 * t.abs().max(1.0);
    ((f)(t + h) - (f)(t - h)) / (2.0 * h)
}

// ---------------------------------------------------------------------------
// phi
// ---------------------------------------------------------------------------

/// The operator profile `phi`: continuous on `[0, inf)`, `phi(0) = 0`,
/// positive and strictly increasing on the positive axis.
#[derive(Clone)]
pub enum PhiFunction {
    /// `phi(t) = t^{p-1}` (the p-Laplace operator), `p > 1`.
    PowerLaw { p: f64 },
    /// `phi(t) = t / sqrt(1 + t^2)` (the mean curvature operator).
    MeanCurvature,
    /// `phi(t) = t exp(t^2)` (exponentially harmonic functions).
    ExpHarmonic,
    /// `phi(t) = t^{p-1} + t^{q-1}` with `1 < q < p`.
    PowerSum { p: f64, q: f64 },
    /// `phi(t) = t^{p-1} / (1+t)^{q-1}` with `p > 1`, `1 <= q <= p`.
    RationalPower { p: f64, q: f64 },
    Custom {
        eval: DynFn,
        deriv: Option<DynFn>,
        /// hint for the growth exponent of phi near zero
        zero_exponent: Option<f64>,
        /// hint for the growth exponent of phi near infinity
        infinity_exponent: Option<f64>,
    },
}

impl std::fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiFunction::PowerLaw { p } => write!(f, "PowerLaw(p={p})"),
            PhiFunction::MeanCurvature => write!(f, "MeanCurvature"),
            PhiFunction::ExpHarmonic => write!(f, "ExpHarmonic"),
            PhiFunction::PowerSum { p, q } => write!(f, "PowerSum(p={p}, q={q})"),
            PhiFunction::RationalPower { p, q } => write!(f, "RationalPower(p={p}, q={q})"),
            PhiFunction::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl PhiFunction {
    pub fn power_law(p: f64) -> Self {
        assert!(p > 1.0, "power law needs p > 1");
        PhiFunction::PowerLaw { p }
    }

    pub fn power_sum(p: f64, q: f64) -> Self {
        assert!(1.0 < q && q < p, "power sum needs 1 < q < p");
        PhiFunction::PowerSum { p, q }
    }

    pub fn rational_power(p: f64, q: f64) -> Self {
        assert!(p > 1.0 && (1.0..=p).contains(&q), "rational power needs p > 1, 1 <= q <= p");
        PhiFunction::RationalPower { p, q }
    }

    /// Validates the structural invariants by sampling on a log grid.
    pub fn validate(&self) -> Result<(), NonlinearityError> {
        let grid = root::log_grid(1e-9, 1e9, 8);
        let mut prev = 0.0;
        for &t in &grid {
            let v = self.eval(t);
            if v.is_nan() || v <= 0.0 {
                return Err(NonlinearityError::NotIncreasing { at: t });
            }
            if v < prev {
                return Err(NonlinearityError::NotIncreasing { at: t });
            }
            prev = v;
        }
        Ok(())
    }

    /// `phi(t)` for `t >= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match self {
            PhiFunction::PowerLaw { p } => t.powf(p - 1.0),
            PhiFunction::MeanCurvature => t / (1.0 + t * t).sqrt(),
            PhiFunction::ExpHarmonic => t * (t * t).exp(),
            PhiFunction::PowerSum { p, q } => t.powf(p - 1.0) + t.powf(q - 1.0),
            PhiFunction::RationalPower { p, q } => t.powf(p - 1.0) / (1.0 + t).powf(q - 1.0),
            PhiFunction::Custom { eval, .. } => (eval)(t),
        }
    }

    /// Odd extension `phi(-t) = -phi(t)`, used by the boundary value solvers.
    pub fn eval_odd(&self, t: f64) -> f64 {
        if t >= 0.0 {
            self.eval(t)
        } else {
            -self.eval(-t)
        }
    }

    /// `phi'(t)` for `t > 0`.
    pub fn deriv(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match self {
            PhiFunction::PowerLaw { p } => (p - 1.0) * t.powf(p - 2.0),
            PhiFunction::MeanCurvature => (1.0 + t * t).powf(-1.5),
            PhiFunction::ExpHarmonic => (1.0 + 2.0 * t * t) * (t * t).exp(),
            PhiFunction::PowerSum { p, q } => {
                (p - 1.0) * t.powf(p - 2.0) + (q - 1.0) * t.powf(q - 2.0)
            }
            PhiFunction::RationalPower { p, q } => {
                // phi' = t^{p-2} (1+t)^{-q} [(p-1) + (p-q) t]
                t.powf(p - 2.0) * (1.0 + t).powf(-q) * ((p - 1.0) + (p - q) * t)
            }
            PhiFunction::Custom { eval, deriv, .. } => match deriv {
                Some(d) => (d)(t),
                None => central_diff(eval, t),
            },
        }
    }

    /// `phi(inf) = lim phi(t)`, finite for saturating operators.
    pub fn sup(&self) -> f64 {
        match self {
            PhiFunction::PowerLaw { .. } | PhiFunction::ExpHarmonic | PhiFunction::PowerSum { .. } => {
                f64::INFINITY
            }
            PhiFunction::MeanCurvature => 1.0,
            PhiFunction::RationalPower { p, q } => {
                if q < p {
                    f64::INFINITY
                } else {
                    1.0 // q = p: (t/(1+t))^{p-1} -> 1
                }
            }
            PhiFunction::Custom {
                infinity_exponent, ..
            } => match infinity_exponent {
                Some(e) if *e <= 0.0 => self.eval(1e16),
                _ => f64::INFINITY,
            },
        }
    }

    /// Growth exponent of phi near `t = 0` (used by quadrature preconditions).
    pub fn zero_exponent(&self) -> f64 {
        match self {
            PhiFunction::PowerLaw { p } => p - 1.0,
            PhiFunction::MeanCurvature | PhiFunction::ExpHarmonic => 1.0,
            PhiFunction::PowerSum { q, .. } => q - 1.0,
            PhiFunction::RationalPower { p, .. } => p - 1.0,
            PhiFunction::Custom { zero_exponent, eval, .. } => zero_exponent.unwrap_or_else(|| {
                quad::local_exponent(&|t| (eval)(t), 1e-4, true).unwrap_or(1.0)
            }),
        }
    }

    /// `phi^{-1}(y)` for `0 <= y < phi(inf)`, monotone in `y`.
    pub fn inverse(&self, y: f64) -> Result<f64, NonlinearityError> {
        if y < 0.0 {
            return Err(NonlinearityError::OutOfRange { target: y, sup: self.sup() });
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        match self {
            PhiFunction::PowerLaw { p } => Ok(y.powf(1.0 / (p - 1.0))),
            PhiFunction::MeanCurvature => {
                if y >= 1.0 {
                    return Err(NonlinearityError::OutOfRange { target: y, sup: 1.0 });
                }
                Ok(y / (1.0 - y * y).sqrt())
            }
            _ => {
                let sup = self.sup();
                if y >= sup {
                    return Err(NonlinearityError::OutOfRange { target: y, sup });
                }
                // bracket [lo, hi] with phi(hi) > y
                let mut hi = 1.0;
                let mut lo = 0.0;
                for _ in 0..2000 {
                    if self.eval(hi) > y {
                        break;
                    }
                    lo = hi;
                    hi *= 2.0;
                }
                let t = root::bisect_increasing(
                    |t| self.eval(t),
                    lo,
                    hi,
                    y,
                    1e-15 * hi.max(1.0),
                );
                Ok(t)
            }
        }
    }

    /// Odd-extension inverse: `phi^{-1}(-y) = -phi^{-1}(y)`.
    pub fn inverse_odd(&self, y: f64) -> Result<f64, NonlinearityError> {
        if y >= 0.0 {
            self.inverse(y)
        } else {
            Ok(-self.inverse(-y)?)
        }
    }
}

// ---------------------------------------------------------------------------
// l
// ---------------------------------------------------------------------------

/// The gradient factor `l`: positive on the positive axis. `PhiQuotient` may
/// be singular at zero, which downstream code must treat explicitly.
#[derive(Clone)]
pub enum GradientTerm {
    Constant { c: f64 },
    /// `l(t) = t^e`, `e >= 0`.
    Power { exponent: f64 },
    /// `l(t) = phi(t) / t^chi`, `chi >= 0`.
    PhiQuotient { chi: f64 },
    Custom { eval: DynFn },
}

impl std::fmt::Debug for GradientTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GradientTerm::Constant { c } => write!(f, "Constant({c})"),
            GradientTerm::Power { exponent } => write!(f, "Power({exponent})"),
            GradientTerm::PhiQuotient { chi } => write!(f, "PhiQuotient(chi={chi})"),
            GradientTerm::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl GradientTerm {
    pub fn constant(c: f64) -> Self {
        assert!(c > 0.0);
        GradientTerm::Constant { c }
    }

    pub fn power(exponent: f64) -> Self {
        assert!(exponent >= 0.0, "Power gradient terms need exponent >= 0");
        GradientTerm::Power { exponent }
    }

    pub fn phi_quotient(chi: f64) -> Self {
        assert!(chi >= 0.0);
        GradientTerm::PhiQuotient { chi }
    }

    pub fn eval(&self, phi: &PhiFunction, t: f64) -> f64 {
        match self {
            GradientTerm::Constant { c } => *c,
            GradientTerm::Power { exponent } => t.powf(*exponent),
            GradientTerm::PhiQuotient { chi } => {
                if t == 0.0 {
                    // limit value; may be +inf for chi above the phi exponent
                    let e = phi.zero_exponent() - chi;
                    return if e > 0.0 {
                        0.0
                    } else if e == 0.0 {
                        self.eval(phi, 1e-12)
                    } else {
                        f64::INFINITY
                    };
                }
                phi.eval(t) / t.powf(*chi)
            }
            GradientTerm::Custom { eval } => (eval)(t),
        }
    }

    /// Growth exponent of `l` near zero.
    pub fn zero_exponent(&self, phi: &PhiFunction) -> f64 {
        match self {
            GradientTerm::Constant { .. } => 0.0,
            GradientTerm::Power { exponent } => *exponent,
            GradientTerm::PhiQuotient { chi } => phi.zero_exponent() - chi,
            GradientTerm::Custom { eval } => {
                quad::local_exponent(&|t| (eval)(t), 1e-4, true).unwrap_or(0.0)
            }
        }
    }

    /// True when `l(0+) = +inf` (flagged rather than rejected).
    pub fn singular_at_zero(&self, phi: &PhiFunction) -> bool {
        self.zero_exponent(phi) < 0.0
    }
}

// ---------------------------------------------------------------------------
// f
// ---------------------------------------------------------------------------

/// The zero-order nonlinearity `f`.
#[derive(Clone)]
pub enum Nonlinearity {
    /// `f(t) = max(t - threshold, 0)^omega`; the threshold doubles as the
    /// lower integration limit of `F` when positive.
    Power { omega: f64, threshold: f64 },
    /// `f(t) = e^{2t} - 1`.
    Exp2m1,
    Custom { eval: DynFn },
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nonlinearity::Power { omega, threshold } => {
                write!(f, "Power(omega={omega}, threshold={threshold})")
            }
            Nonlinearity::Exp2m1 => write!(f, "Exp2m1"),
            Nonlinearity::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl Nonlinearity {
    pub fn power(omega: f64) -> Self {
        assert!(omega >= 0.0);
        Nonlinearity::Power { omega, threshold: 0.0 }
    }

    pub fn power_above(omega: f64, threshold: f64) -> Self {
        assert!(omega >= 0.0 && threshold >= 0.0);
        Nonlinearity::Power { omega, threshold }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Nonlinearity::Power { omega, threshold } => {
                let s = t - threshold;
                if s <= 0.0 {
                    0.0
                } else {
                    s.powf(*omega)
                }
            }
            Nonlinearity::Exp2m1 => (2.0 * t).exp() - 1.0,
            Nonlinearity::Custom { eval } => (eval)(t),
        }
    }

    /// `log f(e^w)` where representable in closed form; used by the blow-up
    /// march once the solution leaves the f64 range.
    pub fn log_eval_exp(&self, w: f64) -> Option<f64> {
        match self {
            Nonlinearity::Power { omega, threshold } if *threshold == 0.0 => Some(omega * w),
            _ => None,
        }
    }

    /// Lower integration limit of `F`.
    pub fn f_lower_limit(&self) -> f64 {
        match self {
            Nonlinearity::Power { threshold, .. } => *threshold,
            _ => 0.0,
        }
    }

    /// `F(t) = int_{lower}^t f`, by closed form where available, else by
    /// adaptive quadrature (relative error 1e-9).
    pub fn big_f(&self, t: f64) -> f64 {
        let lower = self.f_lower_limit();
        if t <= lower {
            return 0.0;
        }
        match self {
            Nonlinearity::Power { omega, threshold } => {
                (t - threshold).powf(omega + 1.0) / (omega + 1.0)
            }
            Nonlinearity::Exp2m1 => ((2.0 * t).exp() - 1.0) / 2.0 - t,
            Nonlinearity::Custom { eval } => {
                quad::integrate(|s| (eval)(s), lower, t, 1e-9)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// weight
// ---------------------------------------------------------------------------

/// Radial weight profile (used both for the lower bound `beta` on `b` and
/// the auxiliary decreasing weight).
#[derive(Clone)]
pub enum WeightProfile {
    /// `beta(t) = scale * (1 + t)^{-mu}`.
    PowerDecay { mu: f64, scale: f64 },
    Custom { eval: DynFn, deriv: Option<DynFn> },
}

impl std::fmt::Debug for WeightProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightProfile::PowerDecay { mu, scale } => write!(f, "PowerDecay(mu={mu}, scale={scale})"),
            WeightProfile::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl WeightProfile {
    pub fn power_decay(mu: f64, scale: f64) -> Self {
        assert!(scale > 0.0);
        WeightProfile::PowerDecay { mu, scale }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightProfile::PowerDecay { mu, scale } => scale * (1.0 + t).powf(-mu),
            WeightProfile::Custom { eval, .. } => (eval)(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            WeightProfile::PowerDecay { mu, scale } => -mu * scale * (1.0 + t).powf(-mu - 1.0),
            WeightProfile::Custom { eval, deriv } => match deriv {
                Some(d) => (d)(t),
                None => central_diff(eval, t),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// the triple and its kernels
// ---------------------------------------------------------------------------

/// Which kernel integrand to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `K' = t phi'/l`
    Standard,
    /// `K' = phi/l`, for saturating (mean curvature type) operators
    MeanCurvatureVariant,
}

/// The structural core `(phi, f, l)` of the inequality.
#[derive(Debug, Clone)]
pub struct Triple {
    pub phi: PhiFunction,
    pub f: Nonlinearity,
    pub l: GradientTerm,
}

/// Exact power representation `K(t) = coeff * t^exponent`.
#[derive(Debug, Clone, Copy)]
pub struct PowerKernel {
    pub coeff: f64,
    pub exponent: f64,
}

impl Triple {
    pub fn new(phi: PhiFunction, f: Nonlinearity, l: GradientTerm) -> Self {
        Self { phi, f, l }
    }

    /// The p-Laplacian power family `phi = t^{p-1}`, `l = t^{p-1-chi}`,
    /// `f = t^omega` used throughout the examples and sweeps.
    pub fn power_family(p: f64, chi: f64, omega: f64) -> Self {
        assert!(p > 1.0 && chi >= 0.0);
        Self {
            phi: PhiFunction::power_law(p),
            f: Nonlinearity::power(omega),
            l: GradientTerm::PhiQuotient { chi },
        }
    }

    pub fn l_eval(&self, t: f64) -> f64 {
        self.l.eval(&self.phi, t)
    }

    /// `f(w) l(s)` with the dead-core convention: the product is zero
    /// whenever `f(w) = 0`, even against a singular `l`.
    pub fn f_times_l(&self, w: f64, s: f64) -> f64 {
        let fv = self.f.eval(w);
        if fv == 0.0 {
            return 0.0;
        }
        fv * self.l_eval(s)
    }

    /// Kernel integrand of the requested kind.
    pub fn kernel_integrand(&self, kind: KernelKind, s: f64) -> f64 {
        match kind {
            KernelKind::Standard => s * self.phi.deriv(s) / self.l_eval(s),
            KernelKind::MeanCurvatureVariant => self.phi.eval(s) / self.l_eval(s),
        }
    }

    /// Exact power form of the kernel, when the family admits one.
    pub fn kernel_power_form(&self, kind: KernelKind) -> Option<PowerKernel> {
        let phi_pow: Option<(f64, f64)> = match self.phi {
            // phi = t^{p-1}: coefficient 1, exponent p-1
            PhiFunction::PowerLaw { p } => Some((1.0, p - 1.0)),
            _ => None,
        };
        let l_pow: Option<(f64, f64)> = match (&self.l, &self.phi) {
            (GradientTerm::Constant { c }, _) => Some((*c, 0.0)),
            (GradientTerm::Power { exponent }, _) => Some((1.0, *exponent)),
            (GradientTerm::PhiQuotient { chi }, PhiFunction::PowerLaw { p }) => {
                Some((1.0, p - 1.0 - chi))
            }
            _ => None,
        };
        match kind {
            KernelKind::Standard => {
                let (pc, pe) = phi_pow?;
                let (lc, le) = l_pow?;
                // integrand: s * pc*pe*s^{pe-1} / (lc s^{le}) = (pc pe/lc) s^{pe-le}
                let exp = pe - le + 1.0;
                if exp <= 0.0 {
                    return None;
                }
                Some(PowerKernel {
                    coeff: pc * pe / (lc * exp),
                    exponent: exp,
                })
            }
            KernelKind::MeanCurvatureVariant => match (&self.l, &self.phi) {
                // phi/l = t^chi exactly, for any phi
                (GradientTerm::PhiQuotient { chi }, _) => Some(PowerKernel {
                    coeff: 1.0 / (chi + 1.0),
                    exponent: chi + 1.0,
                }),
                _ => {
                    let (pc, pe) = phi_pow?;
                    let (lc, le) = l_pow?;
                    let exp = pe - le + 1.0;
                    if exp <= 0.0 {
                        return None;
                    }
                    Some(PowerKernel {
                        coeff: pc / (lc * exp),
                        exponent: exp,
                    })
                }
            },
        }
    }

    /// `K(t)` of the requested kind by closed form or adaptive quadrature
    /// (relative error 1e-9 target).
    pub fn kernel_eval(&self, kind: KernelKind, t: f64) -> Result<f64, NonlinearityError> {
        if t == 0.0 {
            return Ok(0.0);
        }
        assert!(t > 0.0);
        if let Some(pk) = self.kernel_power_form(kind) {
            return Ok(pk.coeff * t.powf(pk.exponent));
        }
        let integrand = |s: f64| self.kernel_integrand(kind, s);
        // precondition: integrable at zero
        let exp0 = match kind {
            KernelKind::Standard => 1.0 + (self.phi.zero_exponent() - 1.0) - self.l.zero_exponent(&self.phi),
            KernelKind::MeanCurvatureVariant => self.phi.zero_exponent() - self.l.zero_exponent(&self.phi),
        };
        if exp0 <= -1.0 {
            return Err(NonlinearityError::NotIntegrableAtZero { exponent: exp0 });
        }
        quad::integrate_from_zero(integrand, t, 1e-10)
            .ok_or(NonlinearityError::NotIntegrableAtZero { exponent: exp0 })
    }

    /// `K(inf)`: finite value or infinity.
    pub fn kernel_sup(&self, kind: KernelKind) -> Result<f64, NonlinearityError> {
        if self.kernel_power_form(kind).is_some() {
            return Ok(f64::INFINITY);
        }
        let k1 = self.kernel_eval(kind, 1.0)?;
        match quad::integrate_to_infinity(|s| self.kernel_integrand(kind, s), 1.0, 1e-8) {
            quad::Tail::Finite(tail) => Ok(k1 + tail),
            quad::Tail::Divergent => Ok(f64::INFINITY),
        }
    }

    /// Builds the sampled kernel table over `[t_min, t_max]`.
    pub fn kernel_table(
        &self,
        kind: KernelKind,
        t_min: f64,
        t_max: f64,
        per_decade: usize,
    ) -> Result<KernelTable, NonlinearityError> {
        KernelTable::build(self, kind, t_min, t_max, per_decade)
    }
}

/// Monotone sampled kernel `K` with its inverse.
///
/// Interpolation is linear in log-log coordinates, which is exact for power
/// kernels and accurate for the power-like kernels the constructions use.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub kind: KernelKind,
    log_table: MonotoneTable,
    /// Exact representation when the family is a pure power.
    power: Option<PowerKernel>,
    k_sup: f64,
}

impl KernelTable {
    fn build(
        triple: &Triple,
        kind: KernelKind,
        t_min: f64,
        t_max: f64,
        per_decade: usize,
    ) -> Result<Self, NonlinearityError> {
        assert!(t_min > 0.0 && t_max > t_min);
        let power = triple.kernel_power_form(kind);
        let ts = root::log_grid(t_min, t_max, per_decade);
        let mut ks = Vec::with_capacity(ts.len());
        if let Some(pk) = power {
            for &t in &ts {
                ks.push(pk.coeff * t.powf(pk.exponent));
            }
        } else {
            let mut acc = triple.kernel_eval(kind, ts[0])?;
            ks.push(acc);
            for i in 1..ts.len() {
                acc += quad::integrate(
                    |s| triple.kernel_integrand(kind, s),
                    ts[i - 1],
                    ts[i],
                    1e-11,
                );
                ks.push(acc);
            }
        }
        let k_sup = triple.kernel_sup(kind)?;
        let log_ts: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let log_ks: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
        Ok(Self {
            kind,
            log_table: MonotoneTable::new(log_ts, log_ks),
            power,
            k_sup,
        })
    }

    pub fn k_sup(&self) -> f64 {
        self.k_sup
    }

    pub fn t_max(&self) -> f64 {
        self.log_table.x_max().exp()
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if let Some(pk) = self.power {
            return pk.coeff * t.powf(pk.exponent);
        }
        self.log_table.eval(t.ln()).exp()
    }

    /// `K^{-1}(y)`; clamps to the table range for out-of-range queries below
    /// `K(inf)`.
    pub fn eval_inv(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if let Some(pk) = self.power {
            return (y / pk.coeff).powf(1.0 / pk.exponent);
        }
        self.log_table.eval_inv(y.ln()).exp()
    }
}

// ---------------------------------------------------------------------------
// structural conditions
// ---------------------------------------------------------------------------

/// Identifier of a structural condition checked by [`check_condition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionId {
    /// `t K'(t) <= k1 K(t)` near zero.
    C1,
    /// `K'(st) <= k2 K'(s) K'(t)` for `s, t` in `(0, 1]`.
    C2,
    /// The submultiplicativity pair for phi' and l (`C2` primed).
    C2Prime,
    /// `t / K^{-1}(t)` is C-increasing and tends to zero at zero.
    C3,
    /// `F(t)/K^{-1}(F(t)) <= c_F f(t)` near zero.
    C4,
    /// Weight positivity and monotonicity.
    Beta1,
    /// `-beta'(t) <= c_beta K^{-1}(beta(t)) beta(t)`.
    Beta2,
    /// `limsup -t beta'(t)/beta(t) > 0`.
    Beta3,
    /// `phi'(t) t^{1-chi1} / l(t)` is C-increasing on the positive axis.
    Chi1 { chi1: f64 },
    /// `phi(t) t^{-chi2} / l(t)` is C-increasing on the positive axis.
    Chi2 { chi2: f64 },
    /// Generic C-increasing check for `f`.
    CIncreasingF,
    /// Generic C-increasing check for `l`.
    CIncreasingL,
}

impl ConditionId {
    pub fn parse(s: &str) -> Result<Self, NonlinearityError> {
        Ok(match s {
            "C1" => ConditionId::C1,
            "C2" => ConditionId::C2,
            "C2'" => ConditionId::C2Prime,
            "C3" => ConditionId::C3,
            "C4" => ConditionId::C4,
            "beta1" => ConditionId::Beta1,
            "beta2" => ConditionId::Beta2,
            "beta3" => ConditionId::Beta3,
            "C-increasing-f" => ConditionId::CIncreasingF,
            "C-increasing-l" => ConditionId::CIncreasingL,
            other => {
                if let Some(v) = other.strip_prefix("chi1=") {
                    ConditionId::Chi1 {
                        chi1: v.parse().map_err(|_| {
                            NonlinearityError::UnknownCondition(other.to_string())
                        })?,
                    }
                } else if let Some(v) = other.strip_prefix("chi2=") {
                    ConditionId::Chi2 {
                        chi2: v.parse().map_err(|_| {
                            NonlinearityError::UnknownCondition(other.to_string())
                        })?,
                    }
                } else {
                    return Err(NonlinearityError::UnknownCondition(other.to_string()));
                }
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            ConditionId::C1 => "C1".into(),
            ConditionId::C2 => "C2".into(),
            ConditionId::C2Prime => "C2'".into(),
            ConditionId::C3 => "C3".into(),
            ConditionId::C4 => "C4".into(),
            ConditionId::Beta1 => "beta1".into(),
            ConditionId::Beta2 => "beta2".into(),
            ConditionId::Beta3 => "beta3".into(),
            ConditionId::Chi1 { chi1 } => format!("chi1={chi1}"),
            ConditionId::Chi2 { chi2 } => format!("chi2={chi2}"),
            ConditionId::CIncreasingF => "C-increasing-f".into(),
            ConditionId::CIncreasingL => "C-increasing-l".into(),
        }
    }
}

/// Domain of a condition sweep.
#[derive(Debug, Clone, Copy)]
pub struct DomainInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DomainInterval {
    pub const NEAR_ZERO: DomainInterval = DomainInterval { lo: 1e-12, hi: 1.0 };
    pub const NEAR_INFINITY: DomainInterval = DomainInterval { lo: 1.0, hi: 1e8 };
}

const POINTS_PER_DECADE: usize = 1000;

/// Which ends of the sweep domain are asymptotic (non-compact), so that
/// growth of the sampled supremum there means the condition cannot be
/// certified rather than that a finite maximum was found.
#[derive(Debug, Clone, Copy)]
struct SweepEnds {
    lo: bool,
    hi: bool,
}

const TOWARD_ZERO: SweepEnds = SweepEnds { lo: true, hi: false };
const TOWARD_INFINITY: SweepEnds = SweepEnds { lo: false, hi: true };
const BOTH_ENDS: SweepEnds = SweepEnds { lo: true, hi: true };

/// For the generic C-increasing checks the asymptotic ends follow from the
/// interval the caller asked about.
fn ends_from_domain(dom: DomainInterval) -> SweepEnds {
    SweepEnds {
        lo: dom.lo <= 1e-6,
        hi: dom.hi >= 1e4,
    }
}

/// Sampled-sup over a log grid with a stabilization test: the verdict is
/// `Inconclusive` when the per-decade suprema keep growing toward an
/// asymptotic end of the domain instead of settling.
fn stabilized_sup(samples: &[(f64, f64)], ends: SweepEnds) -> (f64, Verdict) {
    // group by decade
    let lo = samples[0].0;
    let mut per_decade: Vec<f64> = Vec::new();
    for &(x, v) in samples {
        let d = ((x / lo).log10().floor().max(0.0)) as usize;
        if per_decade.len() <= d {
            per_decade.resize(d + 1, f64::NEG_INFINITY);
        }
        per_decade[d] = per_decade[d].max(v);
    }
    per_decade.retain(|v| v.is_finite());
    let sup = per_decade.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if per_decade.len() < 3 {
        return (sup, Verdict::Inconclusive);
    }
    let n = per_decade.len();
    let growing_at = |a: usize, b: usize, c: usize| -> bool {
        // decades a, b, c ordered away from the boundary under test
        per_decade[a] > per_decade[b] * (1.0 + 1e-3)
            && per_decade[b] > per_decade[c] * (1.0 + 1e-3)
            && per_decade[a] >= sup * (1.0 - 1e-9)
    };
    let bad_lo = ends.lo && growing_at(0, 1, 2);
    let bad_hi = ends.hi && growing_at(n - 1, n - 2, n - 3);
    if bad_lo || bad_hi {
        (sup, Verdict::Inconclusive)
    } else {
        (sup, Verdict::Holds)
    }
}

/// C-increasing constant of `h` on the sampled grid: the best `C` with
/// `sup_{s <= t} h(s) <= C h(t)`.
fn c_increasing_samples(grid: &[f64], h: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut run_max = f64::NEG_INFINITY;
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        let v = h(t);
        run_max = run_max.max(v);
        out.push((t, run_max / v));
    }
    out
}

/// Checks one structural condition by sampled supremum over a log grid
/// (1000 points per decade; 2D conditions use 40 per decade per axis).
pub fn check_condition(
    id: ConditionId,
    triple: &Triple,
    weight: Option<&WeightProfile>,
    domain: Option<DomainInterval>,
) -> Result<ConditionReport, NonlinearityError> {
    let near_zero = matches!(
        id,
        ConditionId::C1 | ConditionId::C2 | ConditionId::C2Prime | ConditionId::C3 | ConditionId::C4
            | ConditionId::CIncreasingF
            | ConditionId::CIncreasingL
    );
    let dom = domain.unwrap_or(if near_zero {
        DomainInterval::NEAR_ZERO
    } else {
        DomainInterval::NEAR_INFINITY
    });
    let grid = root::log_grid(dom.lo, dom.hi, POINTS_PER_DECADE);
    // The table must cover K^{-1} of values as small as the weight decays,
    // hence the generous lower end.
    let table = triple.kernel_table(KernelKind::Standard, 1e-14, dom.hi.max(1.0) * 1e2, 100)?;
    let kprime = |t: f64| t * triple.phi.deriv(t) / triple.l_eval(t);

    let report = |verdict: Verdict, constant: f64| ConditionReport {
        condition: id.name(),
        verdict,
        constant,
    };

    match id {
        ConditionId::C1 => {
            let samples: Vec<(f64, f64)> = grid
                .iter()
                .filter(|&&t| t <= 1.0)
                .map(|&t| (t, kprime(t) * t / table.eval(t)))
                .collect();
            let (sup, verdict) = stabilized_sup(&samples, TOWARD_ZERO);
            Ok(report(verdict, sup))
        }
        ConditionId::C2 => {
            let coarse = root::log_grid(dom.lo.max(1e-8), 1.0, 40);
            let mut sup = f64::NEG_INFINITY;
            for &s in &coarse {
                let ks = kprime(s);
                for &t in &coarse {
                    let ratio = kprime(s * t) / (ks * kprime(t));
                    sup = sup.max(ratio);
                }
            }
            // growth probe: does the sup persist when the grid extends a
            // decade lower?
            let finer_lo = dom.lo.max(1e-8) * 0.1;
            let probe = root::log_grid(finer_lo, finer_lo * 10.0, 10);
            let mut probe_sup = f64::NEG_INFINITY;
            for &s in &probe {
                let ks = kprime(s);
                for &t in &coarse {
                    probe_sup = probe_sup.max(kprime(s * t) / (ks * kprime(t)));
                }
            }
            let verdict = if probe_sup > sup * (1.0 + 1e-2) {
                Verdict::Inconclusive
            } else {
                Verdict::Holds
            };
            Ok(report(verdict, sup.max(probe_sup)))
        }
        ConditionId::C2Prime => {
            let coarse = root::log_grid(dom.lo.max(1e-8), 1.0, 40);
            let mut d1 = f64::NEG_INFINITY;
            let mut c1 = f64::NEG_INFINITY;
            for &s in &coarse {
                let ps = triple.phi.deriv(s);
                let ls = triple.l_eval(s);
                for &t in &coarse {
                    d1 = d1.max(triple.phi.deriv(s * t) / (ps * triple.phi.deriv(t)));
                    c1 = c1.max(ls * triple.l_eval(t) / triple.l_eval(s * t));
                }
            }
            Ok(report(Verdict::Holds, d1.max(c1)))
        }
        ConditionId::C3 => {
            let h = |t: f64| t / table.eval_inv(t);
            let samples = c_increasing_samples(&grid, h);
            let (sup, verdict) = stabilized_sup(&samples, TOWARD_ZERO);
            // second clause: the ratio must vanish at zero
            let at_lo = h(dom.lo);
            let at_hi = h(dom.hi.min(1.0));
            if at_lo.is_nan() || at_lo >= 0.1 * at_hi {
                return Ok(report(Verdict::Fails, sup));
            }
            Ok(report(verdict, sup))
        }
        ConditionId::C4 => {
            let samples: Vec<(f64, f64)> = grid
                .iter()
                .filter(|&&t| t <= 1.0)
                .filter_map(|&t| {
                    let fv = triple.f.eval(t);
                    let bf = triple.f.big_f(t);
                    if fv <= 0.0 || bf <= 0.0 {
                        return None;
                    }
                    Some((t, bf / (table.eval_inv(bf) * fv)))
                })
                .collect();
            if samples.is_empty() {
                return Ok(report(Verdict::Fails, f64::INFINITY));
            }
            let (sup, verdict) = stabilized_sup(&samples, TOWARD_ZERO);
            Ok(report(verdict, sup))
        }
        ConditionId::Beta1 => {
            let w = weight.expect("beta conditions need a weight profile");
            let k_sup = table.k_sup();
            for &t in &grid {
                let wt = w.eval(t);
                if wt.is_nan() || wt <= 0.0 || w.deriv(t) > 1e-12 * wt {
                    return Ok(report(Verdict::Fails, t));
                }
                if w.eval(t) >= k_sup {
                    return Ok(report(Verdict::Fails, t));
                }
            }
            Ok(report(Verdict::Holds, 0.0))
        }
        ConditionId::Beta2 => {
            let w = weight.expect("beta conditions need a weight profile");
            let samples: Vec<(f64, f64)> = grid
                .iter()
                .map(|&t| {
                    let b = w.eval(t);
                    (t, (-w.deriv(t)).max(0.0) / (table.eval_inv(b) * b))
                })
                .collect();
            let (sup, verdict) = stabilized_sup(&samples, TOWARD_INFINITY);
            Ok(report(verdict, sup))
        }
        ConditionId::Beta3 => {
            let w = weight.expect("beta conditions need a weight profile");
            // limsup along dyadic samples
            let mut t = dom.lo.max(1.0);
            let mut best: f64 = 0.0;
            while t <= dom.hi {
                best = best.max(-t * w.deriv(t) / w.eval(t));
                t *= 2.0;
            }
            let verdict = if best > 1e-8 { Verdict::Holds } else { Verdict::Fails };
            Ok(report(verdict, best))
        }
        ConditionId::Chi1 { chi1 } => {
            let full = root::log_grid(1e-8, 1e8, 200);
            let h = |t: f64| triple.phi.deriv(t) * t.powf(1.0 - chi1) / triple.l_eval(t);
            let samples = c_increasing_samples(&full, h);
            let (sup, verdict) = stabilized_sup(&samples, BOTH_ENDS);
            Ok(report(verdict, sup))
        }
        ConditionId::Chi2 { chi2 } => {
            let full = root::log_grid(1e-8, 1e8, 200);
            let h = |t: f64| triple.phi.eval(t) * t.powf(-chi2) / triple.l_eval(t);
            let samples = c_increasing_samples(&full, h);
            let (sup, verdict) = stabilized_sup(&samples, BOTH_ENDS);
            Ok(report(verdict, sup))
        }
        ConditionId::CIncreasingF => {
            let samples: Vec<(f64, f64)> = {
                let mut run_max = f64::NEG_INFINITY;
                grid.iter()
                    .filter_map(|&t| {
                        let v = triple.f.eval(t);
                        run_max = run_max.max(v);
                        if v > 0.0 {
                            Some((t, run_max / v))
                        } else {
                            None
                        }
                    })
                    .collect()
            };
            if samples.is_empty() {
                return Ok(report(Verdict::Fails, f64::INFINITY));
            }
            let (sup, verdict) = stabilized_sup(&samples, ends_from_domain(dom));
            Ok(report(verdict, sup))
        }
        ConditionId::CIncreasingL => {
            let samples = c_increasing_samples(&grid, |t| triple.l_eval(t));
            let (sup, verdict) = stabilized_sup(&samples, ends_from_domain(dom));
            Ok(report(verdict, sup))
        }
    }
}
