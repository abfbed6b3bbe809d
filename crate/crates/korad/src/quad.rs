#![allow(clippy::excessive_precision)]

//! Adaptive quadrature on finite intervals, with support for integrable
//! endpoint singularities and for tails on `[a, ∞)` truncated by an
//! exponent-based remainder bound.

/// 7-point Gauss / 15-point Kronrod nodes on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One G7/K15 panel: returns (kronrod value, |K15 - G7| error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        let fsum = f1 + f2;
        if j % 2 != 0 {
            res_g += WG[j / 2] * fsum;
        }
        res_k += WGK[j] * fsum;
    }
    (res_k * h, ((res_k - res_g) * h).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` on `[a, b]`.
///
/// `rel_tol` is relative to the accumulated integral (with a small absolute
/// floor so integrals that are exactly zero terminate). The integrand must be
/// finite on the open interval; endpoint singularities should go through
/// [`integrate_from_zero`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Interval stack with per-panel refinement.
    let (v0, e0) = gk15(&f, a, b);
    let mut stack = vec![(a, b, v0, e0)];
    let mut result = v0;
    let mut err = e0;
    let mut panels = 1usize;
    while err > rel_tol * result.abs().max(1e-300) && panels < 4096 {
        // Split the worst panel.
        let (idx, _) = stack
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty stack");
        let (pa, pb, pv, pe) = stack.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Panel no longer splittable in f64; accept it.
            stack.push((pa, pb, pv, 0.0));
            err -= pe;
            continue;
        }
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        result += v1 + v2 - pv;
        err += e1 + e2 - pe;
        stack.push((pa, mid, v1, e1));
        stack.push((mid, pb, v2, e2));
        panels += 1;
    }
    result
}

/// Estimate the local exponent of `f` near `x0 > 0` by log-log slope over
/// a short dyadic run toward 0 (when `toward_zero`) or toward infinity.
pub fn local_exponent<F: Fn(f64) -> f64>(f: &F, x0: f64, toward_zero: bool) -> Option<f64> {
    let mut xs = Vec::new();
    let mut x = x0;
    for _ in 0..12 {
        xs.push(x);
        x = if toward_zero { x * 0.5 } else { x * 2.0 };
    }
    let mut pts = Vec::new();
    for &x in &xs {
        let y = f(x);
        if !(y.is_finite() && y > 0.0) {
            return None;
        }
        pts.push((x.ln(), y.ln()));
    }
    Some(crate::fitting::least_squares_slope(&pts).0)
}

/// Integrate `f` on `(0, b]` when `f` may have an integrable singularity at 0.
///
/// The substitution `s = b·u^k` maps the singular endpoint to a regular one:
/// if `f(s) ~ s^gamma` with `gamma > -1`, the transformed integrand behaves
/// like `u^{k(gamma+1)-1}` which is bounded once `k >= 1/(gamma+1)`. The
/// exponent is estimated from samples; `k` is chosen with margin.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, rel_tol: f64) -> Option<f64> {
    assert!(b > 0.0);
    let gamma = local_exponent(&f, b * 1e-4, true).unwrap_or(0.0);
    if gamma <= -1.0 {
        return None; // not integrable at 0
    }
    if gamma >= 0.0 {
        // No singularity; g extends continuously by its limit at 0.
        let g = |s: f64| if s == 0.0 { 0.0 } else { f(s) };
        return Some(integrate(g, 0.0, b, rel_tol));
    }
    let k = (2.0 / (gamma + 1.0)).clamp(2.0, 64.0);
    // s = b u^k, ds = b k u^{k-1} du
    let transformed = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let s = b * u.powf(k);
        if s <= 0.0 {
            return 0.0;
        }
        f(s) * b * k * u.powf(k - 1.0)
    };
    Some(integrate(transformed, 0.0, 1.0, rel_tol))
}

/// Result of a tail integration on `[a, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Convergent tail with its value.
    Finite(f64),
    /// The tail could not be certified convergent: either the fitted
    /// exponent stays at or above -1, or the remainder bound never meets the
    /// tolerance (borderline logarithmic decay).
    Divergent,
}

impl Tail {
    pub fn finite(self) -> Option<f64> {
        match self {
            Tail::Finite(v) => Some(v),
            Tail::Divergent => None,
        }
    }
}

/// Integrate `f` on `[a, ∞)` for an eventually power-like integrand.
///
/// Doubles the truncation radius until the fitted tail exponent `gamma`
/// satisfies `gamma < -1` and the remainder bound `R·f(R)/|gamma+1|` drops
/// below tolerance. Returns [`Tail::Divergent`] if the exponent estimate
/// stays at or above -1.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Tail {
    assert!(a > 0.0, "tail integration needs a positive left endpoint");
    let mut acc = 0.0;
    let mut left = a;
    let mut right = a * 2.0;
    for _ in 0..200 {
        acc += integrate(&f, left, right, rel_tol * 0.1);
        let fr = f(right);
        if fr == 0.0 {
            // fully decayed (underflow): the remainder is negligible
            return Tail::Finite(acc);
        }
        // The exponent fit can fail on fast (super-power) decay because the
        // probe samples underflow; in that case just keep extending.
        if let Some(gamma) = local_exponent(&f, right, false) {
            if gamma < -1.0 - 1e-3 {
                let remainder = right * fr / (-gamma - 1.0);
                if remainder.abs() <= rel_tol * acc.abs().max(1e-300) {
                    return Tail::Finite(acc + remainder);
                }
            } else if right > a * 1e12 {
                return Tail::Divergent;
            }
        }
        left = right;
        right *= 2.0;
    }
    Tail::Divergent
}
