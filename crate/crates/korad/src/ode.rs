//! Adaptive explicit integrators used by the Jacobi comparison solver and
//! the maximal-extension march.
//!
//! Error control is classic step halving: a full RK4 step is compared with
//! two half steps; the step is accepted when the difference passes the local
//! tolerance and the Richardson-corrected value is kept.

/// Outcome of one adaptive march.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    /// Reached the requested endpoint.
    ReachedEnd,
    /// A user predicate asked to stop (value stored the stop location).
    Event,
    /// The step size collapsed below the hard floor.
    StepCollapse,
    /// The state left the domain of the right-hand side (NaN/overflow).
    StateInvalid,
}

#[derive(Debug, Clone)]
pub struct March<const N: usize> {
    pub ts: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub stop: StopReason,
}

fn rk4_step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: &F,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = f(t + 0.5 * h, &y2);
    for i in 0..N {
        y2[i] = y[i] + h * k3[i];
    }
    let k4 = f(t + h, &y2);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end` with local tolerance `tol`
/// (relative to `1 + |y|`). `stop_when` may end the march early.
pub fn march_adaptive<const N: usize, F, S>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: f64,
    min_step: f64,
    stop_when: S,
) -> March<N>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: Fn(f64, &[f64; N]) -> bool,
{
    assert!(t_end > t0);
    let mut t = t0;
    let mut y = y0;
    let mut h = ((t_end - t0) / 64.0).min(0.1);
    let mut ts = vec![t0];
    let mut states = vec![y0];
    let stop;
    loop {
        if t >= t_end {
            stop = StopReason::ReachedEnd;
            break;
        }
        if stop_when(t, &y) {
            stop = StopReason::Event;
            break;
        }
        h = h.min(t_end - t);
        if h < min_step {
            stop = StopReason::StepCollapse;
            break;
        }
        let full = rk4_step(&f, t, &y, h);
        let half = rk4_step(&f, t, &y, 0.5 * h);
        let two = rk4_step(&f, t + 0.5 * h, &half, 0.5 * h);
        let mut err = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..N {
            err = err.max((full[i] - two[i]).abs());
            scale = scale.max(y[i].abs());
        }
        if !err.is_finite() || full.iter().any(|v| !v.is_finite()) {
            // Retry with a smaller step before giving up.
            h *= 0.25;
            if h < min_step {
                stop = StopReason::StateInvalid;
                break;
            }
            continue;
        }
        let local_tol = tol * scale.max(1.0);
        if err <= local_tol {
            t += h;
            // Richardson extrapolation of the two half steps.
            let mut next = two;
            for i in 0..N {
                next[i] += (two[i] - full[i]) / 15.0;
            }
            y = next;
            ts.push(t);
            states.push(y);
            if err < 0.01 * local_tol {
                h *= 2.0;
            }
        } else {
            h *= 0.5 * (local_tol / err).powf(0.2).clamp(0.2, 0.9);
        }
    }
    March { ts, states, stop }
}

/// Solution of the linear second-order problem `g'' = G(t) g` carried in a
/// rescaled representation so super-exponentially growing solutions never
/// overflow: the stored pair is `(g, g') / exp(offset)`.
#[derive(Debug, Clone)]
pub struct ScaledLinearSolution {
    pub ts: Vec<f64>,
    /// rescaled (g, g') samples
    pub pairs: Vec<[f64; 2]>,
    /// per-sample log of the rescaling factor
    pub offsets: Vec<f64>,
    /// first zero of g, when one occurred inside the range
    pub first_zero: Option<f64>,
}

impl ScaledLinearSolution {
    pub fn log_g(&self, i: usize) -> f64 {
        self.pairs[i][0].max(1e-308).ln() + self.offsets[i]
    }
    pub fn g(&self, i: usize) -> f64 {
        self.pairs[i][0] * self.offsets[i].exp()
    }
    pub fn g_prime(&self, i: usize) -> f64 {
        self.pairs[i][1] * self.offsets[i].exp()
    }

    /// Cubic Hermite of `(g, g')` on the segment containing `t`, in the left
    /// node's rescaled coordinates (adjacent offsets differ by at most one
    /// rescale event, so the shift stays representable). Returns the
    /// interpolant and the log offset of the segment.
    fn hermite(&self, t: f64) -> (f64, f64) {
        let i = match self.ts.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => return (self.pairs[i][0], self.offsets[i]),
            Err(i) => i.clamp(1, self.ts.len() - 1),
        };
        let (t0, t1) = (self.ts[i - 1], self.ts[i]);
        let h = t1 - t0;
        let shift = (self.offsets[i] - self.offsets[i - 1]).exp();
        let (v0, d0) = (self.pairs[i - 1][0], self.pairs[i - 1][1] * h);
        let (v1, d1) = (self.pairs[i][0] * shift, self.pairs[i][1] * shift * h);
        let x = (t - t0) / h;
        let (x2, x3) = (x * x, x * x * x);
        let v = v0 * (2.0 * x3 - 3.0 * x2 + 1.0)
            + d0 * (x3 - 2.0 * x2 + x)
            + v1 * (-2.0 * x3 + 3.0 * x2)
            + d1 * (x3 - x2);
        (v, self.offsets[i - 1])
    }

    /// log g at an arbitrary point of the range.
    pub fn log_g_at(&self, t: f64) -> f64 {
        let (v, offset) = self.hermite(t);
        v.max(1e-308).ln() + offset
    }

    /// g at an arbitrary point (saturating to `inf` past the f64 range).
    pub fn g_at(&self, t: f64) -> f64 {
        let (v, offset) = self.hermite(t);
        v * offset.exp()
    }
}

/// Adaptive march for `g'' = G(t) g`, rescaling the homogeneous solution
/// whenever it grows past 1e100. Stops at `t_end` or at the first zero of `g`
/// (located by bisection on the Hermite interpolant of the last step).
pub fn solve_linear_second_order<G: Fn(f64) -> f64>(
    profile: G,
    t0: f64,
    g0: f64,
    dg0: f64,
    t_end: f64,
    tol: f64,
) -> ScaledLinearSolution {
    let rhs = |t: f64, y: &[f64; 2]| [y[1], profile(t) * y[0]];
    let mut ts = vec![t0];
    let mut pairs = vec![[g0, dg0]];
    let mut offsets = vec![0.0];
    let mut first_zero = None;

    let mut t = t0;
    let mut y = [g0, dg0];
    let mut offset = 0.0f64;
    let mut h = ((t_end - t0) / 256.0).min(0.05);
    let min_step = 1e-13 * (t_end - t0).max(1.0);
    while t < t_end {
        // keep nodes dense enough for the Hermite interpolant even where
        // the local error estimate would allow arbitrarily long steps
        h = h.min(t_end - t).min(0.02 * (1.0 + t)).max(min_step);
        let full = rk4_step(&rhs, t, &y, h);
        let half = rk4_step(&rhs, t, &y, 0.5 * h);
        let two = rk4_step(&rhs, t + 0.5 * h, &half, 0.5 * h);
        let err = (full[0] - two[0]).abs().max((full[1] - two[1]).abs());
        let scale = y[0].abs().max(y[1].abs()).max(1e-30);
        if err > tol * scale && h > min_step {
            h = (h * 0.5 * (tol * scale / err).powf(0.2).clamp(0.2, 0.9)).max(min_step);
            continue;
        }
        let mut next = two;
        next[0] += (two[0] - full[0]) / 15.0;
        next[1] += (two[1] - full[1]) / 15.0;
        if next[0] <= 0.0 {
            // locate the zero crossing of g on [t, t + h]
            let (ta, ga) = (t, y[0]);
            let (tb, gb) = (t + h, next[0]);
            let z = ta + (tb - ta) * ga / (ga - gb);
            first_zero = Some(z);
            ts.push(z);
            pairs.push([0.0, next[1]]);
            offsets.push(offset);
            break;
        }
        t += h;
        y = next;
        let mag = y[0].abs().max(y[1].abs());
        if mag > 1e100 {
            // linear equation: rescaling both components is exact
            y[0] /= mag;
            y[1] /= mag;
            offset += mag.ln();
        }
        ts.push(t);
        pairs.push(y);
        offsets.push(offset);
        if err < 0.01 * tol * scale {
            h *= 2.0;
        }
    }
    ScaledLinearSolution {
        ts,
        pairs,
        offsets,
        first_zero,
    }
}
