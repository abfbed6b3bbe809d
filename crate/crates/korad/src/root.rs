//! Scalar root finding and monotone-table inversion.
//!
//! The implicit definitions in this crate are all of the form "invert a
//! strictly monotone function known through an integral": they are solved by
//! bisection against the monotone function itself, never by differentiating
//! the defining identity.

/// Bisection for `f(x) = target` with `f` non-decreasing on `[lo, hi]`.
///
/// Returns the midpoint once the bracket is below `x_tol` (absolute).
/// `f(lo)` and `f(hi)` need not bracket exactly: the target is clamped to
/// the achievable range first, which callers rely on for table boundaries.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, target: f64, x_tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if target <= flo {
        return lo;
    }
    if target >= fhi {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Brent's method for a sign change of `f` on `[a, b]`.
///
/// Panics if `f(a)` and `f(b)` do not have opposite signs.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    assert!(
        fa * fb <= 0.0,
        "brent requires a sign change: f({a}) = {fa}, f({b}) = {fb}"
    );
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut mflag = true;
    let mut d = c;
    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() < x_tol {
            return b;
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let within = !(s > lo.min(b) && s < lo.max(b));
        let cond = within
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < x_tol)
            || (!mflag && (c - d).abs() < x_tol);
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

/// A strictly increasing sampled function with monotone inversion.
///
/// Inversion does a binary search for the bracketing segment followed by a
/// monotone (linear) local interpolation; accuracy therefore comes from node
/// density, which callers choose per use.
#[derive(Debug, Clone)]
pub struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl MonotoneTable {
    /// Builds a table from sorted strictly increasing samples.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        debug_assert!(xs.windows(2).all(|w| w[0] < w[1]), "xs must increase");
        debug_assert!(ys.windows(2).all(|w| w[0] < w[1]), "ys must increase");
        Self { xs, ys }
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }
    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }
    pub fn y_min(&self) -> f64 {
        self.ys[0]
    }
    pub fn y_max(&self) -> f64 {
        *self.ys.last().unwrap()
    }
    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn segment(knots: &[f64], v: f64) -> usize {
        match knots.binary_search_by(|k| k.total_cmp(&v)) {
            Ok(i) => i.min(knots.len() - 2),
            Err(i) => i.saturating_sub(1).min(knots.len() - 2),
        }
    }

    /// Forward evaluation (clamped to the table range).
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x_min() {
            return self.y_min();
        }
        if x >= self.x_max() {
            return self.y_max();
        }
        let i = Self::segment(&self.xs, x);
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    /// Inverse evaluation (clamped to the table range).
    pub fn eval_inv(&self, y: f64) -> f64 {
        if y <= self.y_min() {
            return self.x_min();
        }
        if y >= self.y_max() {
            return self.x_max();
        }
        let i = Self::segment(&self.ys, y);
        let t = (y - self.ys[i]) / (self.ys[i + 1] - self.ys[i]);
        self.xs[i] + t * (self.xs[i + 1] - self.xs[i])
    }

    /// Forward evaluation extending the boundary segments linearly beyond
    /// the table range (exact for data that is linear in the tabulated
    /// coordinates, e.g. powers in a log-log table).
    pub fn eval_extrapolating(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = if x <= self.x_min() {
            0
        } else if x >= self.x_max() {
            n - 2
        } else {
            return self.eval(x);
        };
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    /// Inverse evaluation with the same boundary extrapolation.
    pub fn eval_inv_extrapolating(&self, y: f64) -> f64 {
        let n = self.ys.len();
        let i = if y <= self.y_min() {
            0
        } else if y >= self.y_max() {
            n - 2
        } else {
            return self.eval_inv(y);
        };
        let t = (y - self.ys[i]) / (self.ys[i + 1] - self.ys[i]);
        self.xs[i] + t * (self.xs[i + 1] - self.xs[i])
    }
}

/// Log-spaced grid with `per_decade` points per decade over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo);
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(2);
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_cubic() {
        let r = bisect_increasing(|x| x * x * x, 0.0, 3.0, 8.0, 1e-13);
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn brent_cos() {
        let r = brent(|x| x.cos(), 0.0, 2.0, 1e-14, 100);
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn table_round_trip() {
        let xs: Vec<f64> = (0..=400).map(|i| 1e-3 * 10f64.powf(6.0 * i as f64 / 400.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let t = MonotoneTable::new(xs.clone(), ys);
        for &x in &xs {
            let back = t.eval_inv(t.eval(x));
            assert!((back - x).abs() <= 1e-12 * x.max(1.0));
        }
    }
}
