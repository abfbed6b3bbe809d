//! Grid-backed radial functions: the common carrier for boundary value
//! problem solutions and supersolution profiles.

/// A function of the radial variable sampled on an increasing grid, carrying
/// both values and first derivatives.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    ts: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl RadialFunction {
    pub fn new(ts: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>) -> Self {
        assert_eq!(ts.len(), values.len());
        assert_eq!(ts.len(), derivs.len());
        assert!(ts.len() >= 2);
        debug_assert!(ts.windows(2).all(|w| w[0] < w[1]), "grid must increase");
        Self { ts, values, derivs }
    }

    /// Samples a closed-form pair (value, derivative) on the given grid.
    pub fn from_fn<F: Fn(f64) -> (f64, f64)>(ts: Vec<f64>, f: F) -> Self {
        let mut values = Vec::with_capacity(ts.len());
        let mut derivs = Vec::with_capacity(ts.len());
        for &t in &ts {
            let (v, d) = f(t);
            values.push(v);
            derivs.push(d);
        }
        Self::new(ts, values, derivs)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }
    pub fn ts(&self) -> &[f64] {
        &self.ts
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }
    pub fn t_start(&self) -> f64 {
        self.ts[0]
    }
    pub fn t_end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn deriv_sup_norm(&self) -> f64 {
        self.derivs.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    fn segment(&self, t: f64) -> usize {
        match self.ts.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(self.ts.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.ts.len() - 2),
        }
    }

    /// Cubic Hermite evaluation of the value at `t` (clamped to the grid).
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.t_start() {
            return self.values[0];
        }
        if t >= self.t_end() {
            return *self.values.last().unwrap();
        }
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let x = (t - self.ts[i]) / h;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * h, self.derivs[i + 1] * h);
        let x2 = x * x;
        let x3 = x2 * x;
        v0 * (2.0 * x3 - 3.0 * x2 + 1.0)
            + d0 * (x3 - 2.0 * x2 + x)
            + v1 * (-2.0 * x3 + 3.0 * x2)
            + d1 * (x3 - x2)
    }

    /// Hermite evaluation of the derivative at `t` (clamped to the grid).
    pub fn eval_deriv(&self, t: f64) -> f64 {
        if t <= self.t_start() {
            return self.derivs[0];
        }
        if t >= self.t_end() {
            return *self.derivs.last().unwrap();
        }
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let x = (t - self.ts[i]) / h;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i], self.derivs[i + 1]);
        let x2 = x * x;
        (v0 * (6.0 * x2 - 6.0 * x) / h)
            + d0 * (3.0 * x2 - 4.0 * x + 1.0)
            + (v1 * (6.0 * x - 6.0 * x2) / h)
            + d1 * (3.0 * x2 - 2.0 * x)
    }

    /// Largest absolute difference in values against another function on this
    /// grid, restricted to `t <= t_cap`.
    pub fn sup_diff_until(&self, other: &RadialFunction, t_cap: f64) -> f64 {
        self.ts
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t <= t_cap)
            .fold(0.0, |acc, (t, v)| acc.max((v - other.eval(*t)).abs()))
    }
}

/// Uniform grid of `n + 1` nodes on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(b > a && n >= 1);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Grid on `[0, t_end]` clustered quadratically toward the singular endpoint
/// `t = 0`: node `i` sits at `t_end (i/n)^2`.
pub fn quadratic_grid(t_end: f64, n: usize) -> Vec<f64> {
    assert!(t_end > 0.0 && n >= 2);
    (0..=n)
        .map(|i| {
            let x = i as f64 / n as f64;
            t_end * x * x
        })
        .collect()
}

/// Cumulative integral of grid samples by local quadratic fits.
///
/// Each interval contribution averages the quadratics through the left and
/// right node triples, giving fourth-order accuracy on smooth data (trapezoid
/// alone would cap the boundary value problem solvers at second order).
pub fn cumulative_integral(ts: &[f64], f: &[f64]) -> Vec<f64> {
    let n = ts.len();
    assert_eq!(n, f.len());
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let seg = |i0: usize, a: f64, b: f64| -> f64 {
        // integral over [a, b] of the quadratic through nodes i0, i0+1, i0+2
        let (x0, x1, x2) = (ts[i0], ts[i0 + 1], ts[i0 + 2]);
        let (f0, f1, f2) = (f[i0], f[i0 + 1], f[i0 + 2]);
        // int_a^b (x-c)(x-d) dx
        let pair = |c: f64, d: f64| -> f64 {
            let anti = |x: f64| x * x * x / 3.0 - (c + d) * x * x / 2.0 + c * d * x;
            anti(b) - anti(a)
        };
        f0 * pair(x1, x2) / ((x0 - x1) * (x0 - x2))
            + f1 * pair(x0, x2) / ((x1 - x0) * (x1 - x2))
            + f2 * pair(x0, x1) / ((x2 - x0) * (x2 - x1))
    };
    for i in 0..n - 1 {
        let (a, b) = (ts[i], ts[i + 1]);
        let left = if i >= 1 { Some(seg(i - 1, a, b)) } else { None };
        let right = if i + 2 < n { Some(seg(i, a, b)) } else { None };
        let inc = match (left, right) {
            (Some(l), Some(r)) => 0.5 * (l + r),
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => 0.5 * (b - a) * (f[i] + f[i + 1]),
        };
        out.push(out[i] + inc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubic() {
        let ts = uniform_grid(0.0, 2.0, 8);
        let f = RadialFunction::from_fn(ts, |t| (t * t * t, 3.0 * t * t));
        for k in 0..40 {
            let t = 2.0 * k as f64 / 39.0;
            assert!((f.eval(t) - t * t * t).abs() < 1e-12);
            assert!((f.eval_deriv(t) - 3.0 * t * t).abs() < 1e-11);
        }
    }

    #[test]
    fn cumulative_integral_fourth_order() {
        let ts = quadratic_grid(1.0, 256);
        let f: Vec<f64> = ts.iter().map(|t| t.exp()).collect();
        let cum = cumulative_integral(&ts, &f);
        for (i, &t) in ts.iter().enumerate() {
            let exact = t.exp() - 1.0;
            assert!(
                (cum[i] - exact).abs() < 2e-9,
                "t = {t}, err = {}",
                (cum[i] - exact).abs()
            );
        }
    }
}
