//! Small least-squares and sequence-limit helpers shared by the exponent
//! estimators and growth-rate probes.

/// Least-squares slope of `y` against `x`. Returns `(slope, rms_residual)`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    assert!(n >= 2.0);
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for &(x, y) in pts {
        let r = y - (slope * x + intercept);
        ss += r * r;
    }
    (slope, (ss / n).sqrt())
}

/// Outcome of a dyadic limit probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DyadicLimit {
    /// The sequence stabilized; carries the extrapolated limit.
    Stable(f64),
    /// No stabilization within the sampled range.
    NotStabilizing,
}

/// Estimate `lim a_k` for a sequence sampled at dyadic arguments, with one
/// Richardson step assuming an `O(2^{-k})`-type correction.
///
/// `rel_tol` controls when consecutive extrapolated values are considered
/// stable.
pub fn dyadic_limit(seq: &[f64], rel_tol: f64) -> DyadicLimit {
    if seq.len() < 3 {
        return DyadicLimit::NotStabilizing;
    }
    // Richardson: if a_k = L + c q^k with q = (a_k - a_{k-1})/(a_{k-1} - a_{k-2}),
    // then L = a_k + (a_k - a_{k-1}) q/(1-q) (Aitken delta-squared).
    let mut extrap = Vec::new();
    for w in seq.windows(3) {
        let (a0, a1, a2) = (w[0], w[1], w[2]);
        let d1 = a1 - a0;
        let d2 = a2 - a1;
        let denom = d2 - d1;
        if denom.abs() > 1e-14 * (a2.abs() + 1.0) {
            extrap.push(a2 - d2 * d2 / denom);
        } else {
            extrap.push(a2);
        }
    }
    let last = *extrap.last().unwrap();
    let prev = extrap[extrap.len() - 2];
    if (last - prev).abs() <= rel_tol * (last.abs() + 1e-30) {
        DyadicLimit::Stable(last)
    } else {
        DyadicLimit::NotStabilizing
    }
}
