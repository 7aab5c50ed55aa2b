//! Nested quadrature of the spacing density and its first two moments.
//!
//! The inner integral over `x` is taken in probability, `u = F(x)` or
//! `v = F(x + y)`, so every panel is bounded. The outer integral over
//! `y` runs over `[0, hi - lo]` or `[0, ∞)` with the estimator value as the
//! tail length scale.

use crate::distributions::DistributionSpec;
use crate::estimator::estimate_closed;
use crate::numerics::{quad_adaptive_rel, quad_adaptive_scaled};
use crate::spacing_exact::SpacingQuery;
use crate::{Error, Result};

// Below this relative error the inner integrand's rounding dominates.
const INNER_REL_FLOOR: f64 = 1e-13;

const DYADIC_LEVELS: usize = 60;

// n! / ((i-2)! (n-i)!) = n (n-1) C(n-2, i-2)
fn density_constant(n: u32, i: u32) -> f64 {
    let (n, k) = (n as f64, (i - 2) as f64);
    let mut c = n * (n - 1.0);
    for j in 1..=(i - 2) {
        let j = j as f64;
        c *= (n - 2.0 - k + j) / j;
    }
    c
}

fn check_tol(abs_tol: f64) -> Result<()> {
    if abs_tol > 0.0 && abs_tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("abs_tol must be positive, got {abs_tol}")))
    }
}

// Segment edges on [a, b]: the dyadic points 2^-k and 1 - 2^-k, which resolve
// 1/u-like decay toward either end of the unit interval.
fn dyadic_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    let mut t = 0.5;
    for _ in 0..DYADIC_LEVELS {
        for c in [t, 1.0 - t] {
            if c > a && c < b {
                pts.push(c);
            }
        }
        t *= 0.5;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

// ∫ F(x)^{i-2} S(x+y)^{n-i} f(x) f(x+y) dx, without the constant K.
//
// Left of x_c = median - y/2 the variable is v = F(x + y), elsewhere u = F(x).
// Each side then forms x + y or x - y from the quantile of the nearer-bulk
// point, so neither side cancels when y is large.
fn inner(spec: &DistributionSpec, n: u32, i: u32, y: f64, abs_tol: f64) -> Result<f64> {
    let (lo, hi) = spec.support();
    if y >= hi - lo {
        return Ok(0.0);
    }
    let (a, b) = ((i - 2) as i32, (n - i) as i32);
    let by_u = |u: f64| {
        let x = spec.quantile(u);
        let z = x + y;
        let f = spec.pdf(z);
        if !z.is_finite() || f == 0.0 {
            return 0.0;
        }
        u.powi(a) * spec.sf(z).powi(b) * f
    };
    let by_v = |v: f64| {
        let z = spec.quantile(v);
        let x = z - y;
        let f = spec.pdf(x);
        if !x.is_finite() || f == 0.0 {
            return 0.0;
        }
        spec.cdf(x).powi(a) * spec.sf(z).powi(b) * f
    };
    let xc = spec.quantile(0.5) - 0.5 * y;
    let u_lo = spec.cdf(xc);
    let u_hi = if hi.is_finite() { spec.cdf(hi - y) } else { 1.0 };
    let v_lo = if lo.is_finite() { spec.cdf(lo + y) } else { 0.0 };
    let v_hi = spec.cdf(xc + y);
    let mut segments: Vec<(&dyn Fn(f64) -> f64, f64, f64)> = vec![];
    if u_lo < u_hi {
        for w in dyadic_breaks(u_lo, u_hi).windows(2) {
            segments.push((&by_u, w[0], w[1]));
        }
    }
    if v_lo < v_hi {
        for w in dyadic_breaks(v_lo, v_hi).windows(2) {
            segments.push((&by_v, w[0], w[1]));
        }
    }
    if segments.is_empty() {
        return Ok(0.0);
    }
    // a one-panel pilot sets the relative floor against the whole integral
    let pilot: f64 = segments
        .iter()
        .map(|(g, s, t)| quad_adaptive_rel(g, *s, *t, f64::MIN_POSITIVE, 1.0, 1.0).map(|r| r.value))
        .sum::<Result<f64>>()?;
    let tol = abs_tol.max(INNER_REL_FLOOR * pilot.abs()) / segments.len() as f64;
    segments
        .iter()
        .map(|(g, s, t)| quad_adaptive_scaled(g, *s, *t, tol, 1.0).map(|r| r.value))
        .sum()
}

/// Density of `D_i` at `y` by one-dimensional quadrature.
pub fn spacing_density(q: &SpacingQuery, y: f64, abs_tol: f64) -> Result<f64> {
    check_tol(abs_tol)?;
    if y < 0.0 {
        return Ok(0.0);
    }
    let k = density_constant(q.n(), q.i());
    Ok(k * inner(q.spec(), q.n(), q.i(), y, abs_tol / k)?)
}

fn moment(q: &SpacingQuery, power: i32, abs_tol: f64) -> Result<f64> {
    check_tol(abs_tol)?;
    let spec = q.spec();
    let (n, i) = (q.n(), q.i());
    let k = density_constant(n, i);
    let (lo, hi) = spec.support();
    let y_max = hi - lo;
    let scale = estimate_closed(q)?.value;
    let inner_tol = abs_tol / 10.0 / k;
    let failure = std::cell::Cell::new(None);
    let h = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        // the inner budget is weighted by L/(L+y)², which integrates to 1 over y
        let w = scale / ((scale + y) * (scale + y) * y.powi(power));
        match inner(spec, n, i, y, inner_tol * w) {
            Ok(v) => y.powi(power) * v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let r = quad_adaptive_scaled(h, 0.0, y_max, abs_tol / k, scale);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(k * r?.value)
}

/// `E{D_i}` by nested quadrature of the spacing density.
pub fn integrate_expected(q: &SpacingQuery, abs_tol: f64) -> Result<f64> {
    moment(q, 1, abs_tol)
}

/// `E{D_i^2}` by nested quadrature of the spacing density.
pub fn integrate_second_moment(q: &SpacingQuery, abs_tol: f64) -> Result<f64> {
    moment(q, 2, abs_tol)
}
