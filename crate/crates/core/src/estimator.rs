//! Quantile estimator of the expected spacing: the quantile derivative at
//! `p_i = (i-1)/n` times the mean uniform spacing `Δp`.

use std::f64::consts::PI;

use num_rational::BigRational;

use crate::distributions::{Family, Params};
use crate::numerics::rational::{from_f64, int, rat};
use crate::spacing_exact::SpacingQuery;
use crate::{Error, Result};

/// Placement of the `n` points in probability.
///
/// Unbounded families use `p_i = (i-1)/n` with `Δp = 1/n`. The uniform is
/// bounded on both sides, so its points sit at `p_i = i/(n+1)` with
/// `Δp = 1/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantileGrid {
    n: u32,
    uniform: bool,
}

impl QuantileGrid {
    pub fn new(n: u32, family: Family) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("grid needs n >= 2, got {n}")));
        }
        Ok(QuantileGrid { n, uniform: family == Family::Uniform })
    }

    pub fn for_query(q: &SpacingQuery) -> Self {
        QuantileGrid { n: q.n(), uniform: q.spec().family() == Family::Uniform }
    }

    /// Probability attached to the lower end of spacing `i`'s upper point.
    pub fn p(&self, i: u32) -> BigRational {
        let n = self.n as i64;
        if self.uniform {
            rat(i as i64, n + 1)
        } else {
            rat(i as i64 - 1, n)
        }
    }

    pub fn dp(&self) -> BigRational {
        let n = self.n as i64;
        if self.uniform {
            rat(1, n + 1)
        } else {
            rat(1, n)
        }
    }

    fn p_f64(&self, i: u32) -> f64 {
        if self.uniform {
            i as f64 / (self.n as f64 + 1.0)
        } else {
            (i as f64 - 1.0) / self.n as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorForm {
    ClosedForm,
    FiniteDifference,
    DerivativeTimesDp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorValue {
    pub value: f64,
    pub form: EstimatorForm,
}

fn closed(value: f64) -> Result<EstimatorValue> {
    Ok(EstimatorValue { value, form: EstimatorForm::ClosedForm })
}

/// Laplace spacings on the left half use the left branch. The two branches
/// coincide at `p_i = 1/2`.
fn laplace_left(n: u32, i: u32) -> bool {
    2 * (i - 1) <= n
}

/// The per-family closed form of the estimator.
pub fn estimate_closed(q: &SpacingQuery) -> Result<EstimatorValue> {
    let (n, i) = (q.n() as f64, q.i() as f64);
    let up = n - i + 1.0;
    match q.spec().params() {
        Params::Cauchy { sigma, .. } => {
            let p = (i - 1.0) / n;
            let s = (PI * p.min(1.0 - p)).sin();
            closed(PI * sigma / n / (s * s))
        }
        Params::Exponential { lambda } => closed(1.0 / (lambda * up)),
        Params::Frechet { lambda, sigma, .. } => {
            let l = -1.0 / ((i - 1.0) / n).ln();
            closed(sigma / lambda / (i - 1.0) * l.powf((lambda + 1.0) / lambda))
        }
        Params::Gumbel { sigma, .. } => closed(-sigma / ((i - 1.0) * ((i - 1.0) / n).ln())),
        Params::Laplace { sigma, .. } => {
            if laplace_left(q.n(), q.i()) {
                closed(sigma / (i - 1.0))
            } else {
                closed(sigma / up)
            }
        }
        Params::Logistic { sigma, .. } => closed(sigma * n / ((i - 1.0) * up)),
        Params::Pareto { a, b } => closed(b / a * n.powf(1.0 / a) * up.powf(-(a + 1.0) / a)),
        Params::Rayleigh { sigma } => closed(sigma / up * (-0.5 / (up / n).ln()).sqrt()),
        Params::Uniform { a, b } => closed((b - a) / (n + 1.0)),
        Params::Weibull { a, b } => closed(b / a / up * (-1.0 / (up / n).ln()).powf((a - 1.0) / a)),
    }
}

/// The closed form as an exact rational, for the families where it is one:
/// uniform, exponential, logistic and Laplace.
pub fn estimate_closed_rational(q: &SpacingQuery) -> Result<Option<BigRational>> {
    let (n, i) = (q.n() as i64, q.i() as i64);
    let up = int(n - i + 1);
    let v = match q.spec().params() {
        Params::Exponential { lambda } => Some(int(1) / (from_f64(lambda)? * up)),
        Params::Logistic { sigma, .. } => Some(from_f64(sigma)? * int(n) / (int(i - 1) * up)),
        Params::Uniform { a, b } => Some((from_f64(b)? - from_f64(a)?) / int(n + 1)),
        Params::Laplace { sigma, .. } => {
            let s = from_f64(sigma)?;
            Some(if laplace_left(q.n(), q.i()) { s / int(i - 1) } else { s / up })
        }
        _ => None,
    };
    Ok(v)
}

/// `F^{-1}(p_i) - F^{-1}(p_{i-1})`. At `p = 0` the lower support edge is used
/// when it is finite.
pub fn estimate_finite_difference(q: &SpacingQuery) -> Result<EstimatorValue> {
    let grid = QuantileGrid::for_query(q);
    let spec = q.spec();
    let hi = spec.inv_cdf(grid.p_f64(q.i()))?;
    let p_lo = grid.p_f64(q.i() - 1);
    let lo = if p_lo == 0.0 {
        let edge = spec.support().0;
        if !edge.is_finite() {
            return Err(Error::Domain(format!(
                "{} is unbounded below, so F^-1(0) does not exist; use the derivative form",
                spec.family()
            )));
        }
        edge
    } else {
        spec.inv_cdf(p_lo)?
    };
    Ok(EstimatorValue { value: hi - lo, form: EstimatorForm::FiniteDifference })
}

/// `dF^{-1}/dp (p_i) · Δp`.
pub fn estimate_derivative(q: &SpacingQuery) -> Result<EstimatorValue> {
    let grid = QuantileGrid::for_query(q);
    let n = q.n() as f64;
    let (p, dp) = if q.spec().family() == Family::Uniform {
        (grid.p_f64(q.i()), 1.0 / (n + 1.0))
    } else {
        (grid.p_f64(q.i()), 1.0 / n)
    };
    let d = q.spec().inv_cdf_deriv(p)?;
    Ok(EstimatorValue { value: d * dp, form: EstimatorForm::DerivativeTimesDp })
}
