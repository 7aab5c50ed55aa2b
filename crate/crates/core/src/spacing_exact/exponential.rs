use num_rational::BigRational;

use super::{ClosedFormValue, SpacingQuery};
use crate::distributions::{Family, Params};
use crate::numerics::rational::{from_f64, int};
use crate::Result;

fn rate(q: &SpacingQuery) -> Result<f64> {
    q.require(Family::Exponential)?;
    match q.spec.params() {
        Params::Exponential { lambda } => Ok(lambda),
        _ => unreachable!(),
    }
}

fn mean(q: &SpacingQuery) -> Result<BigRational> {
    let lambda = from_f64(rate(q)?)?;
    Ok(int(1) / (lambda * int((q.n - q.i + 1) as i64)))
}

/// `m λ e^{-m λ y}` with `m = n - i + 1`.
pub fn exp_spacing_density(q: &SpacingQuery, y: f64) -> Result<f64> {
    let lambda = rate(q)?;
    if y < 0.0 {
        return Ok(0.0);
    }
    let r = lambda * (q.n - q.i + 1) as f64;
    Ok(r * (-r * y).exp())
}

/// `1/(λ (n-i+1))`, exactly.
pub fn exp_expected(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    Ok(ClosedFormValue::exact(mean(q)?, bits))
}

/// The square of the expected spacing, exactly.
pub fn exp_variance(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    let e = mean(q)?;
    Ok(ClosedFormValue::exact(&e * &e, bits))
}

/// Expected normalized spacing `(n-i+1) E{D_i} = 1/λ`.
pub fn exp_normalized_expected(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    let e = mean(q)? * int((q.n - q.i + 1) as i64);
    Ok(ClosedFormValue::exact(e, bits))
}
