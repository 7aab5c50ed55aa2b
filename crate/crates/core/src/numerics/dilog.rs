//! Dilogarithm `Li2(x) = sum_{k>=1} x^k / k^2` on `[-1, 0]`.

use super::hpfloat::HPFloat;
use super::hyp2f1::MAX_TERMS;
use crate::{Error, Result};

/// `Li2(x)` for `x` in `[-1, 0]`. Arguments below `-1/2` are reflected through
/// `Li2(x) = -Li2(x/(x-1)) - ln(1-x)^2 / 2`, which maps them into `[-1/2, -1/3]`.
pub fn dilog(x: &HPFloat, bits: u32) -> Result<HPFloat> {
    let xf = x.to_f64();
    if !(-1.0..=0.0).contains(&xf) {
        return Err(Error::Domain(format!(
            "dilog is implemented on [-1, 0], got {xf}"
        )));
    }
    let work = bits + 16;
    let x = x.with_precision(work);
    if xf >= -0.5 {
        return Ok(series(&x, work)?.with_precision(bits));
    }
    let one = HPFloat::one(work);
    let y = &x / &(&x - &one);
    let l = (&one - &x).ln().expect("1 - x > 0");
    let half = HPFloat::from_f64(0.5, work);
    Ok((-series(&y, work)? - half * l.sqr()).with_precision(bits))
}

pub fn dilog_f64(x: f64, bits: u32) -> Result<HPFloat> {
    dilog(&HPFloat::from_f64(x, bits), bits)
}

fn series(x: &HPFloat, bits: u32) -> Result<HPFloat> {
    let eps = 2f64.powi(-(bits as i32));
    let mut pow = x.clone();
    let mut sum = HPFloat::zero(bits);
    let mut residual = 1.0;
    for k in 1..=MAX_TERMS as i64 {
        let term = &pow / &HPFloat::from_i64(k * k, bits);
        sum = &sum + &term;
        if pow.is_zero() {
            return Ok(sum);
        }
        let s = sum.to_f64().abs();
        residual = term.to_f64().abs() / if s > 0.0 { s } else { 1.0 };
        if residual < eps {
            return Ok(sum);
        }
        pow = &pow * x;
    }
    Err(Error::Evaluation {
        what: "dilogarithm series",
        terms: MAX_TERMS,
        residual,
    })
}
