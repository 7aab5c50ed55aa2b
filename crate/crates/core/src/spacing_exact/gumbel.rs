//! Gumbel spacings: density as a finite alternating sum and the expected
//! spacing as an alternating series of logarithms.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::distributions::{Family, Params};
use crate::numerics::rational::{binomial, factorial, int, rat};
use crate::numerics::{HPFloat, PrecisionPolicy};
use crate::{Error, Result};

use super::SpacingQuery;

/// Largest relative change tolerated when the precision is raised by 64 bits.
pub const ESCALATION_TOL: f64 = 1e-9;

fn scale(q: &SpacingQuery) -> Result<f64> {
    q.require(Family::Gumbel)?;
    match q.spec.params() {
        Params::Gumbel { sigma, .. } => Ok(sigma),
        _ => unreachable!(),
    }
}

/// `n!/((i-2)!(n-i)!) (e^w/σ) (-1)^{n-i} Σ_k (-1)^k C(n-i,k) / (e^w (i-1) + n-i+1-k)²`
/// with `w = y/σ`, for `y >= 0`.
pub fn gumbel_spacing_density(q: &SpacingQuery, y: f64) -> Result<f64> {
    let sigma = scale(q)?;
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("spacing density needs y >= 0, got {y}")));
    }
    let (n, i) = (q.n as i64, q.i as i64);
    let w = y / sigma;
    // the alternating sum cancels about w (n-i) / ln 2 bits
    let extra = ((w * (n - i) as f64 / std::f64::consts::LN_2).ceil() as u32).min(1 << 14);
    let bits = PrecisionPolicy::default().working_bits(q.n) + extra;
    let ew = HPFloat::from_f64(w, bits).exp();
    let m = n - i;
    let mut sum = HPFloat::zero(bits);
    for k in 0..=m {
        let d = &ew * HPFloat::from_i64(i - 1, bits) + HPFloat::from_i64(m + 1 - k, bits);
        let t = HPFloat::from_bigint(&binomial(m as u64, k as u64), bits) / d.sqr();
        sum = if k % 2 == 0 { sum + t } else { sum - t };
    }
    if m % 2 == 1 {
        sum = -sum;
    }
    let pre = BigRational::new(factorial(n as u64), factorial((i - 2) as u64) * factorial(m as u64));
    let v = HPFloat::from_rational(&pre, bits) * ew / HPFloat::from_f64(sigma, bits) * sum;
    Ok(v.to_f64())
}

/// `i C(n,i) σ { -ln(i-1)/(n-i+1) + Σ_{k=0}^{n-i} (-1)^k C(n-i,k) ln(i+k)/(1+k) }`
/// at exactly `bits` of precision, with no escalation check.
pub fn gumbel_expected_at(q: &SpacingQuery, bits: u32) -> Result<HPFloat> {
    let sigma = scale(q)?;
    let (n, i) = (q.n as i64, q.i as i64);
    let m = n - i;
    let mut sum = -(HPFloat::from_i64(i - 1, bits).ln().expect("i >= 2") / HPFloat::from_i64(m + 1, bits));
    for k in 0..=m {
        let c = BigRational::new(binomial(m as u64, k as u64).into(), BigInt::from(1 + k));
        let t = HPFloat::from_rational(&c, bits) * HPFloat::from_i64(i + k, bits).ln().expect("positive");
        sum = if k % 2 == 0 { sum + t } else { sum - t };
    }
    let pre = binomial(n as u64, i as u64) * i;
    Ok(HPFloat::from_bigint(&pre, bits) * HPFloat::from_f64(sigma, bits) * sum)
}

/// Expected spacing at `bits`, re-evaluated at `bits + 64` to confirm the
/// cancellation in the alternating sum was absorbed.
pub fn gumbel_expected(q: &SpacingQuery, bits: u32) -> Result<HPFloat> {
    let base = gumbel_expected_at(q, bits)?;
    let escalated = gumbel_expected_at(q, bits + 64)?;
    let change = base.rel_diff(&escalated);
    if !(change <= ESCALATION_TOL) {
        return Err(Error::Precision { bits, escalated: bits + 64, rel_change: change });
    }
    Ok(escalated.with_precision(bits))
}

/// The unsimplified form
/// `n!/((i-2)!(n-i)!) (-1)^{n-i} (σ/(i-1)) Σ_k (-1)^k C(n-i,k) ln((n-k)/(i-1)) / (n-i+1-k)`,
/// kept for cross-checking the simplified sum.
pub fn gumbel_expected_raw(q: &SpacingQuery, bits: u32) -> Result<HPFloat> {
    let sigma = scale(q)?;
    let (n, i) = (q.n as i64, q.i as i64);
    let m = n - i;
    let mut sum = HPFloat::zero(bits);
    for k in 0..=m {
        let c = BigRational::new(binomial(m as u64, k as u64).into(), BigInt::from(m + 1 - k));
        let arg = HPFloat::from_rational(&rat(n - k, i - 1), bits);
        let t = HPFloat::from_rational(&c, bits) * arg.ln().expect("positive");
        sum = if k % 2 == 0 { sum + t } else { sum - t };
    }
    if m % 2 == 1 {
        sum = -sum;
    }
    let pre = BigRational::new(factorial(n as u64), factorial((i - 2) as u64) * factorial(m as u64)) / int(i - 1);
    Ok(HPFloat::from_rational(&pre, bits) * HPFloat::from_f64(sigma, bits) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec;

    fn q(sigma: f64, n: u32, i: u32) -> SpacingQuery {
        SpacingQuery::new(DistributionSpec::gumbel(0.0, sigma).unwrap(), n, i).unwrap()
    }

    #[test]
    fn expected_examples() {
        let two_ln2 = 2.0 * 2f64.ln();
        assert!((gumbel_expected(&q(1.0, 2, 2), 128).unwrap().to_f64() - two_ln2).abs() < 1e-15);
        let want = 6.0 * (2f64.ln() - 0.5 * 3f64.ln());
        assert!((gumbel_expected(&q(1.0, 3, 2), 128).unwrap().to_f64() - want).abs() < 1e-15);
        assert!((gumbel_expected_raw(&q(1.0, 2, 2), 128).unwrap().to_f64() - two_ln2).abs() < 1e-15);
        assert!((gumbel_expected_raw(&q(1.0, 3, 2), 128).unwrap().to_f64() - want).abs() < 1e-15);
    }

    #[test]
    fn raw_and_final_agree_below_thirty() {
        let a = gumbel_expected(&q(1.0, 20, 7), 256).unwrap();
        let b = gumbel_expected_raw(&q(1.0, 20, 7), 256).unwrap();
        assert!(a.rel_diff(&b) < 1e-12);
    }

    #[test]
    fn starved_precision_is_reported() {
        let r = gumbel_expected(&q(1.0, 120, 3), 64);
        assert!(matches!(r, Err(Error::Precision { .. })), "{r:?}");
    }

    #[test]
    fn density_examples() {
        assert!((gumbel_spacing_density(&q(1.0, 2, 2), 0.0).unwrap() - 0.5).abs() < 1e-16);
        // two draws: 2 e^y / (e^y + 1)^2
        let y = 0.7f64;
        let want = 2.0 * y.exp() / (y.exp() + 1.0).powi(2);
        assert!((gumbel_spacing_density(&q(1.0, 2, 2), y).unwrap() - want).abs() < 1e-15);
        assert!(gumbel_spacing_density(&q(1.0, 12, 3), 60.0).unwrap() >= 0.0);
    }
}
