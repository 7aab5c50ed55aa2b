//! Logistic spacings: density through the hypergeometric function, the exact
//! rational expected spacing, and the second moment assembled from finite
//! rational sums, a `ln 2` / `π²` part and an alternating k-series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ClosedFormValue, SpacingQuery};
use crate::distributions::{Family, Params};
use crate::numerics::rational::{factorial, factorial_ratio, from_f64, int, rat};
use crate::numerics::{dilog_f64, hyp2f1_hp, HPFloat};
use crate::{Error, Result};

/// Cap on the k-series of the second moment.
pub const MAX_K_TERMS: usize = 100_000;

fn scale(q: &SpacingQuery) -> Result<f64> {
    q.require(Family::Logistic)?;
    match q.spec.params() {
        Params::Logistic { sigma, .. } => Ok(sigma),
        _ => unreachable!(),
    }
}

/// `(1/σ) e^{y/σ} ((n-i+1)(i-1)/(n+1)) 2F1(i, n-i+2; n+2; 1 - e^{y/σ})`.
pub fn logistic_spacing_density(q: &SpacingQuery, y: f64, bits: u32) -> Result<HPFloat> {
    let sigma = scale(q)?;
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("spacing density needs y >= 0, got {y}")));
    }
    let (n, i) = (q.n as i64, q.i as i64);
    let work = bits + 16;
    let hs = HPFloat::from_f64(sigma, work);
    let ew = (HPFloat::from_f64(y, work) / &hs).exp();
    let z = HPFloat::one(work) - &ew;
    let f = hyp2f1_hp(i as f64, (n - i + 2) as f64, (n + 2) as f64, &z, work)?;
    let coeff = HPFloat::from_rational(&rat((n - i + 1) * (i - 1), n + 1), work);
    Ok((ew / hs * coeff * f).with_precision(bits))
}

/// The rational series for `E{D_i}` in units of σ, before multiplying by σ.
fn expected_series(n: i64, i: i64) -> BigRational {
    let pre = BigRational::new(factorial(n as u64), factorial((i - 2) as u64) * factorial((n - i + 1) as u64));
    let lead = rat(1, (i - 1) * (i - 1));
    let fi = factorial((i - 2) as u64);
    let sum = (1..=n - i).fold(BigRational::zero(), |acc, k| {
        // (n-i-k)! (i-2)! / (n-k)!
        acc + BigRational::new(fi.clone(), factorial_ratio((n - k) as u64, (n - i - k) as u64))
    });
    pre * (lead - sum)
}

/// Exact expected spacing from the rational factorial series. It reduces to
/// `σ n / ((i-1)(n-i+1))`, which the tests check as a rational identity.
pub fn logistic_expected_exact(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    let sigma = from_f64(scale(q)?)?;
    Ok(ClosedFormValue::exact(sigma * expected_series(q.n as i64, q.i as i64), bits))
}

/// Pieces of the second-moment assembly, all in units of σ² and before the
/// common prefactor `2 n! / ((i-2)! (n-i+1)!)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticSecondMomentTerms {
    /// `-H_{n-i} / (i-1)^2`
    pub out1: BigRational,
    /// the finite double sum over `k` and `l`
    pub out2_sum: BigRational,
    /// `Σ_k (-1)^k / k² (B_k - A_k)`, truncated
    pub out3_series: HPFloat,
    /// the rational coefficient `2^{1-i}/(i-1)` of `π²/6`
    pub out3c_term: BigRational,
    /// `∫_{-∞}^0 z² e^{-z} / (1+e^{-z})^i dz`, entering with weight 1/2
    pub out3d_term: HPFloat,
    pub k_terms_used: usize,
    /// magnitude of the last k-series term; bounds the alternating tail
    pub last_term: f64,
}

/// `E{D_i²}` and its assembly terms. The k-series stops once three
/// consecutive terms fall below `rel_tol/10` of the running total.
pub fn logistic_second_moment(
    q: &SpacingQuery,
    rel_tol: f64,
    bits: u32,
) -> Result<(HPFloat, LogisticSecondMomentTerms)> {
    let sigma = from_f64(scale(q)?)?;
    if !(rel_tol > 1e-30 && rel_tol < 1e-3) {
        return Err(Error::Domain(format!("rel_tol must lie in (1e-30, 1e-3), got {rel_tol}")));
    }
    let (n, i) = (q.n as i64, q.i as i64);

    let harmonic = (1..=n - i).fold(BigRational::zero(), |acc, k| acc + rat(1, k));
    let out1 = -harmonic / int((i - 1) * (i - 1));

    let fi2 = factorial((i - 2) as u64);
    let mut out2_sum = BigRational::zero();
    for k in 2..=n - i {
        for l in 1..k {
            let m = (k - 1 - l) as u64;
            // (m)! (i-2)! / (m+i)!
            let t = BigRational::new(fi2.clone(), factorial_ratio(m + i as u64, m));
            out2_sum += t / int(k);
        }
    }

    // bits lost inside each k-term: B_k and A_k are ~1/k but built from
    // pieces of size ~k^(i-1)
    let wb = bits + 18 * i as u32 + 64;
    let pi = HPFloat::pi(wb);
    let out3c_term = BigRational::new(BigInt::one(), (BigInt::one() << (i - 1) as usize) * (i - 1));
    let out3d_term = tail_integral(i, wb)?;
    let t4 = pi.sqr() / HPFloat::from_i64(6, wb) * HPFloat::from_rational(&out3c_term, wb)
        + &out3d_term / HPFloat::from_i64(2, wb);
    let fixed = HPFloat::from_rational(&(&out1 + &out2_sum), wb) + t4;

    let (out3_series, k_terms_used, last_term) = k_series(i, rel_tol, &fixed, wb)?;
    let braces = fixed + &out3_series;

    let pre = BigRational::new(
        BigInt::from(2) * factorial(n as u64),
        factorial((i - 2) as u64) * factorial((n - i + 1) as u64),
    ) * &sigma
        * &sigma;
    let value = (HPFloat::from_rational(&pre, wb) * braces).with_precision(bits);
    let terms = LogisticSecondMomentTerms {
        out1,
        out2_sum,
        out3_series: out3_series.with_precision(bits),
        out3c_term,
        out3d_term: out3d_term.with_precision(bits),
        k_terms_used,
        last_term,
    };
    Ok((value, terms))
}

/// `V{D_i} = E{D_i²} - E{D_i}²`.
pub fn logistic_variance(q: &SpacingQuery, rel_tol: f64, bits: u32) -> Result<HPFloat> {
    let (m2, _) = logistic_second_moment(q, rel_tol, bits)?;
    let e = logistic_expected_exact(q, bits)?.rational.expect("exact");
    Ok(m2 - HPFloat::from_rational(&(&e * &e), bits))
}

fn pow2(k: i64) -> BigInt {
    BigInt::one() << k as usize
}

/// `(2/(1-i)) { Li2(-1) + Σ_{J=1}^{i-2} (1/J) [ln 2 - Σ_{m=1}^{J-1} 1/(m 2^m)] }`.
fn tail_integral(i: i64, bits: u32) -> Result<HPFloat> {
    let ln2 = HPFloat::ln2(bits);
    let mut log_coeff = BigRational::zero();
    let mut rational = BigRational::zero();
    let mut partial = BigRational::zero();
    for j in 1..=i - 2 {
        log_coeff += rat(1, j);
        rational += &partial / int(j);
        partial += BigRational::new(BigInt::one(), pow2(j) * j);
    }
    let inner = dilog_f64(-1.0, bits)? + HPFloat::from_rational(&log_coeff, bits) * ln2
        - HPFloat::from_rational(&rational, bits);
    Ok(HPFloat::from_rational(&rat(2, 1 - i), bits) * inner)
}

/// `A_k` for `k < i-1`: a finite rational.
fn a_small(k: i64, i: i64) -> BigRational {
    let head = BigRational::new(pow2(i - 1) - 1, factorial((i - 1) as u64));
    let sum = (1..=k).fold(BigRational::zero(), |acc, j| {
        acc + BigRational::new(BigInt::one(), factorial(j as u64) * factorial((i - j - 1) as u64))
    });
    BigRational::new(factorial(k as u64) * factorial((i - k - 2) as u64), pow2(i - 1)) * (head - sum)
}

/// `Σ_{k>=1} (-1)^k / k² (B_k - A_k)` with
/// `B_k = ∫_1^∞ t^{-k} (1+t)^{-i} dt` and `A_k = ∫_0^1 t^k (1+t)^{-i} dt`,
/// each expressed through running sums, `ln 2` and factorial ratios.
fn k_series(i: i64, rel_tol: f64, fixed: &HPFloat, bits: u32) -> Result<(HPFloat, usize, f64)> {
    let hp = |x: i64| HPFloat::from_i64(x, bits);
    let ln2 = HPFloat::ln2(bits);
    let h = (1..i).fold(BigRational::zero(), |acc, j| acc + BigRational::new(BigInt::one(), pow2(j) * j));
    let fact_i1 = HPFloat::from_bigint(&factorial((i - 1) as u64), bits);
    // (Σ 1/(j 2^j) - ln 2) / (i-1)!
    let g = (HPFloat::from_rational(&h, bits) - ln2) / &fact_i1;
    let g_a = if i % 2 == 0 { g.clone() } else { -&g };
    let inv2 = HPFloat::from_rational(&BigRational::new(BigInt::one(), pow2(i - 1)), bits);
    let inv_fact_i = HPFloat::one(bits) / HPFloat::from_bigint(&factorial(i as u64), bits);

    let mut s_b = HPFloat::zero(bits);
    let mut t_b = inv_fact_i.clone();
    let mut r_k = fact_i1.clone();
    let mut s_a = HPFloat::zero(bits);
    let mut t_a = inv_fact_i;
    let mut q_k = fact_i1;

    let mut sum = HPFloat::zero(bits);
    let mut quiet = 0;
    let mut last = f64::NAN;
    for k in 1..=MAX_K_TERMS as i64 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if k >= 2 {
            s_b = s_b + &t_b * hp(sign);
            t_b = t_b * hp(k - 1) / hp(i + k - 1);
        }
        let b_k = &r_k * (&s_b * &inv2 + &g) * hp(sign);
        let a_k = if k < i - 1 {
            HPFloat::from_rational(&a_small(k, i), bits)
        } else {
            if k >= i {
                s_a = s_a + &t_a * hp(sign);
                t_a = t_a * hp(k + 1 - i) / hp(k + 1);
            }
            &q_k * (&s_a * &inv2 + &g_a) * hp(sign)
        };
        let term = (b_k - a_k) * hp(sign) / hp(k * k);
        sum = sum + &term;
        r_k = r_k * hp(i + k - 1) / hp(k);
        if k >= i - 1 {
            q_k = q_k * hp(k + 1) / hp(k + 2 - i);
        }

        last = term.to_f64().abs();
        let total = (fixed + &sum).to_f64().abs();
        if last < rel_tol * total / 10.0 {
            quiet += 1;
            if quiet == 3 {
                return Ok((sum, k as usize, last));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Evaluation { what: "logistic second-moment k-series", terms: MAX_K_TERMS, residual: last })
}
