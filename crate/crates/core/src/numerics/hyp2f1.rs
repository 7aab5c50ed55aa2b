//! Gauss hypergeometric function for real parameters and real `z < 1`.
//!
//! Negative `z` goes through the Pfaff transformation
//! `2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`, which lands in `[0, 1)`.
//! On `[0, 1/2]` the Gauss series is summed directly. Closer to 1 the series
//! stalls, so for positive-integer `a`, `b` and integer `c` the logarithmic
//! connection formulas around `1 - w` are used instead.

use num_traits::ToPrimitive;

use super::hpfloat::HPFloat;
use super::rational::factorial;
use crate::{Error, Result};

/// Term cap for every series in this module.
pub const MAX_TERMS: usize = 100_000;

const SERIES_LIMIT: f64 = 0.5;

/// `2F1(a, b; c; z)` for `z < 1`, to `bits` of precision.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, bits: u32) -> Result<HPFloat> {
    if !z.is_finite() {
        return Err(Error::Domain(format!(
            "hyp2f1 argument must be finite, got {z}"
        )));
    }
    hyp2f1_hp(a, b, c, &HPFloat::from_f64(z, bits), bits)
}

/// As [`hyp2f1`] with a high-precision argument.
pub fn hyp2f1_hp(a: f64, b: f64, c: f64, z: &HPFloat, bits: u32) -> Result<HPFloat> {
    check_params(a, b, c)?;
    let one = HPFloat::one(bits);
    if z >= &one {
        return Err(Error::Domain(format!(
            "hyp2f1 requires z < 1, got {}",
            z.to_f64()
        )));
    }
    // guard bits for the transformations below
    let work = bits + 32;
    let z = z.with_precision(work);
    if z.is_negative() {
        let one = HPFloat::one(work);
        let one_minus_z = &one - &z;
        let w = &z / &(&z - &one);
        let scale = one_minus_z
            .powf(&HPFloat::from_f64(-a, work))
            .expect("1 - z > 0");
        // 1 - w computed without cancellation
        let s = &one / &one_minus_z;
        let f = unit_interval(a, c - b, c, &w, &s, work)?;
        Ok((scale * f).with_precision(bits))
    } else {
        let s = HPFloat::one(work) - &z;
        Ok(unit_interval(a, b, c, &z, &s, work)?.with_precision(bits))
    }
}

/// Plain Gauss series `sum (a)_k (b)_k / ((c)_k k!) z^k`, valid for `|z| < 1`.
/// No transformation is applied; used to cross-check the Pfaff route.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64, bits: u32) -> Result<HPFloat> {
    check_params(a, b, c)?;
    if !(z.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Gauss series requires |z| < 1, got {z}"
        )));
    }
    gauss_series(a, b, c, &HPFloat::from_f64(z, bits + 16), bits + 16)
        .map(|v| v.with_precision(bits))
}

fn check_params(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::Domain("hyp2f1 parameters must be finite".into()));
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
    }
    Ok(())
}

// `s` is `1 - w`, supplied by the caller so it can be formed accurately
fn unit_interval(a: f64, b: f64, c: f64, w: &HPFloat, s: &HPFloat, bits: u32) -> Result<HPFloat> {
    let wf = w.to_f64();
    if wf <= SERIES_LIMIT {
        return gauss_series(a, b, c, w, bits);
    }
    match IntegerParams::new(a, b, c) {
        Some(p) => p.connection(s, bits),
        None => gauss_series(a, b, c, w, bits),
    }
}

fn gauss_series(a: f64, b: f64, c: f64, z: &HPFloat, bits: u32) -> Result<HPFloat> {
    let (ha, hb, hc) = (
        HPFloat::from_f64(a, bits),
        HPFloat::from_f64(b, bits),
        HPFloat::from_f64(c, bits),
    );
    let zf = z.to_f64().abs();
    let eps = 2f64.powi(-(bits as i32) - 2);
    let mut term = HPFloat::one(bits);
    let mut sum = HPFloat::one(bits);
    let mut residual = 1.0;
    for k in 0..MAX_TERMS {
        let kf = HPFloat::from_i64(k as i64, bits);
        let num = (&ha + &kf) * (&hb + &kf);
        let den = (&hc + &kf) * (&kf + HPFloat::one(bits));
        term = term * num / den * z;
        if term.is_zero() {
            return Ok(sum);
        }
        sum = &sum + &term;
        let kk = (k + 1) as f64;
        let ratio = ((a + kk) * (b + kk) / ((c + kk) * (kk + 1.0))).abs() * zf;
        let bound = ratio.max(zf);
        let s = sum.to_f64().abs();
        residual = term.to_f64().abs() / if s > 0.0 { s } else { 1.0 };
        if bound < 1.0 && kk > (a.abs() + b.abs()) && residual * bound / (1.0 - bound) < eps {
            return Ok(sum);
        }
    }
    Err(Error::Evaluation {
        what: "hypergeometric series",
        terms: MAX_TERMS,
        residual,
    })
}

/// Integer parameters `a, b >= 1`, integer `c >= 1`: the case where
/// `c - a - b` is an integer and the `1 - w` connection has log terms.
struct IntegerParams {
    a: i64,
    b: i64,
    c: i64,
}

fn as_int(x: f64) -> Option<i64> {
    (x == x.round() && x.abs() < 1e9).then_some(x as i64)
}

fn fact_hp(n: i64, bits: u32) -> HPFloat {
    HPFloat::from_bigint(&factorial(n as u64), bits)
}

impl IntegerParams {
    fn new(a: f64, b: f64, c: f64) -> Option<Self> {
        let (a, b, c) = (as_int(a)?, as_int(b)?, as_int(c)?);
        (a >= 1 && b >= 1 && c >= 1).then_some(IntegerParams { a, b, c })
    }

    /// Harmonic number H_k at working precision, computed incrementally by callers.
    fn harmonic(k: i64, bits: u32) -> HPFloat {
        let mut h = HPFloat::zero(bits);
        for j in 1..=k {
            h = h + HPFloat::one(bits) / HPFloat::from_i64(j, bits);
        }
        h
    }

    fn connection(&self, s: &HPFloat, bits: u32) -> Result<HPFloat> {
        let IntegerParams { a, b, c } = *self;
        // magnitude of the leading factorial ratio sets the cancellation budget
        let guard = (factorial((c - 1) as u64).bits() as u32)
            .saturating_sub((factorial((a - 1) as u64) * factorial((b - 1) as u64)).bits() as u32);
        let work = bits + 64 + guard;
        let s = s.with_precision(work);
        let ln_s = s
            .ln()
            .ok_or_else(|| Error::Domain("hyp2f1: w must be < 1".into()))?;
        let m = c - a - b;
        let out = if m >= 0 {
            self.connection_nonneg(m, &s, &ln_s, work)?
        } else {
            self.connection_neg(-m, &s, &ln_s, work)?
        };
        Ok(out.with_precision(bits))
    }

    /// c = a + b + m, m >= 0.
    fn connection_nonneg(&self, m: i64, s: &HPFloat, ln_s: &HPFloat, bits: u32) -> Result<HPFloat> {
        let (a, b, c) = (self.a, self.b, self.c);
        let int = |x: i64| HPFloat::from_i64(x, bits);

        let mut finite = HPFloat::zero(bits);
        if m > 0 {
            let lead = fact_hp(m - 1, bits) * fact_hp(c - 1, bits)
                / (fact_hp(a + m - 1, bits) * fact_hp(b + m - 1, bits));
            let mut coeff = HPFloat::one(bits);
            let mut s_pow = HPFloat::one(bits);
            for n in 0..m {
                finite = finite + &coeff * &s_pow;
                // (a)_n (b)_n / (n! (1-m)_n)
                if n + 1 < m {
                    coeff = coeff * int(a + n) * int(b + n) / (int(n + 1) * int(1 - m + n));
                }
                s_pow = s_pow * s;
            }
            finite = lead * finite;
        }

        // (w-1)^m = (-s)^m
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let lead = int(sign) * s.powi(m) * fact_hp(c - 1, bits)
            / (fact_hp(a - 1, bits) * fact_hp(b - 1, bits));
        // psi combination: -H_n - H_{n+m} + H_{a+n+m-1} + H_{b+n+m-1}
        let mut h_n = HPFloat::zero(bits);
        let mut h_nm = Self::harmonic(m, bits);
        let mut h_a = Self::harmonic(a + m - 1, bits);
        let mut h_b = Self::harmonic(b + m - 1, bits);
        let mut coeff = HPFloat::one(bits) / fact_hp(m, bits);
        let mut s_pow = HPFloat::one(bits);
        let tail = self.log_series(
            |n, acc: &mut HPFloat| {
                let bracket = ln_s - &h_n - &h_nm + &h_a + &h_b;
                let term = &coeff * &s_pow * bracket;
                *acc = &*acc + &term;
                coeff = &coeff * int(a + m + n) * int(b + m + n) / (int(n + 1) * int(n + m + 1));
                s_pow = &s_pow * s;
                h_n = &h_n + HPFloat::one(bits) / int(n + 1);
                h_nm = &h_nm + HPFloat::one(bits) / int(n + m + 1);
                h_a = &h_a + HPFloat::one(bits) / int(a + n + m);
                h_b = &h_b + HPFloat::one(bits) / int(b + n + m);
                term
            },
            s,
            bits,
        )?;
        Ok(finite - lead * tail)
    }

    /// c = a + b - m, m > 0.
    fn connection_neg(&self, m: i64, s: &HPFloat, ln_s: &HPFloat, bits: u32) -> Result<HPFloat> {
        let (a, b, c) = (self.a, self.b, self.c);
        let int = |x: i64| HPFloat::from_i64(x, bits);

        let lead = fact_hp(m - 1, bits) * fact_hp(c - 1, bits)
            / (fact_hp(a - 1, bits) * fact_hp(b - 1, bits));
        let mut finite = HPFloat::zero(bits);
        let mut coeff = HPFloat::one(bits);
        let mut s_pow = HPFloat::one(bits);
        for n in 0..m {
            finite = finite + &coeff * &s_pow;
            // (a-m)_n (b-m)_n / (n! (1-m)_n)
            if n + 1 < m {
                coeff = coeff * int(a - m + n) * int(b - m + n) / (int(n + 1) * int(1 - m + n));
            }
            s_pow = s_pow * s;
        }
        let finite = lead * s.powi(-m) * finite;

        // 1/Gamma(a-m) or 1/Gamma(b-m) vanishes at non-positive integers
        if a - m <= 0 || b - m <= 0 {
            return Ok(finite);
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let lead = int(sign) * fact_hp(c - 1, bits)
            / (fact_hp(a - m - 1, bits) * fact_hp(b - m - 1, bits));
        // psi combination: -H_n - H_{n+m} + H_{a+n-1} + H_{b+n-1}
        let mut h_n = HPFloat::zero(bits);
        let mut h_nm = Self::harmonic(m, bits);
        let mut h_a = Self::harmonic(a - 1, bits);
        let mut h_b = Self::harmonic(b - 1, bits);
        let mut coeff = HPFloat::one(bits) / fact_hp(m, bits);
        let mut s_pow = HPFloat::one(bits);
        let tail = self.log_series(
            |n, acc: &mut HPFloat| {
                let bracket = ln_s - &h_n - &h_nm + &h_a + &h_b;
                let term = &coeff * &s_pow * bracket;
                *acc = &*acc + &term;
                coeff = &coeff * int(a + n) * int(b + n) / (int(n + 1) * int(n + m + 1));
                s_pow = &s_pow * s;
                h_n = &h_n + HPFloat::one(bits) / int(n + 1);
                h_nm = &h_nm + HPFloat::one(bits) / int(n + m + 1);
                h_a = &h_a + HPFloat::one(bits) / int(a + n);
                h_b = &h_b + HPFloat::one(bits) / int(b + n);
                term
            },
            s,
            bits,
        )?;
        Ok(finite - lead * tail)
    }

    /// Drives a series in powers of `s <= 1/2` whose coefficients grow at most
    /// polynomially; stops once the terms are below the working epsilon for
    /// several consecutive indices after the coefficients have peaked.
    fn log_series(
        &self,
        mut step: impl FnMut(i64, &mut HPFloat) -> HPFloat,
        s: &HPFloat,
        bits: u32,
    ) -> Result<HPFloat> {
        let eps = 2f64.powi(-(bits as i32));
        let sf = s.to_f64();
        let peak = (self.a + self.b + self.c) as f64;
        let mut acc = HPFloat::zero(bits);
        let mut quiet = 0;
        let mut residual = 1.0;
        for n in 0..MAX_TERMS as i64 {
            let term = step(n, &mut acc);
            let scale = acc.to_f64().abs().max(f64::MIN_POSITIVE);
            residual = term.to_f64().abs() / scale;
            if n as f64 > peak && residual * sf.max(0.0) < eps {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(acc);
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::Evaluation {
            what: "hypergeometric connection series",
            terms: MAX_TERMS,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &HPFloat, expected: &str, tol: f64) {
        let e: f64 = expected.parse().unwrap();
        let got = x.to_f64();
        assert!(((got - e) / e).abs() < tol, "got {got}, expected {e}");
    }

    #[test]
    fn zero_argument_is_one() {
        let v = hyp2f1(2.0, 2.0, 4.0, 0.0, 128).unwrap();
        assert_eq!(v.to_f64(), 1.0);
    }

    #[test]
    fn log_closed_forms() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let v = hyp2f1(1.0, 1.0, 2.0, 0.5, 200).unwrap();
        let oracle = (HPFloat::ln2(200) * HPFloat::from_i64(2, 200)).to_f64();
        assert!((v.to_f64() - oracle).abs() < 1e-15);
        assert!(v.rel_diff(&(HPFloat::ln2(200) * HPFloat::from_i64(2, 200))) < 1e-55);
        let v = hyp2f1(1.0, 1.0, 2.0, -1.0, 200).unwrap();
        assert!(v.rel_diff(&HPFloat::ln2(200)) < 1e-55);
    }

    #[test]
    fn reference_values() {
        let cases = [
            (
                3.0,
                5.0,
                7.0,
                -1.0,
                "0.2106466687737485202714182999247526762401",
            ),
            (
                3.0,
                8.0,
                10.0,
                -20.0,
                "0.0002421824808007091386369347480415226748434",
            ),
            (
                2.0,
                2.0,
                4.0,
                -1000.0,
                "0.0000295354337332431061583473519829974493372",
            ),
            (
                3.0,
                4.0,
                7.0,
                0.9,
                "20.34623240363025791566620616047843411289",
            ),
            (
                4.0,
                4.0,
                5.0,
                0.9,
                "1275.399572668836789001566886421677401569",
            ),
            (
                2.0,
                3.0,
                5.0,
                0.95,
                "13.20881946690118229706027572542449887761",
            ),
            (
                2.0,
                2.0,
                7.0,
                0.97,
                "2.365047812409610066660072153023556876148",
            ),
            (
                5.0,
                3.0,
                9.0,
                0.999,
                "52.76603460166047621394834321888033169862",
            ),
            (3.0, 7.0, 5.0, 0.8, "1525.0"),
            (
                2.0,
                9.0,
                12.0,
                -5000.0,
                "0.00000007852430833230241969208567541273751703952",
            ),
        ];
        for (a, b, c, z, want) in cases {
            let v = hyp2f1(a, b, c, z, 160).unwrap();
            close(&v, want, 1e-14);
        }
    }

    #[test]
    fn far_negative_argument_keeps_precision() {
        // -ln(1-z)/z at z = -1e30
        let v = hyp2f1(1.0, 1.0, 2.0, -1e30, 128).unwrap();
        let want = (1e30f64).ln() / 1e30;
        assert!(((v.to_f64() - want) / want).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hyp2f1(1.0, 1.0, -2.0, 0.1, 128),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hyp2f1(1.0, 1.0, 2.0, 1.0, 128),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hyp2f1_series(1.0, 1.0, 2.0, -1.5, 128),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_integer_near_one_hits_cap() {
        let r = hyp2f1(0.5, 1.5, 1.25, 1.0 - 1e-9, 128);
        assert!(matches!(r, Err(Error::Evaluation { .. })));
    }

    #[test]
    fn pfaff_agrees_with_direct_series() {
        for &z in &[-0.9, -0.5, -0.1] {
            for &(a, b, c) in &[(2.0, 3.0, 6.0), (0.5, 1.5, 2.5), (4.0, 7.0, 12.0)] {
                let bits = 128;
                let direct = hyp2f1_series(a, b, c, z, bits).unwrap();
                let pfaff = hyp2f1(a, b, c, z, bits).unwrap();
                assert!(direct.rel_diff(&pfaff) < 2f64.powi(-(bits as i32 - 8)));
            }
        }
    }
}
