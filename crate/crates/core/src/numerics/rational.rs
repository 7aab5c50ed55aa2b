//! Exact integer and rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Falling product `hi * (hi-1) * ... * (lo+1)`, i.e. `hi! / lo!` for `lo <= hi`.
pub fn factorial_ratio(hi: u64, lo: u64) -> BigInt {
    debug_assert!(lo <= hi);
    (lo + 1..=hi).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn from_bigint(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Exact rational value of an `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

/// Beta function at positive integers: `(a-1)! (b-1)! / (a+b-1)!`.
pub fn beta_int(a: i64, b: i64) -> Result<BigRational> {
    if a < 1 || b < 1 {
        return Err(Error::Domain(format!(
            "beta_int requires positive integers, got ({a}, {b})"
        )));
    }
    let (a, b) = (a as u64, b as u64);
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    // (small-1)! / [(large)(large+1)...(a+b-1)]
    let num = factorial(small - 1);
    let den = factorial_ratio(a + b - 1, large - 1);
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn beta_examples() {
        assert_eq!(beta_int(1, 1).unwrap(), int(1));
        assert_eq!(beta_int(2, 2).unwrap(), rat(1, 6));
        assert_eq!(beta_int(2, 3).unwrap(), rat(1, 12));
        assert_eq!(beta_int(3, 2).unwrap(), rat(1, 12));
    }

    #[test]
    fn beta_rejects_nonpositive() {
        assert!(matches!(beta_int(0, 3), Err(Error::Domain(_))));
        assert!(matches!(beta_int(2, -1), Err(Error::Domain(_))));
    }

    #[test]
    fn beta_matches_factorial_definition() {
        for a in 1..12u64 {
            for b in 1..12u64 {
                let direct =
                    BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1));
                assert_eq!(beta_int(a as i64, b as i64).unwrap(), direct);
            }
        }
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(factorial_ratio(7, 4), BigInt::from(210));
    }

    proptest! {
        #[test]
        fn rational_addition_is_exact(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, d in 1i64..10_000) {
            let sum = rat(a, b) + rat(c, d);
            let scaled = sum * int(b * d);
            prop_assert!(scaled.is_integer());
            prop_assert_eq!(scaled.to_integer(), BigInt::from(a * d + c * b));
        }
    }
}
