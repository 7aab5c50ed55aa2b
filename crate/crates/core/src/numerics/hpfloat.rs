//! Precision-tagged binary floating point.
//!
//! `HPFloat` wraps an arbitrary-precision binary float together with the
//! precision it was produced at. Binary operations run at the larger of the
//! two operand precisions, so a value's precision is part of its identity and
//! results are reproducible bit-for-bit for a given input precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::Signed;

/// Smallest precision an `HPFloat` may carry.
pub const MIN_BITS: u32 = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone)]
struct CachedConstants {
    ln2: BigFloat,
    pi: BigFloat,
}

/// ln 2 and pi per precision level. Entries are immutable once inserted; a
/// racing second writer keeps the first entry.
fn constant_cache() -> &'static RwLock<HashMap<u32, CachedConstants>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, CachedConstants>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached_constants(bits: u32) -> CachedConstants {
    if let Some(c) = constant_cache()
        .read()
        .expect("constant cache poisoned")
        .get(&bits)
    {
        return c.clone();
    }
    let computed = with_consts(|cc| CachedConstants {
        ln2: cc.ln_2(bits as usize, RM),
        pi: cc.pi(bits as usize, RM),
    });
    let mut map = constant_cache().write().expect("constant cache poisoned");
    map.entry(bits).or_insert(computed).clone()
}

#[derive(Clone)]
pub struct HPFloat {
    value: BigFloat,
    bits: u32,
}

impl HPFloat {
    fn wrap(value: BigFloat, bits: u32) -> Self {
        debug_assert!(!value.is_nan(), "HPFloat produced NaN");
        HPFloat { value, bits }
    }

    fn clamp_bits(bits: u32) -> u32 {
        bits.max(MIN_BITS)
    }

    pub fn zero(bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(BigFloat::new(bits as usize), bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(BigFloat::from_f64(x, bits as usize), bits)
    }

    pub fn from_i64(x: i64, bits: u32) -> Self {
        Self::from_bigint(&BigInt::from(x), bits)
    }

    /// Converts an integer, rounding to `bits` if it is wider.
    pub fn from_bigint(x: &BigInt, bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        let (sign, words) = x.to_u64_digits();
        if words.is_empty() {
            return Self::zero(bits);
        }
        let sign = if sign == BigSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exp = 64 * words.len() as i32;
        let mut v = BigFloat::from_words(&words, sign, exp);
        if v.mantissa_max_bit_len().unwrap_or(0) > bits as usize {
            v.set_precision(bits as usize, RM).expect("set precision");
        }
        Self::wrap(v, bits)
    }

    /// Correctly rounded quotient of the exact numerator and denominator.
    pub fn from_rational(x: &BigRational, bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        let wide = (x.numer().bits().max(x.denom().bits()) as u32).max(bits) + 64;
        let num = Self::from_bigint(x.numer(), wide);
        let den = Self::from_bigint(x.denom(), wide);
        Self::wrap(num.value.div(&den.value, bits as usize, RM), bits)
    }

    pub fn precision(&self) -> u32 {
        self.bits
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        let mut v = self.value.clone();
        v.set_precision(bits as usize, RM).expect("set precision");
        Self::wrap(v, bits)
    }

    pub fn ln2(bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(cached_constants(bits).ln2, bits)
    }

    pub fn pi(bits: u32) -> Self {
        let bits = Self::clamp_bits(bits);
        Self::wrap(cached_constants(bits).pi, bits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Natural logarithm; `None` for non-positive input.
    pub fn ln(&self) -> Option<Self> {
        if self.is_zero() || self.is_negative() {
            return None;
        }
        let v = with_consts(|cc| self.value.ln(self.bits as usize, RM, cc));
        Some(Self::wrap(v, self.bits))
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.value.exp(self.bits as usize, RM, cc));
        Self::wrap(v, self.bits)
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self
            .value
            .powi(n.unsigned_abs() as usize, self.bits as usize, RM);
        let out = Self::wrap(p, self.bits);
        if n < 0 {
            Self::one(self.bits) / out
        } else {
            out
        }
    }

    /// `self^e` for positive `self`.
    pub fn powf(&self, e: &HPFloat) -> Option<Self> {
        let bits = self.bits.max(e.bits);
        let l = self.with_precision(bits).ln()?;
        Some((&l * e).exp())
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    /// Nearest `f64` (round-to-nearest on the leading 64 mantissa bits).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let (words, _, sign, exp, _) = self.value.as_raw_parts().expect("finite value");
        let top = words[words.len() - 1];
        let next = if words.len() > 1 {
            words[words.len() - 2]
        } else {
            0
        };
        // value = 0.top next ... * 2^exp
        let mant = top as f64 + next as f64 * 2f64.powi(-64);
        let out = ldexp(mant, exp as i64 - 64);
        if sign == Sign::Neg {
            -out
        } else {
            out
        }
    }

    /// Relative difference |a-b|/|b| as f64 (absolute when b = 0).
    pub fn rel_diff(&self, other: &HPFloat) -> f64 {
        let d = (self - other).abs();
        if other.is_zero() {
            d.to_f64()
        } else {
            (d / other.abs()).to_f64()
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 8;
        let mut v = self.value.clone();
        if bits < self.bits {
            v.set_precision(bits as usize, RM).expect("set precision");
        }
        with_consts(|cc| v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| self.to_f64().to_string())
    }
}

/// `x * 2^k` without intermediate overflow.
fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

impl fmt::Debug for HPFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPFloat({}, {} bits)", self.to_decimal(40), self.bits)
    }
}

impl fmt::Display for HPFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30) as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

/// Equality requires the same value and the same precision tag.
impl PartialEq for HPFloat {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.value == other.value
    }
}

impl PartialOrd for HPFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl Neg for &HPFloat {
    type Output = HPFloat;
    fn neg(self) -> HPFloat {
        HPFloat::wrap(-self.value.clone(), self.bits)
    }
}

impl Neg for HPFloat {
    type Output = HPFloat;
    fn neg(self) -> HPFloat {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&HPFloat> for &HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: &HPFloat) -> HPFloat {
                let bits = self.bits.max(rhs.bits);
                HPFloat::wrap(self.value.$method(&rhs.value, bits as usize, RM), bits)
            }
        }
        impl $trait<HPFloat> for HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: HPFloat) -> HPFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HPFloat> for HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: &HPFloat) -> HPFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<HPFloat> for &HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: HPFloat) -> HPFloat {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

/// Working precision as a function of the draw size `n`:
/// `base_bits + ceil(per_n_bits * n)`, never below 64.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPolicy {
    pub base_bits: u32,
    pub per_n_bits: BigRational,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            base_bits: 128,
            per_n_bits: BigRational::from_integer(2.into()),
        }
    }
}

impl PrecisionPolicy {
    pub fn new(base_bits: u32, per_n_bits: BigRational) -> crate::Result<Self> {
        if per_n_bits.is_negative() {
            return Err(crate::Error::Domain(
                "per_n_bits must be nonnegative".into(),
            ));
        }
        Ok(PrecisionPolicy {
            base_bits,
            per_n_bits,
        })
    }

    /// Policy with a fixed precision regardless of `n`.
    pub fn fixed(bits: u32) -> Self {
        PrecisionPolicy {
            base_bits: bits,
            per_n_bits: BigRational::from_integer(0.into()),
        }
    }

    /// Reads `SPACING_PRECISION_BITS` as a fixed override, if set and valid.
    pub fn from_env() -> Self {
        std::env::var("SPACING_PRECISION_BITS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .map(Self::fixed)
            .unwrap_or_default()
    }

    pub fn working_bits(&self, n: u32) -> u32 {
        let extra = (&self.per_n_bits * BigRational::from_integer(n.into())).ceil();
        let extra: u32 = extra.to_integer().try_into().unwrap_or(u32::MAX / 2);
        (self.base_bits.saturating_add(extra)).max(MIN_BITS)
    }
}
