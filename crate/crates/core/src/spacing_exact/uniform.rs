use num_rational::BigRational;

use super::{ClosedFormValue, SpacingQuery};
use crate::distributions::{Family, Params};
use crate::numerics::rational::{from_f64, int};
use crate::Result;

fn bounds(q: &SpacingQuery) -> Result<(f64, f64)> {
    q.require(Family::Uniform)?;
    match q.spec.params() {
        Params::Uniform { a, b } => Ok((a, b)),
        _ => unreachable!(),
    }
}

fn width(q: &SpacingQuery) -> Result<BigRational> {
    let (a, b) = bounds(q)?;
    Ok(from_f64(b)? - from_f64(a)?)
}

/// `(n/(b-a)) ((b-a-y)/(b-a))^(n-1)` on `[0, b-a]`; the same for every `i`.
pub fn uniform_spacing_density(q: &SpacingQuery, y: f64) -> Result<f64> {
    let (a, b) = bounds(q)?;
    let w = b - a;
    if !(0.0..=w).contains(&y) {
        return Ok(0.0);
    }
    Ok(q.n as f64 / w * ((w - y) / w).powi(q.n as i32 - 1))
}

/// `(b-a)/(n+1)`, exactly.
pub fn uniform_expected(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    let e = width(q)? / int(q.n as i64 + 1);
    Ok(ClosedFormValue::exact(e, bits))
}

/// `(n/(n+2)) ((b-a)/(n+1))^2`, exactly.
pub fn uniform_variance(q: &SpacingQuery, bits: u32) -> Result<ClosedFormValue> {
    let n = q.n as i64;
    let e = width(q)? / int(n + 1);
    let v = &e * &e * int(n) / int(n + 2);
    Ok(ClosedFormValue::exact(v, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionSpec;
    use crate::numerics::rational::rat;

    fn q(n: u32, i: u32) -> SpacingQuery {
        SpacingQuery::new(DistributionSpec::uniform(0.0, 1.0).unwrap(), n, i).unwrap()
    }

    #[test]
    fn density_examples() {
        assert_eq!(uniform_spacing_density(&q(2, 2), 0.5).unwrap(), 1.0);
        assert_eq!(uniform_spacing_density(&q(5, 3), 0.0).unwrap(), 5.0);
        assert_eq!(uniform_spacing_density(&q(7, 4), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn moments() {
        assert_eq!(uniform_expected(&q(9, 3), 64).unwrap().rational, Some(rat(1, 10)));
        assert_eq!(uniform_variance(&q(8, 3), 64).unwrap().rational, Some(rat(4, 405)));
        let e = uniform_expected(&q(20, 3), 64).unwrap().rational.unwrap();
        let v = uniform_variance(&q(20, 3), 64).unwrap().rational.unwrap();
        assert_eq!(v / (&e * &e), rat(10, 11));
    }

    #[test]
    fn shifted_interval() {
        let s = DistributionSpec::uniform(-1.5, 2.5).unwrap();
        let q = SpacingQuery::new(s, 3, 2).unwrap();
        assert_eq!(uniform_expected(&q, 64).unwrap().rational, Some(int(1)));
    }
}
