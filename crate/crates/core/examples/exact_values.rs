//! Closed-form expected spacings: exact rationals for uniform, exponential and
//! logistic, high-precision floats for Gumbel.
use spacing::numerics::PrecisionPolicy;
use spacing::spacing_exact::{expected_spacing, spacing_variance, SpacingQuery};

fn main() -> spacing::Result<()> {
    let policy = PrecisionPolicy::default();
    for (spec, n, i) in [("uniform(0,1)", 9, 5), ("exp(1)", 5, 3), ("logistic(0,1)", 5, 3), ("logistic(0,1)", 12, 7)] {
        let q = SpacingQuery::new(spec.parse()?, n, i)?;
        let e = expected_spacing(&q, &policy)?;
        let v = spacing_variance(&q, &policy, 1e-10)?;
        let r = e.rational.as_ref().map(|r| r.to_string()).unwrap_or_default();
        println!("{spec:<14} n={n:<3} i={i:<3} E = {r:<24} {:.16e}  V = {:.10e}", e.to_f64(), v.to_f64());
    }
    for (n, i) in [(10, 2), (10, 10), (60, 30)] {
        let q = SpacingQuery::new("gumbel(0,1)".parse()?, n, i)?;
        let e = expected_spacing(&q, &policy)?;
        println!("gumbel(0,1)    n={n:<3} i={i:<3} E = {} ({} bits)", e.hp.to_decimal(30), policy.working_bits(n));
    }
    Ok(())
}
