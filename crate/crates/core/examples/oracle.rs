//! Nested quadrature of the spacing density, for families with no closed
//! form for the expected spacing.
use spacing::estimator::estimate_closed;
use spacing::simulate::{integrate_expected, integrate_second_moment, spacing_density};
use spacing::spacing_exact::SpacingQuery;

fn main() -> spacing::Result<()> {
    for spec in ["rayleigh(1)", "weibull(2,1)", "laplace(0,1)", "pareto(4,1)", "frechet(3,0,1)", "cauchy(0,1)"] {
        let q = SpacingQuery::new(spec.parse()?, 10, 5)?;
        let mean = integrate_expected(&q, 1e-10)?;
        let var = integrate_second_moment(&q, 1e-10)? - mean * mean;
        let est = estimate_closed(&q)?.value;
        println!("{spec:<15} n=10 i=5  E = {mean:.12}  V = {var:.6e}  estimator = {est:.12}");
    }
    let q = SpacingQuery::new("laplace(0,1)".parse()?, 6, 4)?;
    println!("\nlaplace(0,1) n=6 i=4 density:");
    for y in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        println!("  f({y:<4}) = {:.10e}", spacing_density(&q, y, 1e-14)?);
    }
    Ok(())
}
