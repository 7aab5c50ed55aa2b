//! The quantile-derivative estimator F^{-1}'(p_i)·Δp beside the exact mean,
//! along with its three evaluation paths.
use spacing::estimator::{estimate_closed, estimate_derivative, estimate_finite_difference};
use spacing::numerics::PrecisionPolicy;
use spacing::spacing_exact::{expected_spacing, SpacingQuery};

fn main() -> spacing::Result<()> {
    let policy = PrecisionPolicy::default();
    let n = 20;
    println!("logistic(0,1), n = {n}");
    println!("{:>3} {:>14} {:>14} {:>11}", "i", "exact", "estimator", "rel err");
    for i in 2..=n {
        let q = SpacingQuery::new("logistic(0,1)".parse()?, n, i)?;
        let exact = expected_spacing(&q, &policy)?.to_f64();
        let est = estimate_closed(&q)?.value;
        println!("{i:>3} {exact:>14.8} {est:>14.8} {:>11.3e}", (est - exact) / exact);
    }
    let q = SpacingQuery::new("rayleigh(1)".parse()?, 30, 12)?;
    println!(
        "\nrayleigh(1) n=30 i=12: closed {:.12} derivative {:.12} finite difference {:.12}",
        estimate_closed(&q)?.value,
        estimate_derivative(&q)?.value,
        estimate_finite_difference(&q)?.value
    );
    Ok(())
}
