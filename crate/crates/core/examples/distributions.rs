//! Table of pdf, cdf and quantile values for every supported family, and a
//! sorted sample drawn by inverse transform.
use spacing::distributions::{Family, RandomStream};

fn main() -> spacing::Result<()> {
    println!("{:<10} {:>14} {:>14} {:>14} {:>14}", "family", "pdf(q.5)", "cdf(q.5)", "q(0.1)", "q(0.9)");
    for fam in Family::ALL {
        let d = fam.default_spec();
        let med = d.inv_cdf(0.5)?;
        println!(
            "{:<10} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            fam.keyword(),
            d.pdf(med),
            d.cdf(med),
            d.inv_cdf(0.1)?,
            d.inv_cdf(0.9)?
        );
    }
    let d: spacing::distributions::DistributionSpec = "weibull(2,1)".parse()?;
    let sample = d.sample_sorted(8, &mut RandomStream::new(1, 0));
    println!("\nweibull(2,1) sorted sample: {sample:.4?}");
    Ok(())
}
