//! Fits min_i |estimator - mean| ≈ c / n² across several sample sizes.
use spacing::simulate::{error_curve, fit_min_error, SimConfig};

fn main() -> spacing::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000_000);
    for spec in ["rayleigh(1)", "cauchy(0,1)"] {
        let curves = [10u32, 20, 40]
            .iter()
            .map(|&n| error_curve(&SimConfig::new(spec.parse()?, n, trials, 7, 4)?))
            .collect::<spacing::Result<Vec<_>>>()?;
        let fit = fit_min_error(&curves)?;
        println!(
            "{spec:<12} slope {:.3} (rms {:.2}) c = {:.3} location {:.3}",
            fit.slope, fit.slope_residual, fit.value_coeff, fit.location_fraction
        );
        for p in &fit.points {
            println!("    n={:<3} argmin i={:<3} min |err| {:.3e}", p.n, p.argmin_i, p.min_abs_error);
        }
    }
    Ok(())
}
