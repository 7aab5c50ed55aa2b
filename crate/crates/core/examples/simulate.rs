//! Seeded Monte Carlo spacings and the estimator error curve. The result is
//! bit-identical for any worker count.
use spacing::simulate::{error_curve, noise_floor, run_simulation, SimConfig};

fn main() -> spacing::Result<()> {
    let cfg = SimConfig::new("exp(1)".parse()?, 8, 1_000_000, 42, 4)?;
    let acc = run_simulation(&cfg)?;
    println!("exp(1), n = 8, {} trials", acc.count());
    for i in 2..=8 {
        println!("  i={i}  mean {:.6} ± {:.1e}  exact {:.6}", acc.mean(i), acc.se(i), 1.0 / (9 - i) as f64);
    }

    let cfg = SimConfig::new("cauchy(0,1)".parse()?, 25, 1_000_000, 42, 4)?;
    let curve = error_curve(&cfg)?;
    println!("\ncauchy(0,1), n = 25, noise floor {:.1e}", noise_floor(cfg.trials));
    for p in &curve.points {
        println!("  i={:<3} simulated {:>12.6} estimator {:>12.6} |err| {:.3e}", p.i, p.simulated_mean, p.estimator_value, p.abs_error);
    }
    let m = curve.argmin();
    println!("minimum error {:.3e} at i = {}", m.abs_error, m.i);
    Ok(())
}
