//! Estimator error against simulated means, and the `c / n²` law for the
//! minimum of that error.

use crate::distributions::DistributionSpec;
use crate::estimator::estimate_closed;
use crate::spacing_exact::SpacingQuery;
use crate::{Error, Result};

use super::{run_simulation, SimConfig};

/// Monte Carlo noise floor of a mean spacing estimate at `trials` draws,
/// scaled as `trials^{-1/2}` from `1e-5` at `1e8` trials.
pub fn noise_floor(trials: u64) -> f64 {
    1e-5 * (1e8 / trials as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPoint {
    pub i: u32,
    pub simulated_mean: f64,
    pub simulated_se: f64,
    pub estimator_value: f64,
    /// `estimator - simulated_mean`.
    pub signed_error: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub spec: DistributionSpec,
    pub n: u32,
    pub trials: u64,
    /// One point per `i` in `2..=n`, in order.
    pub points: Vec<ErrorPoint>,
}

impl ErrorCurve {
    pub fn point(&self, i: u32) -> &ErrorPoint {
        assert!((2..=self.n).contains(&i), "index {i} outside [2, {}]", self.n);
        &self.points[(i - 2) as usize]
    }

    /// The point with the smallest `abs_error`; ties go to the lower index.
    pub fn argmin(&self) -> &ErrorPoint {
        self.points
            .iter()
            .fold(&self.points[0], |best, p| if p.abs_error < best.abs_error { p } else { best })
    }
}

/// Simulates `cfg` and sets each mean beside the closed-form estimator.
pub fn error_curve(cfg: &SimConfig) -> Result<ErrorCurve> {
    let acc = run_simulation(cfg)?;
    let points = (2..=cfg.n)
        .map(|i| {
            let q = SpacingQuery::new(cfg.spec, cfg.n, i)?;
            let est = estimate_closed(&q)?.value;
            let mean = acc.mean(i as usize);
            let signed = est - mean;
            Ok(ErrorPoint {
                i,
                simulated_mean: mean,
                simulated_se: acc.se(i as usize),
                estimator_value: est,
                signed_error: signed,
                abs_error: signed.abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorCurve { spec: cfg.spec, n: cfg.n, trials: cfg.trials, points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinErrPoint {
    pub n: u32,
    pub argmin_i: u32,
    pub min_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinErrFit {
    /// Least-squares slope of `ln(min abs_error)` against `ln n`.
    pub slope: f64,
    /// Root-mean-square residual of that fit.
    pub slope_residual: f64,
    /// `c` in `min abs_error ≈ c / n²`, the geometric mean of `min · n²`.
    pub value_coeff: f64,
    /// Mean of `argmin_i / n` across the curves.
    pub location_fraction: f64,
    pub points: Vec<MinErrPoint>,
}

/// Fits the minimum estimator error across curves taken at different `n`.
pub fn fit_min_error(curves: &[ErrorCurve]) -> Result<MinErrFit> {
    let mut ns: Vec<u32> = curves.iter().map(|c| c.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 distinct n, got {}", ns.len())));
    }
    let points: Vec<MinErrPoint> = curves
        .iter()
        .map(|c| {
            let p = c.argmin();
            MinErrPoint { n: c.n, argmin_i: p.i, min_abs_error: p.abs_error }
        })
        .collect();
    if curves.iter().zip(&points).all(|(c, p)| p.min_abs_error <= noise_floor(c.trials)) {
        return Err(Error::DegenerateFit("every minimum sits at the simulation noise floor".into()));
    }
    if points.iter().any(|p| p.min_abs_error <= 0.0) {
        return Err(Error::DegenerateFit("a minimum error is exactly zero".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.min_abs_error.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let log_c = points.iter().map(|p| (p.min_abs_error * (p.n as f64).powi(2)).ln()).sum::<f64>() / m;
    let location_fraction = points.iter().map(|p| p.argmin_i as f64 / p.n as f64).sum::<f64>() / m;
    Ok(MinErrFit {
        slope,
        slope_residual: (sse / m).sqrt(),
        value_coeff: log_c.exp(),
        location_fraction,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(n: u32, c: f64, at: u32) -> ErrorCurve {
        let points = (2..=n)
            .map(|i| {
                let e = c / (n as f64).powi(2) * (1.0 + (i as f64 - at as f64).abs());
                ErrorPoint {
                    i,
                    simulated_mean: 1.0,
                    simulated_se: 0.0,
                    estimator_value: 1.0 + e,
                    signed_error: e,
                    abs_error: e,
                }
            })
            .collect();
        ErrorCurve { spec: DistributionSpec::cauchy(0.0, 1.0).unwrap(), n, trials: u64::MAX, points }
    }

    #[test]
    fn recovers_inverse_square_law() {
        let curves: Vec<_> = [10u32, 20, 40, 80].iter().map(|&n| synthetic(n, 7.0, n / 2)).collect();
        let fit = fit_min_error(&curves).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!(fit.slope_residual < 1e-12);
        assert!((fit.value_coeff - 7.0).abs() < 1e-12);
        assert!((fit.location_fraction - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let two: Vec<_> = [10u32, 20, 20].iter().map(|&n| synthetic(n, 7.0, 2)).collect();
        assert!(matches!(fit_min_error(&two), Err(Error::DegenerateFit(_))));
        let mut flat: Vec<_> = [10u32, 20, 40].iter().map(|&n| synthetic(n, 1e-9, 2)).collect();
        flat.iter_mut().for_each(|c| c.trials = 1_000_000);
        assert!(matches!(fit_min_error(&flat), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn exponential_curve_sits_at_noise() {
        let cfg = SimConfig::new(DistributionSpec::exponential(1.0).unwrap(), 25, 1_000_000, 3, 4).unwrap();
        let c = error_curve(&cfg).unwrap();
        assert_eq!(c.points.len(), 24);
        assert_eq!(c.points.first().unwrap().i, 2);
        assert_eq!(c.points.last().unwrap().i, 25);
        assert!(c.point(13).abs_error < 5.0 * noise_floor(cfg.trials));
        assert!(c.points.iter().all(|p| p.abs_error >= 0.0));
    }

    #[test]
    fn noise_floor_scaling() {
        assert!((noise_floor(100_000_000) - 1e-5).abs() < 1e-20);
        assert!((noise_floor(1_000_000) - 1e-4).abs() < 1e-18);
    }
}
