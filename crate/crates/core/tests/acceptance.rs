//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Set `SPACING_ACCEPT` to a comma-separated list of criterion numbers to run
//! a subset.

use std::process::Command;
use std::time::Instant;

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use spacing::distributions::{DistributionSpec, Family};
use spacing::estimator::{estimate_closed, estimate_closed_rational, estimate_derivative};
use spacing::numerics::{quad_adaptive, quad_adaptive_scaled, PrecisionPolicy};
use spacing::simulate::{
    error_curve, fit_min_error, integrate_expected, integrate_second_moment, noise_floor, run_simulation,
    spacing_density, ErrorCurve, SimConfig,
};
use spacing::spacing_exact::{
    exp_expected, exp_spacing_density, exp_variance, expected_spacing, gumbel_expected_at, gumbel_expected_raw,
    gumbel_spacing_density, logistic_expected_exact, logistic_second_moment, logistic_spacing_density,
    spacing_variance, uniform_spacing_density, uniform_variance, SpacingQuery,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn q(spec: &str, n: u32, i: u32) -> SpacingQuery {
    SpacingQuery::new(spec.parse().unwrap(), n, i).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn logistic_identity() -> Outcome {
    let mut checked = 0;
    for n in 2..=60u32 {
        for i in 2..=n {
            let v = logistic_expected_exact(&q("logistic(0,1)", n, i), 64).unwrap();
            let want = rat(n as i64, (i as i64 - 1) * (n as i64 - i as i64 + 1));
            if v.rational.as_ref() != Some(&want) {
                return outcome(false, format!("n={n} i={i}: {:?} != {want}", v.rational));
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} pairs equal as exact rationals"))
}

fn closed_vs_oracle() -> Outcome {
    let policy = PrecisionPolicy::default();
    let mut worst_mean: f64 = 0.0;
    let mut worst_second: f64 = 0.0;
    for fam in ["uniform(0,1)", "exp(1)", "logistic(0,1)", "gumbel(0,1)"] {
        for n in 2..=12u32 {
            for i in 2..=n {
                let sq = q(fam, n, i);
                let e = expected_spacing(&sq, &policy).unwrap().to_f64();
                let oracle = integrate_expected(&sq, 1e-11 * e).unwrap();
                worst_mean = worst_mean.max(rel(oracle, e));
                let second = match sq.spec().family() {
                    Family::Uniform | Family::Exponential => {
                        let v = spacing_variance(&sq, &policy, 1e-12).unwrap().to_f64();
                        let vo = integrate_second_moment(&sq, 1e-11 * e * e).unwrap() - oracle * oracle;
                        Some(rel(vo, v))
                    }
                    Family::Logistic => {
                        let m = logistic_second_moment(&sq, 1e-12, 256).unwrap().0.to_f64();
                        Some(rel(integrate_second_moment(&sq, 1e-11 * m).unwrap(), m))
                    }
                    _ => None,
                };
                if let Some(r) = second {
                    worst_second = worst_second.max(r);
                }
            }
        }
    }
    outcome(
        worst_mean <= 1e-8 && worst_second <= 1e-6,
        format!("max rel error: means {worst_mean:.2e} (<= 1e-8), second moments {worst_second:.2e} (<= 1e-6)"),
    )
}

fn gumbel_dual_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=20u32 {
        for i in 2..=n {
            let sq = q("gumbel(0,1)", n, i);
            let a = gumbel_expected_at(&sq, 256).unwrap();
            let b = gumbel_expected_raw(&sq, 256).unwrap();
            worst = worst.max(a.rel_diff(&b));
        }
    }
    let agree = worst <= 1e-12;
    // deviation of each form from the quadrature oracle at n = 40, worst over i
    let oracles: Vec<f64> = (2..=40).map(|i| integrate_expected(&q("gumbel(0,1)", 40, i), 1e-13).unwrap()).collect();
    // a form "diverges" at a precision when it misses the oracle by more than
    // the oracle's own tolerance; the raw form must diverge where the final does not
    let noise = 1e-11;
    let mut diverges = true;
    let mut notes = vec![];
    for bits in [64u32, 72, 80, 96, 128, 256] {
        let (mut fin, mut raw): (f64, f64) = (0.0, 0.0);
        for (k, o) in oracles.iter().enumerate() {
            let sq = q("gumbel(0,1)", 40, k as u32 + 2);
            fin = fin.max(rel(gumbel_expected_at(&sq, bits).unwrap().to_f64(), *o));
            raw = raw.max(rel(gumbel_expected_raw(&sq, bits).unwrap().to_f64(), *o));
        }
        if raw > noise || fin > noise {
            diverges &= raw > fin && fin <= noise;
        }
        notes.push(format!("{bits}b raw {raw:.1e}/final {fin:.1e}"));
    }
    outcome(
        agree && diverges,
        format!(
            "n<=20 max rel diff {worst:.2e} (<= 1e-12); n=40 max rel deviation from oracle: {} (raw must diverge where final does not)",
            notes.join(", ")
        ),
    )
}

fn logistic_density() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, i) in [(5, 3), (10, 2), (10, 9)] {
        let sq = q("logistic(0,1)", n, i);
        for y in [0.1, 0.5, std::f64::consts::LN_2, 1.0, 2.0] {
            let closed = logistic_spacing_density(&sq, y, 128).unwrap().to_f64();
            let quad = spacing_density(&sq, y, 1e-14).unwrap();
            worst = worst.max(rel(closed, quad));
        }
    }
    outcome(worst <= 1e-8, format!("max rel error {worst:.2e} (<= 1e-8) over 15 points incl. y = ln 2"))
}

fn estimator_exactness() -> Outcome {
    let mut checked = 0;
    for n in 2..=100u32 {
        for i in 2..=n {
            for fam in ["exp(1)", "logistic(0,1)"] {
                let sq = q(fam, n, i);
                let est = estimate_closed_rational(&sq).unwrap().expect("rational estimator");
                let exact = if fam == "exp(1)" {
                    exp_expected(&sq, 64).unwrap()
                } else {
                    logistic_expected_exact(&sq, 64).unwrap()
                };
                if exact.rational.as_ref() != Some(&est) {
                    return outcome(false, format!("{fam} n={n} i={i}: {est} vs {:?}", exact.rational));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} (family, n, i) cases equal as exact rationals"))
}

fn curve(spec: &str, seed: u64) -> ErrorCurve {
    error_curve(&SimConfig::new(spec.parse().unwrap(), 25, 1_000_000, seed, workers()).unwrap()).unwrap()
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |w| w.get())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn desk_error_curves() -> Outcome {
    const SEED: u64 = 42;
    let n = 25u32;
    let bound = 5.0 * noise_floor(1_000_000);
    let mut parts = vec![];
    let mut pass = true;

    // (a) exact estimators sit at the noise floor in the middle indices
    for fam in ["exp(1)", "logistic(0,1)"] {
        let c = curve(fam, SEED);
        let mid: Vec<f64> = c.points.iter().filter(|p| 4 * p.i >= n && 4 * p.i <= 3 * n).map(|p| p.abs_error).collect();
        let m = median(mid);
        pass &= m <= bound;
        parts.push(format!("(a) {fam} median {m:.2e} <= {bound:.1e}"));
    }

    // (b) Pareto trails the mean in the right tail
    let c = curve("pareto(4,1)", SEED);
    let p = c.point(n);
    let r = p.signed_error / p.simulated_mean;
    pass &= (-0.25..=-0.10).contains(&r);
    parts.push(format!("(b) pareto rel signed {r:.3} in [-0.25,-0.10]"));

    // (c) Gumbel relative error at i = n
    let c = curve("gumbel(0,1)", SEED);
    let at_n = c.point(n).abs_error / c.point(n).simulated_mean;
    let at_2 = c.point(2).abs_error / c.point(2).simulated_mean;
    pass &= (0.03..=0.12).contains(&at_n);
    parts.push(format!("(c) gumbel rel abs at i=n {at_n:.4} in [0.03,0.12] (at i=2: {at_2:.4})"));

    // (d) Frechet crosses once near n/4
    let c = curve("frechet(3,0,1)", SEED);
    let signs: Vec<bool> = c.points.iter().map(|p| p.signed_error > 0.0).collect();
    let crossings: Vec<usize> = (1..signs.len()).filter(|&k| signs[k] != signs[k - 1]).map(|k| k + 2).collect();
    let near = crossings.len() == 1 && (crossings[0] as f64 - n as f64 / 4.0).abs() <= 0.15 * n as f64;
    pass &= near;
    parts.push(format!("(d) frechet sign changes entering i = {crossings:?}, n/4 = {}", n as f64 / 4.0));

    // (e) Laplace peaks at the midpoint
    let c = curve("laplace(0,1)", SEED);
    let peak = c.points.iter().max_by(|a, b| a.abs_error.total_cmp(&b.abs_error)).unwrap().i;
    let mid = [n / 2 + 1, n.div_ceil(2) + 1];
    let interior = peak > 2 && peak < n;
    pass &= interior && mid.contains(&peak);
    parts.push(format!("(e) laplace max abs_error at i = {peak}, midpoint {mid:?}"));

    outcome(pass, parts.join("; "))
}

fn table2_scaling() -> Outcome {
    const SEED: u64 = 7;
    let ns = [10u32, 25, 50, 100];
    let mut pass = true;
    let mut parts = vec![];
    for fam in ["cauchy(0,1)", "rayleigh(1)", "weibull(2,1)", "pareto(4,1)"] {
        let spec: DistributionSpec = fam.parse().unwrap();
        let curves: Vec<ErrorCurve> = ns
            .iter()
            .map(|&n| error_curve(&SimConfig::new(spec, n, 10_000_000, SEED, workers()).unwrap()).unwrap())
            .collect();
        let fit = fit_min_error(&curves).unwrap();
        match spec.family() {
            Family::Pareto => {
                let at: Vec<u32> = fit.points.iter().map(|p| p.argmin_i).collect();
                pass &= at.iter().all(|&i| i == 2);
                parts.push(format!("pareto argmin {at:?} (all 2)"));
            }
            fam => {
                let ok = (fit.slope + 2.0).abs() <= 0.3;
                pass &= ok;
                let mut s = format!("{fam} slope {:.3} (-2 +/- 0.3)", fit.slope);
                if fam == Family::Cauchy {
                    let in_band = (fit.value_coeff - 7.29).abs() <= 0.3 * 7.29;
                    pass &= in_band;
                    s += &format!(", c {:.3} (7.29 +/- 30%)", fit.value_coeff);
                }
                s += &format!(", location {:.3}", fit.location_fraction);
                parts.push(s);
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_spacing")).args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let mut same = true;
    for fam in ["uniform(0,1)", "gumbel(0,1)", "cauchy(0,1)", "pareto(4,1)"] {
        let spec: DistributionSpec = fam.parse().unwrap();
        let a = run_simulation(&SimConfig::new(spec, 12, 500_000, 99, 1).unwrap()).unwrap();
        let b = run_simulation(&SimConfig::new(spec, 12, 500_000, 99, 8).unwrap()).unwrap();
        same &= a == b;
    }
    let commands: [&[&str]; 3] = [
        &["simulate", "--dist", "weibull(2,1)", "--n", "10", "--all-i", "--trials", "300000", "--seed", "5"],
        &["error-curve", "--dist", "laplace(0,1)", "--n", "9", "--trials", "300000", "--seed", "5", "--format", "json"],
        &["fit-min-error", "--dist", "cauchy(0,1)", "--n-list", "10,12,14", "--trials", "200000", "--seed", "5"],
    ];
    for c in commands {
        let one = cli(&[c, &["--workers", "1"]].concat());
        let eight = cli(&[c, &["--workers", "8"]].concat());
        same &= one == eight;
    }
    outcome(same, "run_simulation (4 families) and simulate/error-curve/fit-min-error bytes at workers 1 vs 8".into())
}

fn check(runner: &mut TestRunner, name: &str, strat: impl Strategy<Value = (usize, f64)>, f: impl Fn(DistributionSpec, f64) -> std::result::Result<(), TestCaseError>) -> std::result::Result<(), String> {
    runner
        .run(&strat, |(k, x)| f(Family::ALL[k].default_spec(), x))
        .map_err(|e| format!("{name}: {e}"))
}

fn property_suites() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 512, failure_persistence: None, ..Config::default() });
    let fam = 0usize..10;
    let mut failures = vec![];
    let mut record = |r: std::result::Result<(), String>| {
        if let Err(e) = r {
            failures.push(e);
        }
    };

    record(check(&mut runner, "quantile round trip", (fam.clone(), 1e-6f64..1.0 - 1e-6), |s, p| {
        let x = s.inv_cdf(p).unwrap();
        prop_assert!((s.cdf(x) - p).abs() <= 1e-12, "{s} p={p}");
        Ok(())
    }));

    record(check(&mut runner, "derivative vs finite difference", (fam.clone(), 0.01f64..0.99), |s, p| {
        if s.family() == Family::Laplace && (p - 0.5).abs() < 1e-5 {
            return Ok(());
        }
        let h = 1e-6 * p.min(1.0 - p);
        let fd = (s.inv_cdf(p + h).unwrap() - s.inv_cdf(p - h).unwrap()) / (2.0 * h);
        let d = s.inv_cdf_deriv(p).unwrap();
        prop_assert!(rel(fd, d) <= 1e-4, "{s} p={p}: {fd} vs {d}");
        Ok(())
    }));

    record(check(&mut runner, "two-path estimator", (fam.clone(), 0.0f64..1.0), |s, t| {
        let n = 2 + (t * 198.0) as u32;
        for i in 2..=n {
            let sq = SpacingQuery::new(s, n, i).unwrap();
            let a = estimate_closed(&sq).unwrap().value;
            let b = estimate_derivative(&sq).unwrap().value;
            prop_assert!(rel(b, a) <= 1e-12, "{s} n={n} i={i}");
        }
        Ok(())
    }));

    // family density normalization
    for spec in Family::ALL.map(Family::default_spec) {
        let (lo, hi) = spec.support();
        let total = quad_adaptive(|x| spec.pdf(x), lo, hi, 1e-11).unwrap();
        if (total - 1.0).abs() > 1e-8 {
            failures.push(format!("pdf of {spec} integrates to {total}"));
        }
    }

    // closed-form spacing density normalization
    for (n, i) in [(2u32, 2u32), (5, 3), (10, 2), (10, 9)] {
        let cases: [(&str, Box<dyn Fn(&SpacingQuery, f64) -> f64>); 4] = [
            ("uniform(0,1)", Box::new(|q, y| uniform_spacing_density(q, y).unwrap())),
            ("exp(1)", Box::new(|q, y| exp_spacing_density(q, y).unwrap())),
            ("logistic(0,1)", Box::new(|q, y| logistic_spacing_density(q, y, 128).unwrap().to_f64())),
            ("gumbel(0,1)", Box::new(|q, y| gumbel_spacing_density(q, y).unwrap())),
        ];
        for (fam, density) in cases {
            let sq = q(fam, n, i);
            let (lo, hi) = sq.spec().support();
            let scale = estimate_closed(&sq).unwrap().value;
            let total = quad_adaptive_scaled(|y| density(&sq, y), 0.0, hi - lo, 1e-11, scale).unwrap().value;
            if (total - 1.0).abs() > 1e-8 {
                failures.push(format!("{fam} n={n} i={i} spacing density integrates to {total}"));
            }
        }
    }

    // variance nonnegativity: closed forms and simulation
    let policy = PrecisionPolicy::default();
    for n in [2u32, 5, 17, 40] {
        for i in 2..=n {
            for fam in ["uniform(0,1)", "exp(1)", "logistic(0,1)"] {
                let v = spacing_variance(&q(fam, n, i), &policy, 1e-6).unwrap().to_f64();
                if !(v >= 0.0) {
                    failures.push(format!("{fam} n={n} i={i} variance {v}"));
                }
            }
            let u = uniform_variance(&q("uniform(0,1)", n, i), 64).unwrap().to_f64();
            let e = exp_variance(&q("exp(1)", n, i), 64).unwrap().to_f64();
            if !(u > 0.0 && e > 0.0) {
                failures.push(format!("n={n} i={i} nonpositive variance"));
            }
        }
    }
    for spec in Family::ALL.map(Family::default_spec) {
        let acc = run_simulation(&SimConfig::new(spec, 8, 20_000, 3, 1).unwrap()).unwrap();
        if (2..=8).any(|i| !(acc.variance(i) >= 0.0)) {
            failures.push(format!("{spec} simulated variance negative"));
        }
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "round trip 1e-12, derivative 1e-4, normalization 1e-8, variance >= 0, two-path 1e-12 across ten families".into()
    } else {
        failures.join("; ")
    };
    outcome(pass, detail)
}

fn main() {
    let only: Option<Vec<u32>> = std::env::var("SPACING_ACCEPT")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "logistic expected spacing equals its estimator exactly", logistic_identity),
        (2, "closed forms match the quadrature oracle", closed_vs_oracle),
        (3, "gumbel final and raw forms", gumbel_dual_form),
        (4, "logistic density continuation matches quadrature", logistic_density),
        (5, "estimator exact for exponential and logistic", estimator_exactness),
        (6, "desk-scale error curves", desk_error_curves),
        (7, "minimum-error scaling (slow)", table2_scaling),
        (8, "determinism across worker counts", determinism),
        (9, "property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, name, f) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&k)) {
            continue;
        }
        let t = Instant::now();
        let r = f();
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {k} {verdict} [{:.1}s] {name}: {}", t.elapsed().as_secs_f64(), r.detail);
        if !r.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
