//! The ten invertible-cdf families: density, cdf, quantile function, quantile
//! derivative and sorted inverse-transform sampling.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Uniform,
    Exponential,
    Logistic,
    Gumbel,
    Laplace,
    Cauchy,
    Pareto,
    Rayleigh,
    Weibull,
    Frechet,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Cauchy,
        Family::Exponential,
        Family::Frechet,
        Family::Gumbel,
        Family::Laplace,
        Family::Logistic,
        Family::Pareto,
        Family::Rayleigh,
        Family::Uniform,
        Family::Weibull,
    ];

    /// Keyword used in the distribution grammar, e.g. `exp` or `gumbel`.
    pub fn keyword(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::Exponential => "exp",
            Family::Logistic => "logistic",
            Family::Gumbel => "gumbel",
            Family::Laplace => "laplace",
            Family::Cauchy => "cauchy",
            Family::Pareto => "pareto",
            Family::Rayleigh => "rayleigh",
            Family::Weibull => "weibull",
            Family::Frechet => "frechet",
        }
    }

    fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Uniform | Family::Pareto | Family::Weibull => &["a", "b"],
            Family::Exponential => &["lambda"],
            Family::Logistic | Family::Gumbel | Family::Laplace | Family::Cauchy => &["mu", "sigma"],
            Family::Rayleigh => &["sigma"],
            Family::Frechet => &["lambda", "mu", "sigma"],
        }
    }

    /// The family with the default parameters used throughout the experiments:
    /// zero location and unit scale, exponential rate 1, Pareto (4, 1),
    /// Weibull (5, 1.5) and Frechet (3, 0, 1).
    pub fn default_spec(self) -> DistributionSpec {
        let p = match self {
            Family::Uniform => Params::Uniform { a: 0.0, b: 1.0 },
            Family::Exponential => Params::Exponential { lambda: 1.0 },
            Family::Logistic => Params::Logistic { mu: 0.0, sigma: 1.0 },
            Family::Gumbel => Params::Gumbel { mu: 0.0, sigma: 1.0 },
            Family::Laplace => Params::Laplace { mu: 0.0, sigma: 1.0 },
            Family::Cauchy => Params::Cauchy { mu: 0.0, sigma: 1.0 },
            Family::Pareto => Params::Pareto { a: 4.0, b: 1.0 },
            Family::Rayleigh => Params::Rayleigh { sigma: 1.0 },
            Family::Weibull => Params::Weibull { a: 5.0, b: 1.5 },
            Family::Frechet => Params::Frechet { lambda: 3.0, mu: 0.0, sigma: 1.0 },
        };
        DistributionSpec(p)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let fam = match key.as_str() {
            "uniform" => Family::Uniform,
            "exp" | "exponential" => Family::Exponential,
            "logistic" => Family::Logistic,
            "gumbel" => Family::Gumbel,
            "laplace" => Family::Laplace,
            "cauchy" => Family::Cauchy,
            "pareto" => Family::Pareto,
            "rayleigh" => Family::Rayleigh,
            "weibull" => Family::Weibull,
            "frechet" => Family::Frechet,
            _ => return Err(Error::InvalidDistribution(format!("unknown family `{}`", s.trim()))),
        };
        Ok(fam)
    }
}

/// Raw parameter record. Pass it through [`DistributionSpec::new`] to validate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Uniform { a: f64, b: f64 },
    Exponential { lambda: f64 },
    Logistic { mu: f64, sigma: f64 },
    Gumbel { mu: f64, sigma: f64 },
    Laplace { mu: f64, sigma: f64 },
    Cauchy { mu: f64, sigma: f64 },
    /// shape `a`, scale `b`
    Pareto { a: f64, b: f64 },
    Rayleigh { sigma: f64 },
    /// shape `a`, scale `b`
    Weibull { a: f64, b: f64 },
    /// shape `lambda`, location `mu`, scale `sigma`
    Frechet { lambda: f64, mu: f64, sigma: f64 },
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::Uniform { .. } => Family::Uniform,
            Params::Exponential { .. } => Family::Exponential,
            Params::Logistic { .. } => Family::Logistic,
            Params::Gumbel { .. } => Family::Gumbel,
            Params::Laplace { .. } => Family::Laplace,
            Params::Cauchy { .. } => Family::Cauchy,
            Params::Pareto { .. } => Family::Pareto,
            Params::Rayleigh { .. } => Family::Rayleigh,
            Params::Weibull { .. } => Family::Weibull,
            Params::Frechet { .. } => Family::Frechet,
        }
    }

    fn values(&self) -> Vec<f64> {
        match *self {
            Params::Uniform { a, b } | Params::Pareto { a, b } | Params::Weibull { a, b } => vec![a, b],
            Params::Exponential { lambda } => vec![lambda],
            Params::Logistic { mu, sigma }
            | Params::Gumbel { mu, sigma }
            | Params::Laplace { mu, sigma }
            | Params::Cauchy { mu, sigma } => vec![mu, sigma],
            Params::Rayleigh { sigma } => vec![sigma],
            Params::Frechet { lambda, mu, sigma } => vec![lambda, mu, sigma],
        }
    }

    fn from_values(family: Family, v: &[f64]) -> Params {
        match family {
            Family::Uniform => Params::Uniform { a: v[0], b: v[1] },
            Family::Exponential => Params::Exponential { lambda: v[0] },
            Family::Logistic => Params::Logistic { mu: v[0], sigma: v[1] },
            Family::Gumbel => Params::Gumbel { mu: v[0], sigma: v[1] },
            Family::Laplace => Params::Laplace { mu: v[0], sigma: v[1] },
            Family::Cauchy => Params::Cauchy { mu: v[0], sigma: v[1] },
            Family::Pareto => Params::Pareto { a: v[0], b: v[1] },
            Family::Rayleigh => Params::Rayleigh { sigma: v[0] },
            Family::Weibull => Params::Weibull { a: v[0], b: v[1] },
            Family::Frechet => Params::Frechet { lambda: v[0], mu: v[1], sigma: v[2] },
        }
    }
}

/// A validated distribution: every scale and shape is strictly positive and
/// uniform bounds satisfy `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec(Params);

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be positive and finite, got {x}")))
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDistribution(format!("{name} must be finite, got {x}")))
    }
}

impl DistributionSpec {
    pub fn new(params: Params) -> Result<Self> {
        match params {
            Params::Uniform { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if !(a < b) {
                    return Err(Error::InvalidDistribution(format!("uniform needs a < b, got ({a}, {b})")));
                }
            }
            Params::Exponential { lambda } => positive("lambda", lambda)?,
            Params::Logistic { mu, sigma }
            | Params::Gumbel { mu, sigma }
            | Params::Laplace { mu, sigma }
            | Params::Cauchy { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
            }
            Params::Pareto { a, b } | Params::Weibull { a, b } => {
                positive("a", a)?;
                positive("b", b)?;
            }
            Params::Rayleigh { sigma } => positive("sigma", sigma)?,
            Params::Frechet { lambda, mu, sigma } => {
                positive("lambda", lambda)?;
                finite("mu", mu)?;
                positive("sigma", sigma)?;
            }
        }
        Ok(DistributionSpec(params))
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Params::Uniform { a, b })
    }
    pub fn exponential(lambda: f64) -> Result<Self> {
        Self::new(Params::Exponential { lambda })
    }
    pub fn logistic(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::Logistic { mu, sigma })
    }
    pub fn gumbel(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::Gumbel { mu, sigma })
    }
    pub fn laplace(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::Laplace { mu, sigma })
    }
    pub fn cauchy(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::Cauchy { mu, sigma })
    }
    pub fn pareto(a: f64, b: f64) -> Result<Self> {
        Self::new(Params::Pareto { a, b })
    }
    pub fn rayleigh(sigma: f64) -> Result<Self> {
        Self::new(Params::Rayleigh { sigma })
    }
    pub fn weibull(a: f64, b: f64) -> Result<Self> {
        Self::new(Params::Weibull { a, b })
    }
    pub fn frechet(lambda: f64, mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Params::Frechet { lambda, mu, sigma })
    }

    pub fn params(&self) -> Params {
        self.0
    }

    pub fn family(&self) -> Family {
        self.0.family()
    }

    /// Parameters as `key=value` pairs joined by `;`, e.g. `mu=0;sigma=1`.
    pub fn params_string(&self) -> String {
        let names = self.family().param_names();
        names
            .iter()
            .zip(self.0.values())
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Closed support `[lo, hi]`, possibly infinite.
    pub fn support(&self) -> (f64, f64) {
        let inf = f64::INFINITY;
        match self.0 {
            Params::Uniform { a, b } => (a, b),
            Params::Exponential { .. } | Params::Rayleigh { .. } | Params::Weibull { .. } => (0.0, inf),
            Params::Pareto { b, .. } => (b, inf),
            Params::Frechet { mu, .. } => (mu, inf),
            _ => (-inf, inf),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self.0 {
            Params::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            Params::Exponential { lambda } => {
                if x < 0.0 {
                    0.0
                } else {
                    lambda * (-lambda * x).exp()
                }
            }
            Params::Logistic { mu, sigma } => {
                let e = (-((x - mu) / sigma).abs()).exp();
                e / (sigma * (1.0 + e) * (1.0 + e))
            }
            Params::Gumbel { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-(z + (-z).exp())).exp() / sigma
            }
            Params::Laplace { mu, sigma } => (-((x - mu) / sigma).abs()).exp() / (2.0 * sigma),
            Params::Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                1.0 / (PI * sigma * (1.0 + z * z))
            }
            Params::Pareto { a, b } => {
                if x < b {
                    0.0
                } else {
                    a / b * (b / x).powf(a + 1.0)
                }
            }
            Params::Rayleigh { sigma } => {
                if x < 0.0 {
                    0.0
                } else {
                    let z = x / sigma;
                    z / sigma * (-0.5 * z * z).exp()
                }
            }
            Params::Weibull { a, b } => {
                if x < 0.0 {
                    0.0
                } else {
                    let z = x / b;
                    a / b * z.powf(a - 1.0) * (-z.powf(a)).exp()
                }
            }
            Params::Frechet { lambda, mu, sigma } => {
                if x <= mu {
                    0.0
                } else {
                    let z = (x - mu) / sigma;
                    let t = z.powf(-lambda);
                    lambda / sigma * t / z * (-t).exp()
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.0 {
            Params::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Params::Logistic { mu, sigma } => 1.0 / (1.0 + (-(x - mu) / sigma).exp()),
            Params::Gumbel { mu, sigma } => (-(-(x - mu) / sigma).exp()).exp(),
            Params::Laplace { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z <= 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Params::Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z < -1.0 {
                    (-1.0 / z).atan() / PI
                } else {
                    0.5 + z.atan() / PI
                }
            }
            Params::Frechet { lambda, mu, sigma } => {
                if x <= mu {
                    0.0
                } else {
                    (-((x - mu) / sigma).powf(-lambda)).exp()
                }
            }
            _ => -self.log_sf(x).exp_m1(),
        }
    }

    /// Survival function `1 - F(x)`, accurate in the right tail.
    pub fn sf(&self, x: f64) -> f64 {
        match self.0 {
            Params::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Params::Logistic { mu, sigma } => 1.0 / (1.0 + ((x - mu) / sigma).exp()),
            Params::Gumbel { mu, sigma } => -(-(-(x - mu) / sigma).exp()).exp_m1(),
            Params::Laplace { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z >= 0.0 {
                    0.5 * (-z).exp()
                } else {
                    1.0 - 0.5 * z.exp()
                }
            }
            Params::Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z > 1.0 {
                    (1.0 / z).atan() / PI
                } else {
                    0.5 - z.atan() / PI
                }
            }
            Params::Frechet { lambda, mu, sigma } => {
                if x <= mu {
                    1.0
                } else {
                    -(-((x - mu) / sigma).powf(-lambda)).exp_m1()
                }
            }
            _ => self.log_sf(x).exp(),
        }
    }

    // ln(1 - F) for the families whose survival function is a single exponential
    fn log_sf(&self, x: f64) -> f64 {
        match self.0 {
            Params::Exponential { lambda } => -lambda * x.max(0.0),
            Params::Pareto { a, b } => {
                if x <= b {
                    0.0
                } else {
                    a * (b / x).ln()
                }
            }
            Params::Rayleigh { sigma } => {
                let z = x.max(0.0) / sigma;
                -0.5 * z * z
            }
            Params::Weibull { a, b } => -(x.max(0.0) / b).powf(a),
            _ => unreachable!("log_sf only serves single-exponential tails"),
        }
    }

    fn check_p(p: f64) -> Result<()> {
        if p > 0.0 && p < 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")))
        }
    }

    /// Quantile function `F^{-1}(p)` for `p` in `(0, 1)`.
    pub fn inv_cdf(&self, p: f64) -> Result<f64> {
        Self::check_p(p)?;
        Ok(self.quantile(p))
    }

    // unchecked quantile for the sampling hot path and the quadrature oracle
    pub(crate) fn quantile(&self, p: f64) -> f64 {
        match self.0 {
            Params::Uniform { a, b } => a + (b - a) * p,
            Params::Exponential { lambda } => -(-p).ln_1p() / lambda,
            Params::Logistic { mu, sigma } => mu + sigma * (p / (1.0 - p)).ln(),
            Params::Gumbel { mu, sigma } => mu - sigma * (-p.ln()).ln(),
            Params::Laplace { mu, sigma } => {
                if p <= 0.5 {
                    mu + sigma * (2.0 * p).ln()
                } else {
                    mu - sigma * (2.0 * (1.0 - p)).ln()
                }
            }
            Params::Cauchy { mu, sigma } => {
                // cotangent forms keep relative accuracy in the tails
                if p < 0.25 {
                    mu - sigma / (PI * p).tan()
                } else if p > 0.75 {
                    mu + sigma / (PI * (1.0 - p)).tan()
                } else {
                    mu + sigma * (PI * (p - 0.5)).tan()
                }
            }
            Params::Pareto { a, b } => b * (-(-p).ln_1p() / a).exp(),
            Params::Rayleigh { sigma } => sigma * (-2.0 * (-p).ln_1p()).sqrt(),
            Params::Weibull { a, b } => b * (-(-p).ln_1p()).powf(1.0 / a),
            Params::Frechet { lambda, mu, sigma } => mu + sigma * (-p.ln()).powf(-1.0 / lambda),
        }
    }

    /// `dF^{-1}/dp`. At the Laplace joint `p = 1/2` the right branch is used.
    pub fn inv_cdf_deriv(&self, p: f64) -> Result<f64> {
        Self::check_p(p)?;
        let q = 1.0 - p;
        let v = match self.0 {
            Params::Uniform { a, b } => b - a,
            Params::Exponential { lambda } => 1.0 / (lambda * q),
            Params::Logistic { sigma, .. } => sigma / (p * q),
            Params::Gumbel { sigma, .. } => sigma / (p * -p.ln()),
            Params::Laplace { sigma, .. } => {
                if p < 0.5 {
                    sigma / p
                } else {
                    sigma / q
                }
            }
            Params::Cauchy { sigma, .. } => {
                // cos(π(p - 1/2)) without the cancellation near p = 0 or 1
                let c = (PI * p.min(q)).sin();
                PI * sigma / (c * c)
            }
            Params::Pareto { a, b } => b / a * q.powf(-(a + 1.0) / a),
            Params::Rayleigh { sigma } => sigma / q * (-0.5 / (-p).ln_1p()).sqrt(),
            Params::Weibull { a, b } => b / a / q * (-1.0 / (-p).ln_1p()).powf((a - 1.0) / a),
            Params::Frechet { lambda, sigma, .. } => {
                sigma / lambda / p * (-1.0 / p.ln()).powf((lambda + 1.0) / lambda)
            }
        };
        Ok(v)
    }

    /// `n` variates by inverse transform, in nondecreasing order.
    pub fn sample_sorted(&self, n: usize, stream: &mut impl UniformSource) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.sample_sorted_into(&mut out, stream);
        out
    }

    /// Fills `out` with sorted variates. Uniforms are sorted first; the
    /// quantile map is increasing, so the images stay sorted.
    pub fn sample_sorted_into(&self, out: &mut [f64], stream: &mut impl UniformSource) {
        for v in out.iter_mut() {
            *v = stream.next_uniform();
        }
        out.sort_unstable_by(f64::total_cmp);
        for v in out.iter_mut() {
            *v = self.quantile(*v);
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.0.values().iter().map(|v| v.to_string()).collect();
        write!(f, "{}({})", self.family().keyword(), vals.join(","))
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Accepts `family(p1,p2,...)` with the family's positional parameters,
    /// or a bare family name for the defaults.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            None => return Ok(s.parse::<Family>()?.default_spec()),
            Some(open) => {
                let inner = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidDistribution(format!("missing `)` in `{s}`")))?;
                (&s[..open], inner)
            }
        };
        let family: Family = name.parse()?;
        let values = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidDistribution(format!("bad parameter `{}` in `{s}`", a.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        let want = family.param_names();
        if values.len() != want.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} takes ({}), got {} values",
                family.keyword(),
                want.join(","),
                values.len()
            )));
        }
        DistributionSpec::new(Params::from_values(family, &values))
    }
}

/// Source of independent uniforms on the open interval `(0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// ChaCha8 stream. Distinct `(seed, stream)` pairs give independent sequences.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomStream { rng }
    }
}

impl UniformSource for RandomStream {
    #[inline]
    fn next_uniform(&mut self) -> f64 {
        // midpoint of one of 2^53 equal cells, never 0 or 1
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Replays a fixed list of uniforms, cycling when exhausted.
#[derive(Debug, Clone)]
pub struct FixedStream {
    values: Vec<f64>,
    pos: usize,
}

impl FixedStream {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "FixedStream needs at least one value");
        FixedStream { values, pos: 0 }
    }
}

impl UniformSource for FixedStream {
    fn next_uniform(&mut self) -> f64 {
        let v = self.values[self.pos % self.values.len()];
        self.pos += 1;
        v
    }
}
