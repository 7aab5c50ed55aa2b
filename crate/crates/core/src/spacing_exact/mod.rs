//! Closed-form spacing densities, expected spacings and variances for the
//! uniform, exponential, logistic and Gumbel families.

mod exponential;
mod gumbel;
mod logistic;
mod uniform;

pub use exponential::{exp_expected, exp_normalized_expected, exp_spacing_density, exp_variance};
pub use gumbel::{gumbel_expected, gumbel_expected_at, gumbel_expected_raw, gumbel_spacing_density};
pub use logistic::{
    logistic_expected_exact, logistic_second_moment, logistic_spacing_density, logistic_variance,
    LogisticSecondMomentTerms,
};
pub use uniform::{uniform_expected, uniform_spacing_density, uniform_variance};

use num_rational::BigRational;

use crate::distributions::{DistributionSpec, Family};
use crate::numerics::{HPFloat, PrecisionPolicy};
use crate::{Error, Result};

/// The spacing `D_i = x_(i) - x_(i-1)` among `n` draws from `spec`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingQuery {
    spec: DistributionSpec,
    n: u32,
    i: u32,
}

impl SpacingQuery {
    /// Requires `2 <= i <= n`.
    pub fn new(spec: DistributionSpec, n: u32, i: u32) -> Result<Self> {
        if n < 2 || i < 2 || i > n {
            return Err(Error::Domain(format!("spacing index needs 2 <= i <= n, got n = {n}, i = {i}")));
        }
        Ok(SpacingQuery { spec, n, i })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn i(&self) -> u32 {
        self.i
    }

    fn require(&self, family: Family) -> Result<()> {
        if self.spec.family() == family {
            Ok(())
        } else {
            Err(Error::Usage(format!("{family} operation called with a {} query", self.spec.family())))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    ExactRational,
    HighPrecision,
}

/// A closed-form result. Exact values keep their rational alongside the
/// rendered float; high-precision values carry only the float.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormValue {
    pub kind: ValueKind,
    pub rational: Option<BigRational>,
    pub hp: HPFloat,
}

impl ClosedFormValue {
    pub fn exact(r: BigRational, bits: u32) -> Self {
        let hp = HPFloat::from_rational(&r, bits);
        ClosedFormValue { kind: ValueKind::ExactRational, rational: Some(r), hp }
    }

    pub fn high_precision(hp: HPFloat) -> Self {
        ClosedFormValue { kind: ValueKind::HighPrecision, rational: None, hp }
    }

    pub fn to_f64(&self) -> f64 {
        self.hp.to_f64()
    }
}

/// Expected spacing through the family's closed form. Logistic values are
/// exact rationals, Gumbel values are evaluated at `policy.working_bits(n)`.
pub fn expected_spacing(q: &SpacingQuery, policy: &PrecisionPolicy) -> Result<ClosedFormValue> {
    let bits = policy.working_bits(q.n);
    match q.spec.family() {
        Family::Uniform => uniform_expected(q, bits),
        Family::Exponential => exp_expected(q, bits),
        Family::Logistic => logistic_expected_exact(q, bits),
        Family::Gumbel => gumbel_expected(q, bits).map(ClosedFormValue::high_precision),
        other => Err(Error::NoClosedForm(other.keyword().to_string())),
    }
}

/// Spacing variance where a closed form exists: uniform, exponential and
/// logistic (the latter through the second-moment series at `rel_tol`).
pub fn spacing_variance(q: &SpacingQuery, policy: &PrecisionPolicy, rel_tol: f64) -> Result<ClosedFormValue> {
    let bits = policy.working_bits(q.n);
    match q.spec.family() {
        Family::Uniform => uniform_variance(q, bits),
        Family::Exponential => exp_variance(q, bits),
        Family::Logistic => logistic_variance(q, rel_tol, bits).map(ClosedFormValue::high_precision),
        other => Err(Error::NoClosedForm(other.keyword().to_string())),
    }
}
