//! Exact rationals, precision-tagged floats and the special functions built on them.

pub mod dilog;
pub mod hpfloat;
pub mod hyp2f1;
pub mod quad;
pub mod rational;

pub use dilog::{dilog, dilog_f64};
pub use hpfloat::{HPFloat, PrecisionPolicy};
pub use hyp2f1::{hyp2f1, hyp2f1_hp, hyp2f1_series};
pub use num_rational::BigRational;
pub use quad::{quad_adaptive, quad_adaptive_rel, quad_adaptive_scaled, QuadResult};
pub use rational::beta_int;
