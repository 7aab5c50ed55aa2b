pub mod cli;
mod error;
pub mod distributions;
pub mod estimator;
pub mod numerics;
pub mod simulate;
pub mod spacing_exact;

pub use error::{Error, Result};
