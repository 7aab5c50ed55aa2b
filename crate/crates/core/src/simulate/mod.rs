//! Ground truth at scale: a seeded, chunked Monte Carlo harness and a nested
//! quadrature oracle for the spacing moments.

mod accumulator;
mod curve;
mod oracle;

pub use accumulator::SpacingAccumulator;
pub use curve::{error_curve, fit_min_error, noise_floor, ErrorCurve, ErrorPoint, MinErrFit, MinErrPoint};
pub use oracle::{integrate_expected, integrate_second_moment, spacing_density};

use rayon::prelude::*;

use crate::distributions::{DistributionSpec, RandomStream};
use crate::{Error, Result};

/// Trials per chunk. Each chunk draws from its own substream, so the split
/// of chunks across workers never changes the result.
pub const CHUNK_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub spec: DistributionSpec,
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(spec: DistributionSpec, n: u32, trials: u64, seed: u64, workers: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("simulation needs n >= 2, got {n}")));
        }
        if trials < 2 {
            return Err(Error::Domain(format!("simulation needs at least 2 trials, got {trials}")));
        }
        if workers == 0 {
            return Err(Error::Domain("workers must be positive".into()));
        }
        Ok(SimConfig { spec, n, trials, seed, workers })
    }
}

fn run_chunk(cfg: &SimConfig, chunk: u64) -> SpacingAccumulator {
    let n = cfg.n as usize;
    let start = chunk * CHUNK_TRIALS;
    let len = CHUNK_TRIALS.min(cfg.trials - start);
    let mut stream = RandomStream::new(cfg.seed, chunk);
    let mut acc = SpacingAccumulator::new(n);
    let mut buf = vec![0.0; n];
    for _ in 0..len {
        cfg.spec.sample_sorted_into(&mut buf, &mut stream);
        acc.push(&buf);
    }
    acc
}

/// Merges neighbours level by level; the tree depends only on the number of chunks.
fn merge_pairwise(mut parts: Vec<SpacingAccumulator>) -> SpacingAccumulator {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.merge(&b);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().expect("at least one chunk")
}

/// Draws `trials` sorted samples and accumulates every spacing. The result is
/// a pure function of `(spec, n, trials, seed)`.
pub fn run_simulation(cfg: &SimConfig) -> Result<SpacingAccumulator> {
    let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<SpacingAccumulator> =
        pool.install(|| (0..chunks).into_par_iter().map(|c| run_chunk(cfg, c)).collect());
    Ok(merge_pairwise(parts))
}
