//! Deterministic instance generators.
//!
//! Everything here is seeded (ChaCha8), so the same parameters always
//! produce the same instance — byte for byte once serialized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, Job, ModelError};

/// Uniform random instance: `p in 0..=max_p`, `delta in 0..=max_delta`,
/// `ml_max = max_delta` (so every job fits) and `ml0` uniform in
/// `0..=ml_max`.
pub fn random_instance(n: usize, max_p: u64, max_delta: u64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs = (0..n)
        .map(|_| Job::new(rng.gen_range(0..=max_p), rng.gen_range(0..=max_delta)))
        .collect();
    let ml0 = rng.gen_range(0..=max_delta);
    Instance {
        jobs,
        ml0,
        ml_max: max_delta,
    }
}

/// Random agreeable instance: processing times and wear values are drawn
/// independently, sorted, and zipped, so larger `p` always comes with
/// larger `delta` and SPT is provably optimal.
pub fn agreeable_instance(n: usize, max_p: u64, max_delta: u64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ps: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_p)).collect();
    let mut ds: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_delta)).collect();
    ps.sort_unstable();
    ds.sort_unstable();
    let jobs = ps
        .into_iter()
        .zip(ds)
        .map(|(p, d)| Job::new(p, d))
        .collect();
    let ml0 = rng.gen_range(0..=max_delta);
    Instance {
        jobs,
        ml0,
        ml_max: max_delta,
    }
}

/// Two-job family on which the `a1` heuristic pays exactly twice the
/// optimum: jobs `(1, lambda)` and `(lambda - 1, 1)` with
/// `ml0 = ml_max = lambda`. Requires `lambda >= 2`.
pub fn tight_instance(lambda: u64) -> Result<Instance, ModelError> {
    if lambda < 2 {
        // Reuse the instance-validity error: lambda 1 degenerates.
        return Err(ModelError::InvalidInstance {
            ml0: lambda,
            ml_max: lambda,
        });
    }
    Ok(Instance {
        jobs: vec![Job::new(1, lambda), Job::new(lambda - 1, 1)],
        ml0: lambda,
        ml_max: lambda,
    })
}
