//! Deterministic instance corpora shared by the criterion benches.

use pmasched::{agreeable_instance, random_instance, tight_instance, Instance};

/// Seeded random instances: `count` instances of `n` jobs with processing
/// times and deterioration amounts up to 20.
pub fn random_corpus(n: usize, count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| random_instance(n, 20, 20, seed))
        .collect()
}

/// Like [`random_corpus`], but deterioration sorted consistently with
/// processing times, so SPT is provably optimal on every instance.
pub fn agreeable_corpus(n: usize, count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| agreeable_instance(n, 20, 20, seed))
        .collect()
}

/// The two-job family where the greedy split pays twice the optimum, over
/// several magnitudes of the family parameter.
pub fn tight_corpus() -> Vec<Instance> {
    [10, 100, 1000, 1_000_000]
        .iter()
        .map(|&lambda| tight_instance(lambda).expect("lambda >= 2"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_feasible_and_sized_as_requested() {
        let corpus = random_corpus(6, 10);
        assert_eq!(corpus.len(), 10);
        assert!(corpus.iter().all(|i| i.n() == 6 && i.is_feasible()));
        assert!(agreeable_corpus(5, 4).iter().all(pmasched::is_agreeable));
        assert_eq!(tight_corpus().len(), 4);
    }
}
