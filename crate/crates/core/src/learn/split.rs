use crate::error::LearnError;
use crate::rng::SplitMix64;

/// Disjoint train/validation/test index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Sizes of an 80/10/10 split of `n` items; floor each share, then hand the
/// remainder out one at a time to train, valid, test in that order.
pub fn split_sizes(n: usize) -> (usize, usize, usize) {
    let mut sizes = [n * 8 / 10, n / 10, n / 10];
    let mut rest = n - sizes.iter().sum::<usize>();
    let mut k = 0;
    while rest > 0 {
        sizes[k % 3] += 1;
        rest -= 1;
        k += 1;
    }
    (sizes[0], sizes[1], sizes[2])
}

/// Shuffles `0..n` with a SplitMix64 stream seeded by `seed` and cuts it
/// into train, validation and test parts in that order.
pub fn make_splits(n: usize, seed: u64) -> Result<SplitPlan, LearnError> {
    if n < 10 {
        return Err(LearnError::TooFewSamples(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let (a, b, _) = split_sizes(n);
    Ok(SplitPlan {
        train: order[..a].to_vec(),
        valid: order[a..a + b].to_vec(),
        test: order[a + b..].to_vec(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(split_sizes(10), (8, 1, 1));
        assert_eq!(split_sizes(1113), (891, 111, 111));
        assert_eq!(split_sizes(19), (16, 2, 1));
        assert_eq!(split_sizes(4110), (3288, 411, 411));
    }

    #[test]
    fn deterministic_and_disjoint() {
        let a = make_splits(57, 2020).unwrap();
        assert_eq!(a, make_splits(57, 2020).unwrap());
        assert_ne!(a, make_splits(57, 2021).unwrap());
        let mut all: Vec<usize> = a.train.iter().chain(&a.valid).chain(&a.test).copied().collect();
        all.sort();
        assert_eq!(all, (0..57).collect::<Vec<_>>());
        assert!(matches!(make_splits(9, 1), Err(LearnError::TooFewSamples(9))));
    }
}
