//! Seeded generators for test corpora and the command line.
//!
//! All generators use ChaCha8 seeded from a `u64`, so output is stable
//! across platforms and releases.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OnngError, Result};
use crate::line::LinePointSet;
use crate::metric::{pair_count, PointSet, RankedMetric};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points drawn uniformly from the unit cube `[0, 1)^d`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, d: usize) -> Result<PointSet> {
    if d == 0 {
        return Err(OnngError::ZeroDimension);
    }
    let coords = (0..n * d).map(|_| rng.gen::<f64>()).collect();
    PointSet::from_flat(d, coords)
}

/// A uniformly random bijection from pairs to ranks.
pub fn random_rank_metric<R: Rng>(rng: &mut R, n: usize) -> RankedMetric {
    let mut ranks: Vec<u32> = (0..pair_count(n) as u32).collect();
    ranks.shuffle(rng);
    RankedMetric::from_pair_ranks(n, &ranks).expect("shuffled ranks are a bijection")
}

/// `n` rationals `x / q` with a common random denominator `q <= 10^6` and
/// distinct numerators `|x| <= 10^12`, resampled until all pairwise
/// distances are distinct.
pub fn random_line_set<R: Rng>(rng: &mut R, n: usize) -> LinePointSet {
    loop {
        let q: i64 = rng.gen_range(1..=1_000_000);
        let mut xs: Vec<i64> = (0..n)
            .map(|_| rng.gen_range(-1_000_000_000_000i64..=1_000_000_000_000))
            .collect();
        xs.sort_unstable();
        xs.dedup();
        if xs.len() != n {
            continue;
        }
        let mut gaps: Vec<i64> = Vec::with_capacity(pair_count(n));
        for (i, &a) in xs.iter().enumerate() {
            gaps.extend(xs[i + 1..].iter().map(|&b| b - a));
        }
        gaps.sort_unstable();
        if gaps.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let coords = xs
            .into_iter()
            .map(|x| BigRational::new(BigInt::from(x), BigInt::from(q)))
            .collect();
        return LinePointSet::new(coords).expect("sorted distinct coordinates");
    }
}
