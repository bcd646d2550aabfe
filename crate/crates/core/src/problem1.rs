//! Exhaustive search over rank metrics for `sum_v 2^-d(v) > 1`.
//!
//! A rank metric on `n` points is any bijection from the `n(n-1)/2` pairs to
//! ranks; every ordering of distances is realizable by points in `R^(n-1)`,
//! so scanning all such bijections covers every space in general position.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{OnngError, Result};
use crate::metric::{lex_pairs, pair_count, RankedMetric};
use crate::oracle::{DyadicSum, SmallSpace, MAX_EXHAUSTIVE_N};

/// Largest `n` accepted by the rank-metric enumeration.
pub const MAX_METRIC_ENUM_N: usize = 5;

fn guard(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_METRIC_ENUM_N {
        return Err(OnngError::GuardExceeded {
            what,
            n,
            max: MAX_METRIC_ENUM_N,
        });
    }
    if n == 0 {
        return Err(OnngError::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

/// Rearranges `v` into the next permutation in lexicographic order; returns
/// `false` (leaving `v` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        v.reverse();
        return false;
    };
    let j = v
        .iter()
        .rposition(|x| *x > v[i])
        .expect("a larger element exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Every rank metric on `n` points, in lexicographic order of the rank vector
/// (ranks listed in lexicographic pair order).
pub fn enumerate_rank_metrics(n: usize) -> Result<impl Iterator<Item = RankedMetric>> {
    guard("enumerate_rank_metrics", n)?;
    let m = pair_count(n);
    let mut ranks: Vec<u32> = (0..m as u32).collect();
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let metric = RankedMetric::from_pair_ranks(n, &ranks).expect("ranks are a permutation");
        done = !next_permutation(&mut ranks);
        Some(metric)
    }))
}

/// All relabelings of `0..n`.
fn relabelings(n: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut all = vec![perm.clone()];
    while next_permutation(&mut perm) {
        all.push(perm.clone());
    }
    all
}

/// Whether `ranks` is lexicographically minimal among all its relabelings.
fn is_canonical(
    ranks: &[u8],
    pairs: &[(usize, usize)],
    perms: &[Vec<usize>],
    index: &[[usize; MAX_EXHAUSTIVE_N]],
) -> bool {
    for perm in perms.iter().skip(1) {
        // relabeled[q] is the rank of the preimage of pair q
        let mut relabeled = [0u8; 45];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let (a, b) = (perm[i], perm[j]);
            relabeled[index[a.min(b)][a.max(b)]] = ranks[p];
        }
        if relabeled[..ranks.len()] < *ranks {
            return false;
        }
    }
    true
}

/// A rank metric whose sum exceeds 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Ranks in lexicographic pair order.
    pub ranks: Vec<u32>,
    /// `d(v)` per vertex.
    pub profile: Vec<u32>,
    #[serde(serialize_with = "as_fraction")]
    pub sum: DyadicSum,
}

/// Outcome of [`problem1_search`]. Fields serialize in key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Problem1Report {
    pub canonical_only: bool,
    pub counterexamples: Vec<Counterexample>,
    #[serde(serialize_with = "as_fraction")]
    pub max_sum: DyadicSum,
    pub n: usize,
    /// Number of rank metrics evaluated (after the canonical filter, if on).
    pub orderings_scanned: u64,
    /// Rank metrics whose sum is exactly 1.
    pub witnesses_at_one: u64,
}

fn as_fraction<S: Serializer>(x: &DyadicSum, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Default)]
struct Partial {
    scanned: u64,
    at_one: u64,
    max_sum: Option<DyadicSum>,
    counterexamples: Vec<Counterexample>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.scanned += other.scanned;
        self.at_one += other.at_one;
        self.max_sum = match (self.max_sum, other.max_sum) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.counterexamples.extend(other.counterexamples);
        self
    }
}

/// Scans every rank metric on `n <= 5` points. The work is split by the ranks
/// of the first two pairs and merged in enumeration order, so the report does
/// not depend on `parallelism`.
pub fn problem1_search(
    n: usize,
    canonical_only: bool,
    parallelism: usize,
) -> Result<Problem1Report> {
    guard("problem1_search", n)?;
    let m = pair_count(n);
    let prefix_len = m.min(2);
    let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..prefix_len {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (0..m as u8)
                    .filter(|r| !p.contains(r))
                    .map(|r| {
                        let mut q = p.clone();
                        q.push(r);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }

    let perms = relabelings(n);
    let mut index = [[0usize; MAX_EXHAUSTIVE_N]; MAX_EXHAUSTIVE_N];
    for (p, (i, j)) in lex_pairs(n).enumerate() {
        index[i][j] = p;
    }
    let pairs: Vec<(usize, usize)> = lex_pairs(n).collect();

    let scan = |prefix: &Vec<u8>| -> Partial {
        let mut rest: Vec<u8> = (0..m as u8).filter(|r| !prefix.contains(r)).collect();
        let mut ranks = prefix.clone();
        ranks.extend_from_slice(&rest);
        let mut part = Partial::default();
        let mut space = SmallSpace {
            n,
            rank: [[u8::MAX; MAX_EXHAUSTIVE_N]; MAX_EXHAUSTIVE_N],
        };
        loop {
            ranks.truncate(prefix.len());
            ranks.extend_from_slice(&rest);
            if !canonical_only || is_canonical(&ranks, &pairs, &perms, &index) {
                for (&(i, j), &r) in pairs.iter().zip(&ranks) {
                    space.rank[i][j] = r;
                    space.rank[j][i] = r;
                }
                let profile = space.profile();
                let sum = DyadicSum::of_profile(profile[..n].iter().copied());
                part.scanned += 1;
                if sum == DyadicSum::ONE {
                    part.at_one += 1;
                }
                if sum > DyadicSum::ONE {
                    part.counterexamples.push(Counterexample {
                        ranks: ranks.iter().map(|&r| r as u32).collect(),
                        profile: profile[..n].iter().map(|&d| d as u32).collect(),
                        sum,
                    });
                }
                part.max_sum = Some(part.max_sum.map_or(sum, |s| s.max(sum)));
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        part
    };

    let parts: Vec<Partial> = if parallelism <= 1 {
        prefixes.iter().map(scan).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| OnngError::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| prefixes.par_iter().map(scan).collect())
    };
    let total = parts.into_iter().fold(Partial::default(), Partial::merge);
    Ok(Problem1Report {
        canonical_only,
        counterexamples: total.counterexamples,
        max_sum: total.max_sum.unwrap_or(DyadicSum::ZERO),
        n,
        orderings_scanned: total.scanned,
        witnesses_at_one: total.at_one,
    })
}
