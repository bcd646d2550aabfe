//! Exhaustive ground truth over all `n!` insertion orders.

use crate::error::{OnngError, Result};
use crate::graph::InsertionOrder;
use crate::metric::{RankedMetric, VertexId};

/// Largest `n` for which all `n!` orders are enumerated.
pub const MAX_EXHAUSTIVE_N: usize = 10;

/// Dense rank table for at most [`MAX_EXHAUSTIVE_N`] vertices.
#[derive(Clone, Debug)]
pub(crate) struct SmallSpace {
    pub(crate) n: usize,
    pub(crate) rank: [[u8; MAX_EXHAUSTIVE_N]; MAX_EXHAUSTIVE_N],
}

impl SmallSpace {
    pub(crate) fn from_metric(m: &RankedMetric) -> Self {
        let n = m.n();
        let mut rank = [[u8::MAX; MAX_EXHAUSTIVE_N]; MAX_EXHAUSTIVE_N];
        for (i, row) in rank.iter_mut().enumerate().take(n) {
            for (j, r) in row.iter_mut().enumerate().take(n) {
                if i != j {
                    *r = m.rank(i, j) as u8;
                }
            }
        }
        Self { n, rank }
    }

    /// Visits every complete order in lexicographic order, handing the
    /// visitor the order and its indegree vector.
    pub(crate) fn for_each_order<F>(&self, mut visit: F)
    where
        F: FnMut(&[u8], &[u8]),
    {
        let n = self.n;
        let mut seq = [0u8; MAX_EXHAUSTIVE_N];
        let mut indeg = [0u8; MAX_EXHAUSTIVE_N];
        let mut used = [false; MAX_EXHAUSTIVE_N];
        if n == 0 {
            visit(&[], &[]);
            return;
        }
        self.descend(0, &mut seq, &mut indeg, &mut used, &mut visit);
    }

    fn descend<F>(
        &self,
        depth: usize,
        seq: &mut [u8; MAX_EXHAUSTIVE_N],
        indeg: &mut [u8; MAX_EXHAUSTIVE_N],
        used: &mut [bool; MAX_EXHAUSTIVE_N],
        visit: &mut F,
    ) where
        F: FnMut(&[u8], &[u8]),
    {
        let n = self.n;
        if depth == n {
            visit(&seq[..n], &indeg[..n]);
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let row = &self.rank[v];
            let parent = if depth > 0 {
                let mut best = seq[0];
                for &u in &seq[1..depth] {
                    if row[u as usize] < row[best as usize] {
                        best = u;
                    }
                }
                indeg[best as usize] += 1;
                Some(best)
            } else {
                None
            };
            used[v] = true;
            seq[depth] = v as u8;
            self.descend(depth + 1, seq, indeg, used, visit);
            used[v] = false;
            if let Some(p) = parent {
                indeg[p as usize] -= 1;
            }
        }
    }

    /// `d(v)`: the largest indegree of `v` over all orders.
    pub(crate) fn profile(&self) -> [u8; MAX_EXHAUSTIVE_N] {
        let mut best = [0u8; MAX_EXHAUSTIVE_N];
        self.for_each_order(|_, indeg| {
            for (b, &d) in best.iter_mut().zip(indeg) {
                *b = (*b).max(d);
            }
        });
        best
    }
}

fn guard(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE_N {
        Err(OnngError::GuardExceeded {
            what,
            n,
            max: MAX_EXHAUSTIVE_N,
        })
    } else {
        Ok(())
    }
}

/// An order maximizing the maximum indegree; the lexicographically first
/// among the maximizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestOrder {
    pub order: InsertionOrder,
    pub value: u32,
}

pub fn best_order_exhaustive(m: &RankedMetric) -> Result<BestOrder> {
    guard("best_order_exhaustive", m.n())?;
    let space = SmallSpace::from_metric(m);
    let mut value = 0u8;
    let mut best: Option<Vec<VertexId>> = None;
    space.for_each_order(|seq, indeg| {
        let top = indeg.iter().copied().max().unwrap_or(0);
        if best.is_none() || top > value {
            value = top;
            best = Some(seq.iter().map(|&v| v as VertexId).collect());
        }
    });
    let order = InsertionOrder::for_size(m.n(), best.unwrap_or_default())?;
    Ok(BestOrder {
        order,
        value: value as u32,
    })
}

/// `d(v)` for every vertex: the largest indegree `v` reaches over all orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub d: Vec<u32>,
}

impl DegreeProfile {
    /// `sum_v 2^-d(v)` as an exact fraction.
    pub fn dyadic_sum(&self) -> DyadicSum {
        DyadicSum::of_profile(self.d.iter().map(|&x| x as u8))
    }
}

pub fn degree_profile_exhaustive(m: &RankedMetric) -> Result<DegreeProfile> {
    guard("degree_profile_exhaustive", m.n())?;
    let space = SmallSpace::from_metric(m);
    let p = space.profile();
    Ok(DegreeProfile {
        d: p[..m.n()].iter().map(|&x| x as u32).collect(),
    })
}

pub fn problem1_sum(m: &RankedMetric) -> Result<DyadicSum> {
    Ok(degree_profile_exhaustive(m)?.dyadic_sum())
}

/// A non-negative fraction `numer / 2^exp`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicSum {
    numer: u64,
    exp: u32,
}

impl DyadicSum {
    pub const ZERO: Self = Self { numer: 0, exp: 0 };
    pub const ONE: Self = Self { numer: 1, exp: 0 };

    pub fn new(numer: u64, exp: u32) -> Self {
        let mut s = Self { numer, exp };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.numer == 0 {
            self.exp = 0;
            return;
        }
        let shift = self.numer.trailing_zeros().min(self.exp);
        self.numer >>= shift;
        self.exp -= shift;
    }

    /// `sum 2^-d` over the given exponents; every `d < 64`.
    pub(crate) fn of_profile<I: IntoIterator<Item = u8>>(ds: I) -> Self {
        const EXP: u32 = 63;
        let numer = ds.into_iter().map(|d| 1u64 << (EXP - d as u32)).sum();
        Self::new(numer, EXP)
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        1u64 << self.exp
    }

    pub fn to_f64(&self) -> f64 {
        self.numer as f64 / self.denom() as f64
    }
}

impl PartialOrd for DyadicSum {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicSum {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let e = self.exp.max(other.exp);
        let a = (self.numer as u128) << (e - self.exp);
        let b = (other.numer as u128) << (e - other.exp);
        a.cmp(&b)
    }
}

impl std::fmt::Display for DyadicSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_onng;
    use crate::metric::PointSet;

    fn line_metric(xs: &[f64]) -> RankedMetric {
        PointSet::from_flat(1, xs.to_vec()).unwrap().metric()
    }

    #[test]
    fn enumeration_visits_every_order_once_in_lex_order() {
        let m = line_metric(&[0.0, 1.0, 3.0, 7.0]);
        let space = SmallSpace::from_metric(&m);
        let mut seen: Vec<Vec<u8>> = Vec::new();
        space.for_each_order(|seq, indeg| {
            let order = InsertionOrder::new(seq.iter().map(|&v| v as usize).collect()).unwrap();
            let g = build_onng(&m, &order).unwrap();
            let expect: Vec<u8> = g.indegrees().iter().map(|&d| d as u8).collect();
            assert_eq!(indeg, &expect[..]);
            seen.push(seq.to_vec());
        });
        assert_eq!(seen.len(), 24);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn two_points() {
        let m = line_metric(&[0.0, 1.0]);
        assert_eq!(best_order_exhaustive(&m).unwrap().value, 1);
        assert_eq!(degree_profile_exhaustive(&m).unwrap().d, vec![1, 1]);
        assert_eq!(problem1_sum(&m).unwrap(), DyadicSum::ONE);
    }

    #[test]
    fn three_point_profile() {
        // d(a,b) < d(a,c) < d(b,c)
        let m = RankedMetric::from_pair_ranks(3, &[0, 1, 2]).unwrap();
        let p = degree_profile_exhaustive(&m).unwrap();
        assert_eq!(p.d, vec![2, 2, 1]);
        assert_eq!(p.dyadic_sum(), DyadicSum::ONE);
    }

    #[test]
    fn hard_line_two() {
        let m = line_metric(&[0.0, 1.0, 3.0, 4.0]);
        let best = best_order_exhaustive(&m).unwrap();
        assert_eq!(best.value, 2);
        let g = build_onng(&m, &best.order).unwrap();
        assert_eq!(g.max_indegree(), 2);
        assert_eq!(problem1_sum(&m).unwrap(), DyadicSum::ONE);
    }

    #[test]
    fn first_maximizer_is_lexicographically_smallest() {
        let m = line_metric(&[0.0, 1.0, 3.0]);
        // orders starting with 0: (0,1,2) gives indeg(0)=1, indeg(1)=1;
        // (0,2,1) gives 2->0, 1->0: indegree 2
        let best = best_order_exhaustive(&m).unwrap();
        assert_eq!(best.value, 2);
        assert_eq!(best.order.as_slice(), &[0, 2, 1]);
    }

    #[test]
    fn guard_refuses_large_inputs() {
        let m = line_metric(&(0..11).map(|i| (i * i) as f64).collect::<Vec<_>>());
        assert_eq!(
            best_order_exhaustive(&m).unwrap_err(),
            OnngError::GuardExceeded {
                what: "best_order_exhaustive",
                n: 11,
                max: 10
            }
        );
        assert!(degree_profile_exhaustive(&m).is_err());
    }

    #[test]
    fn dyadic_arithmetic() {
        let half = DyadicSum::of_profile([1]);
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(DyadicSum::of_profile([1, 1]).to_string(), "1/1");
        assert_eq!(DyadicSum::of_profile([2, 2, 1, 3]).to_string(), "9/8");
        assert!(DyadicSum::of_profile([2, 2, 1, 3]) > DyadicSum::ONE);
        assert!(half < DyadicSum::ONE);
        assert_eq!(DyadicSum::ZERO.to_string(), "0/1");
    }
}
