//! Points on a line: an order with indegree at least `ceil(log2 n)` at one
//! vertex, and the doubling sets on which no order does better.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{OnngError, Result};
use crate::graph::InsertionOrder;
use crate::metric::{PointSet, RankedMetric, VertexId};

/// Largest `k` accepted by [`gen_hard_line`]; `P_k` has `2^k` points.
pub const MAX_HARD_LINE_K: u32 = 24;

/// Strictly increasing exact rational positions. Vertex `i` is the `i`-th
/// smallest coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinePointSet {
    coords: Vec<BigRational>,
}

impl LinePointSet {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = coords.windows(2).position(|w| w[0] >= w[1]) {
            return Err(OnngError::NotIncreasing(i, i + 1));
        }
        Ok(Self { coords })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(xs: I) -> Result<Self> {
        Self::new(
            xs.into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    /// Sorts arbitrary distinct positions. Returns the set together with
    /// `source[i]`, the input index of sorted vertex `i`.
    pub fn from_unsorted(coords: Vec<BigRational>) -> Result<(Self, Vec<usize>)> {
        let mut idx: Vec<usize> = (0..coords.len()).collect();
        idx.sort_by(|&a, &b| coords[a].cmp(&coords[b]).then(a.cmp(&b)));
        if let Some(w) = idx.windows(2).find(|w| coords[w[0]] == coords[w[1]]) {
            return Err(OnngError::DuplicatePoints {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
        let sorted = idx.iter().map(|&i| coords[i].clone()).collect();
        Ok((Self { coords: sorted }, idx))
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn diameter(&self) -> BigRational {
        match (self.coords.first(), self.coords.last()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => BigRational::zero(),
        }
    }

    /// Ranked metric of absolute differences, computed exactly. Ties are
    /// broken by index pair, as for [`PointSet`].
    pub fn metric(&self) -> RankedMetric {
        let n = self.len();
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<BigInt> = self
            .coords
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        let limit = BigInt::one() << 125;
        if scaled.iter().all(|x| x.abs() < limit) {
            let small: Vec<i128> = scaled.iter().map(|x| x.to_i128().unwrap()).collect();
            RankedMetric::from_pair_keys(n, |i, j| small[j] - small[i])
        } else {
            RankedMetric::from_pair_keys(n, |i, j| &scaled[j] - &scaled[i])
        }
    }

    /// Floating-point embedding in `R^1`; fails if rounding merges points.
    pub fn to_point_set(&self) -> Result<PointSet> {
        let xs = self
            .coords
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect();
        PointSet::from_flat(1, xs)
    }
}

/// The doubling set `P_1 = {0, 1}`, `P_{k+1} = P_k ∪ (3^k + P_k)`.
pub fn gen_hard_line(k: u32) -> Result<LinePointSet> {
    if k == 0 {
        return Err(OnngError::InvalidParameter(
            "hard line sets start at k = 1".into(),
        ));
    }
    if k > MAX_HARD_LINE_K {
        return Err(OnngError::HardLineTooLarge {
            k,
            max: MAX_HARD_LINE_K,
        });
    }
    let mut xs: Vec<i64> = vec![0, 1];
    let mut shift: i64 = 3;
    for _ in 1..k {
        let upper: Vec<i64> = xs.iter().map(|x| x + shift).collect();
        xs.extend(upper);
        shift *= 3;
    }
    LinePointSet::from_integers(xs)
}

/// The leftmost `n` points of `P_{k+1}`, for `2^k < n <= 2^{k+1}`.
pub fn truncate_hard_line(k: u32, n: usize) -> Result<LinePointSet> {
    let lo = 1usize.checked_shl(k).unwrap_or(usize::MAX);
    if n <= lo || n > lo.saturating_mul(2) {
        return Err(OnngError::InvalidParameter(format!(
            "n = {n} must satisfy 2^{k} < n <= 2^{}",
            k + 1
        )));
    }
    let full = gen_hard_line(k + 1)?;
    LinePointSet::new(full.coords[..n].to_vec())
}

/// Result of [`order_line`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOrder {
    pub order: InsertionOrder,
    /// First vertex of the order; receives one edge per halving level.
    pub center: VertexId,
    /// Number of halving levels, a lower bound on the center's indegree.
    pub levels: u32,
}

/// Halving order for points on a line.
///
/// With `a` and `b` the extreme points, the near side `A` holds the points
/// strictly closer to `a` (so a midpoint goes to `B`); if `B` is larger the
/// roles swap. The result is `Center(A), b, Order(A) without its center,
/// B \ {b}` (left to right). Unrolled, the chosen halves form a chain, so the
/// order is the center, then the far endpoint of every level from the
/// outermost in, then the leftovers of each level from the innermost out.
pub fn order_line(ps: &LinePointSet) -> Result<LineOrder> {
    let n = ps.len();
    if n == 0 {
        return Err(OnngError::TooFewVertices {
            what: "order_line",
            min: 1,
            got: 0,
        });
    }
    let x = &ps.coords;
    let (mut lo, mut hi) = (0usize, n - 1);
    let mut fars = Vec::new();
    let mut rests: Vec<std::ops::Range<usize>> = Vec::new();
    while lo < hi {
        let mid2 = &x[lo] + &x[hi];
        let two = BigRational::from_integer(BigInt::from(2));
        // first index not strictly closer to x[lo]
        let split = lo + x[lo..=hi].partition_point(|p| p * &two < mid2);
        let near = split - lo;
        let far = hi + 1 - split;
        if near >= far {
            fars.push(hi);
            rests.push(split..hi);
            hi = split - 1;
        } else {
            fars.push(lo);
            rests.push(lo + 1..split);
            lo = split;
        }
    }
    let center = lo;
    let mut seq = Vec::with_capacity(n);
    seq.push(center);
    seq.extend(&fars);
    for r in rests.iter().rev() {
        seq.extend(r.clone());
    }
    Ok(LineOrder {
        order: InsertionOrder::for_size(n, seq)?,
        center,
        levels: fars.len() as u32,
    })
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_onng;

    fn ints(ps: &LinePointSet) -> Vec<i64> {
        ps.coords()
            .iter()
            .map(|x| x.to_integer().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn hard_lines_small() {
        assert_eq!(ints(&gen_hard_line(1).unwrap()), vec![0, 1]);
        let p2 = gen_hard_line(2).unwrap();
        assert_eq!(ints(&p2), vec![0, 1, 3, 4]);
        assert_eq!(p2.diameter(), BigRational::from_integer(4.into()));
        let p3 = gen_hard_line(3).unwrap();
        assert_eq!(ints(&p3), vec![0, 1, 3, 4, 9, 10, 12, 13]);
        assert_eq!(p3.diameter(), BigRational::from_integer(13.into()));
    }

    #[test]
    fn hard_line_structure() {
        for k in 1..=12u32 {
            let p = gen_hard_line(k).unwrap();
            assert_eq!(p.len(), 1 << k);
            let three_k = 3i64.pow(k);
            assert_eq!(
                p.diameter(),
                BigRational::from_integer(((three_k - 1) / 2).into())
            );
            if k >= 2 {
                let half = p.len() / 2;
                let lower = LinePointSet::new(p.coords()[..half].to_vec()).unwrap();
                let gap = &p.coords()[half] - &p.coords()[half - 1];
                assert_eq!(
                    gap,
                    BigRational::from_integer(((three_k / 3 + 1) / 2).into())
                );
                assert!(gap > lower.diameter());
            }
        }
    }

    #[test]
    fn hard_line_bounds() {
        assert!(gen_hard_line(0).is_err());
        assert_eq!(
            gen_hard_line(MAX_HARD_LINE_K + 1).unwrap_err(),
            OnngError::HardLineTooLarge {
                k: MAX_HARD_LINE_K + 1,
                max: MAX_HARD_LINE_K
            }
        );
    }

    #[test]
    fn truncation() {
        assert_eq!(ints(&truncate_hard_line(1, 3).unwrap()), vec![0, 1, 3]);
        assert_eq!(ints(&truncate_hard_line(1, 4).unwrap()), vec![0, 1, 3, 4]);
        assert_eq!(
            ints(&truncate_hard_line(2, 5).unwrap()),
            vec![0, 1, 3, 4, 9]
        );
        assert!(truncate_hard_line(1, 2).is_err());
        assert!(truncate_hard_line(1, 5).is_err());
    }

    #[test]
    fn order_two_points() {
        let lo = order_line(&gen_hard_line(1).unwrap()).unwrap();
        assert_eq!(lo.order.as_slice(), &[0, 1]);
        assert_eq!(lo.center, 0);
    }

    #[test]
    fn order_hard_line_two() {
        let ps = gen_hard_line(2).unwrap();
        let lo = order_line(&ps).unwrap();
        // coordinates 0, 4, 1, 3
        assert_eq!(lo.order.as_slice(), &[0, 3, 1, 2]);
        assert_eq!(lo.center, 0);
        let g = build_onng(&ps.metric(), &lo.order).unwrap();
        assert_eq!(g.indegree(0), 2);
    }

    #[test]
    fn order_hard_line_three() {
        let ps = gen_hard_line(3).unwrap();
        let lo = order_line(&ps).unwrap();
        let g = build_onng(&ps.metric(), &lo.order).unwrap();
        assert!(g.indegree(lo.center) >= 3);
        assert_eq!(lo.order.first(), Some(lo.center));
    }

    #[test]
    fn swapped_half_puts_right_endpoint_first() {
        // 0 | 10, 11, 12: the right side is larger, so a = 12 and b = 0
        let ps = LinePointSet::from_integers([0, 10, 11, 12]).unwrap();
        let lo = order_line(&ps).unwrap();
        assert_eq!(lo.order.as_slice()[1], 0);
        let g = build_onng(&ps.metric(), &lo.order).unwrap();
        assert!(g.indegree(lo.center) >= 2);
    }

    #[test]
    fn midpoint_goes_to_far_side() {
        // 2 is equidistant from 0 and 4, so the near side is {0, 1}
        let ps = LinePointSet::from_integers([0, 1, 2, 4]).unwrap();
        let lo = order_line(&ps).unwrap();
        assert!(lo.levels >= 1);
    }

    #[test]
    fn long_chain_is_not_recursive() {
        // every split peels one point off the right
        let xs: Vec<i64> = (0..40).map(|i| 1i64 << i).collect();
        let ps = LinePointSet::from_integers(xs).unwrap();
        let lo = order_line(&ps).unwrap();
        let g = build_onng(&ps.metric(), &lo.order).unwrap();
        assert!(g.indegree(lo.center) >= ceil_log2(ps.len()));
    }

    #[test]
    fn rational_metric_is_exact() {
        let third = BigRational::new(1.into(), 3.into());
        let coords = vec![
            BigRational::zero(),
            third.clone(),
            BigRational::new(2.into(), 3.into()) + BigRational::new(1.into(), 1_000_000.into()),
        ];
        let m = LinePointSet::new(coords).unwrap().metric();
        assert_eq!(m.pairs_by_rank(), vec![(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn from_unsorted_tracks_source() {
        let c = |x: i64| BigRational::from_integer(x.into());
        let (ps, src) = LinePointSet::from_unsorted(vec![c(5), c(-1), c(2)]).unwrap();
        assert_eq!(ints(&ps), vec![-1, 2, 5]);
        assert_eq!(src, vec![1, 2, 0]);
        assert!(LinePointSet::from_unsorted(vec![c(1), c(1)]).is_err());
        assert_eq!(
            LinePointSet::new(vec![c(1), c(1)]).unwrap_err(),
            OnngError::NotIncreasing(0, 1)
        );
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u32> = [1, 2, 3, 4, 5, 8, 9, 1024, 1025]
            .iter()
            .map(|&n| ceil_log2(n))
            .collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 10, 11]);
    }
}
