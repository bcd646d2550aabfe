//! Ordinal distance spaces.
//!
//! Every algorithm in this crate consumes distances only through comparisons,
//! so a space is represented by a strict total order on its unordered vertex
//! pairs: [`RankedMetric`] stores, for every pair `{i, j}`, its position in that
//! order. Geometric inputs ([`PointSet`]) are compiled down to a ranked metric
//! once, with exact ties broken by the lexicographic order of the sorted index
//! pair.

use std::cmp::Ordering;

use crate::error::{OnngError, Result};

/// Vertex label, `0..n`.
pub type VertexId = usize;

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` (`i < j`) in lexicographic pair order
/// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j`, in lexicographic order.
pub fn lex_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// A strict total order on the unordered pairs of `0..n`.
///
/// `rank(i, j) == rank(j, i)` and the ranks form a bijection onto
/// `0..n(n-1)/2`; a smaller rank means a shorter distance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankedMetric {
    n: usize,
    // Dense n x n table; the diagonal holds u32::MAX and is never read through
    // the public API.
    table: Vec<u32>,
}

impl RankedMetric {
    /// Builds a metric from ranks listed in lexicographic pair order.
    pub fn from_pair_ranks(n: usize, ranks: &[u32]) -> Result<Self> {
        let m = pair_count(n);
        if ranks.len() != m {
            return Err(OnngError::InvalidRanks(format!(
                "expected {m} ranks for n = {n}, got {}",
                ranks.len()
            )));
        }
        let mut seen = vec![false; m];
        for (&r, (i, j)) in ranks.iter().zip(lex_pairs(n)) {
            let slot = seen.get_mut(r as usize).ok_or_else(|| {
                OnngError::InvalidRanks(format!("rank {r} of pair ({i}, {j}) is not below {m}"))
            })?;
            if *slot {
                return Err(OnngError::InvalidRanks(format!(
                    "rank {r} assigned twice (second time to pair ({i}, {j}))"
                )));
            }
            *slot = true;
        }
        let mut table = vec![u32::MAX; n * n];
        for (&r, (i, j)) in ranks.iter().zip(lex_pairs(n)) {
            table[i * n + j] = r;
            table[j * n + i] = r;
        }
        Ok(Self { n, table })
    }

    /// Builds a metric from explicit `(i, j, rank)` entries, one per pair.
    pub fn from_entries(n: usize, entries: &[(usize, usize, u32)]) -> Result<Self> {
        let m = pair_count(n);
        let mut ranks = vec![None; m];
        for &(i, j, r) in entries {
            if i >= j || j >= n {
                return Err(OnngError::InvalidRanks(format!(
                    "pair ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            let slot = &mut ranks[pair_index(n, i, j)];
            if slot.is_some() {
                return Err(OnngError::InvalidRanks(format!(
                    "pair ({i}, {j}) listed twice"
                )));
            }
            *slot = Some(r);
        }
        let ranks: Vec<u32> = lex_pairs(n)
            .zip(ranks)
            .map(|((i, j), r)| {
                r.ok_or_else(|| OnngError::InvalidRanks(format!("pair ({i}, {j}) has no rank")))
            })
            .collect::<Result<_>>()?;
        Self::from_pair_ranks(n, &ranks)
    }

    /// Builds a metric by sorting all pairs under `cmp`, breaking ties by the
    /// lexicographic order of `(i, j)`.
    pub fn from_pair_order<F>(n: usize, mut cmp: F) -> Self
    where
        F: FnMut((usize, usize), (usize, usize)) -> Ordering,
    {
        let mut pairs: Vec<(u32, u32)> = lex_pairs(n).map(|(i, j)| (i as u32, j as u32)).collect();
        pairs.sort_by(|&(i, j), &(k, l)| {
            cmp((i as usize, j as usize), (k as usize, l as usize)).then((i, j).cmp(&(k, l)))
        });
        Self::from_sorted_pairs(n, &pairs)
    }

    /// Builds a metric by sorting all pairs by a key, ties broken by `(i, j)`.
    pub fn from_pair_keys<K, F>(n: usize, mut key: F) -> Self
    where
        K: Ord,
        F: FnMut(usize, usize) -> K,
    {
        let mut keyed: Vec<(K, u32, u32)> = lex_pairs(n)
            .map(|(i, j)| (key(i, j), i as u32, j as u32))
            .collect();
        keyed.sort_unstable();
        let pairs: Vec<(u32, u32)> = keyed.into_iter().map(|(_, i, j)| (i, j)).collect();
        Self::from_sorted_pairs(n, &pairs)
    }

    fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut table = vec![u32::MAX; n * n];
        for (r, &(i, j)) in pairs.iter().enumerate() {
            let (i, j) = (i as usize, j as usize);
            table[i * n + j] = r as u32;
            table[j * n + i] = r as u32;
        }
        Self { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the pair `{i, j}`; `i != j`.
    #[inline]
    pub fn rank(&self, i: VertexId, j: VertexId) -> u32 {
        debug_assert!(i != j, "rank of a degenerate pair ({i}, {i})");
        self.table[i * self.n + j]
    }

    /// Ranks in lexicographic pair order.
    pub fn pair_ranks(&self) -> Vec<u32> {
        lex_pairs(self.n).map(|(i, j)| self.rank(i, j)).collect()
    }

    /// Pairs sorted by increasing rank.
    pub fn pairs_by_rank(&self) -> Vec<(VertexId, VertexId)> {
        let mut pairs = vec![(0, 0); pair_count(self.n)];
        for (i, j) in lex_pairs(self.n) {
            pairs[self.rank(i, j) as usize] = (i, j);
        }
        pairs
    }

    /// The pair of maximum rank, returned as `(a, b)` with `a < b`.
    pub fn diameter_pair(&self) -> Option<(VertexId, VertexId)> {
        lex_pairs(self.n).max_by_key(|&(i, j)| self.rank(i, j))
    }

    /// Closest vertex to `v` among `candidates`.
    pub fn nearest<I>(&self, v: VertexId, candidates: I) -> Option<VertexId>
    where
        I: IntoIterator<Item = VertexId>,
    {
        candidates
            .into_iter()
            .filter(|&u| u != v)
            .min_by_key(|&u| self.rank(v, u))
    }

    /// The metric seen through a relabeling: vertex `v` of `self` becomes
    /// `perm[v]` of the result.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Self> {
        crate::graph::check_permutation(self.n, perm)?;
        let n = self.n;
        let mut table = vec![u32::MAX; n * n];
        for (i, j) in lex_pairs(n) {
            let r = self.rank(i, j);
            let (a, b) = (perm[i], perm[j]);
            table[a * n + b] = r;
            table[b * n + a] = r;
        }
        Ok(Self { n, table })
    }

    /// Sub-metric induced on `vertices`, relabeled `0..vertices.len()` in the
    /// given order and re-ranked densely.
    pub fn induced(&self, vertices: &[VertexId]) -> Self {
        Self::from_pair_keys(vertices.len(), |i, j| self.rank(vertices[i], vertices[j]))
    }
}

/// A finite set of distinct points in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    // All coordinates are integers of magnitude <= 2^31, so squared distances
    // are evaluated exactly in i128.
    integral: bool,
}

const EXACT_COORD_LIMIT: f64 = 2147483648.0;

impl PointSet {
    pub fn new(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if dim == 0 {
            return Err(OnngError::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(OnngError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Points stored row-major, `dim` coordinates each.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(OnngError::ZeroDimension);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(OnngError::DimensionMismatch {
                index: coords.len() / dim,
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(OnngError::NonFiniteCoordinate { index: pos / dim });
        }
        let integral = coords
            .iter()
            .all(|&x| x.fract() == 0.0 && x.abs() <= EXACT_COORD_LIMIT);
        let ps = Self {
            dim,
            coords,
            integral,
        };
        ps.check_distinct()?;
        Ok(ps)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| (x + 0.0).total_cmp(&(y + 0.0)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        for w in idx.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(OnngError::DuplicatePoints { first, second });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: VertexId) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Whether pair comparisons are carried out in exact integer arithmetic.
    pub fn is_exact(&self) -> bool {
        self.integral
    }

    pub fn sq_dist(&self, i: VertexId, j: VertexId) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    }

    pub fn dist(&self, i: VertexId, j: VertexId) -> f64 {
        self.sq_dist(i, j).sqrt()
    }

    fn sq_dist_exact(&self, i: VertexId, j: VertexId) -> i128 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(&x, &y)| {
                let d = x as i128 - y as i128;
                d * d
            })
            .sum()
    }

    /// Compares the pairs `{i, j}` and `{k, l}` by distance, ties broken by
    /// the sorted index pair. This is exactly the order of [`Self::metric`].
    pub fn cmp_pairs(
        &self,
        (i, j): (VertexId, VertexId),
        (k, l): (VertexId, VertexId),
    ) -> Ordering {
        let by_dist = if self.integral {
            self.sq_dist_exact(i, j).cmp(&self.sq_dist_exact(k, l))
        } else {
            self.sq_dist(i, j).total_cmp(&self.sq_dist(k, l))
        };
        by_dist.then_with(|| (i.min(j), i.max(j)).cmp(&(k.min(l), k.max(l))))
    }

    /// Compiles the point set to its ranked metric.
    pub fn metric(&self) -> RankedMetric {
        metric_from_points(self)
    }
}

/// Orders all pairs by squared Euclidean distance, exact ties broken by the
/// lexicographic order of the sorted index pair.
pub fn metric_from_points(ps: &PointSet) -> RankedMetric {
    let n = ps.len();
    if ps.integral {
        RankedMetric::from_pair_keys(n, |i, j| ps.sq_dist_exact(i, j))
    } else {
        RankedMetric::from_pair_keys(n, |i, j| TotalF64(ps.sq_dist(i, j)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct TotalF64(f64);

impl Eq for TotalF64 {}

impl PartialOrd for TotalF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TotalF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}
