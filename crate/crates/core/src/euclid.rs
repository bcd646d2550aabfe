//! Orders for point sets in `R^d` with center indegree at least
//! `log2(n) / (4d)`.
//!
//! Each level takes a diameter pair `ab`, keeps the larger of the two
//! Voronoi halves `A`, and cuts `A` with an axis-aligned grid of side
//! `|ab| / (2 sqrt d)`. Every cell has diameter strictly below `|ab| / 2`
//! (cells are half-open), while every point of `A` is at least `|ab| / 2`
//! away from `b`; so the largest cell `C` can be ordered recursively, with
//! `b` revealed right after the center of `C`, and `b` only adds an edge to
//! that center.

use std::collections::BTreeMap;

use crate::error::{OnngError, Result};
use crate::graph::InsertionOrder;
use crate::metric::{PointSet, VertexId};

/// `floor(2 sqrt d)`, computed exactly.
pub fn cells_per_axis_minus_one(d: usize) -> u64 {
    isqrt(4 * d as u64)
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Upper bound on the number of non-empty grid cells, `(floor(2 sqrt d) + 1)^d`;
/// `None` if it does not fit in a `u128`.
pub fn grid_cell_bound(d: usize) -> Option<u128> {
    let per_axis = cells_per_axis_minus_one(d) as u128 + 1;
    per_axis.checked_pow(u32::try_from(d).ok()?)
}

/// Whether `2 * grid_cell_bound(d) <= 16^d`, i.e. whether the grid bound is at
/// least `log2(n) / (4d)` for every `n`.
pub fn grid_matches_log_bound(d: usize) -> bool {
    match (grid_cell_bound(d), 16u128.checked_pow(d as u32)) {
        (Some(m), Some(p)) => m.checked_mul(2).is_some_and(|m2| m2 <= p),
        _ => {
            let per_axis = (cells_per_axis_minus_one(d) + 1) as f64;
            std::f64::consts::LN_2 + d as f64 * per_axis.ln() <= d as f64 * 16f64.ln()
        }
    }
}

/// `floor(log(n) / log(2 M))` with `M = grid_cell_bound(d)`: the indegree the
/// grid construction certifies.
pub fn grid_guarantee(n: usize, d: usize) -> u32 {
    let Some(base) = grid_cell_bound(d).and_then(|m| m.checked_mul(2)) else {
        return 0;
    };
    let mut g = 0;
    let mut power: u128 = base;
    while power <= n as u128 {
        g += 1;
        match power.checked_mul(base) {
            Some(p) => power = p,
            None => break,
        }
    }
    g
}

/// `floor(log2(n) / (4d))`.
pub fn log_bound(n: usize, d: usize) -> u32 {
    if n == 0 || d == 0 {
        return 0;
    }
    let floor_log2 = usize::BITS - 1 - n.leading_zeros();
    floor_log2 / (4 * d as u32)
}

/// A diameter pair `(a, b)`, `a < b`, under the tie-broken pair order.
pub fn diameter_pair(ps: &PointSet) -> Result<(VertexId, VertexId)> {
    let all: Vec<VertexId> = (0..ps.len()).collect();
    diameter_pair_of(ps, &all)
}

fn diameter_pair_of(ps: &PointSet, subset: &[VertexId]) -> Result<(VertexId, VertexId)> {
    if subset.len() < 2 {
        return Err(OnngError::TooFewVertices {
            what: "diameter_pair",
            min: 2,
            got: subset.len(),
        });
    }
    let mut best = (subset[0].min(subset[1]), subset[0].max(subset[1]));
    for (x, &i) in subset.iter().enumerate() {
        for &j in &subset[x + 1..] {
            let pair = (i.min(j), i.max(j));
            if ps.cmp_pairs(pair, best).is_gt() {
                best = pair;
            }
        }
    }
    Ok(best)
}

/// The two sides of a diameter pair, with the larger side first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSplit {
    /// Endpoint on the kept side.
    pub near: VertexId,
    /// Endpoint on the other side.
    pub far: VertexId,
    /// Points closer to `near` than to `far`; `near_side.len() >= far_side.len()`.
    pub near_side: Vec<VertexId>,
    pub far_side: Vec<VertexId>,
}

/// Splits all points by which of `a`, `b` is closer, keeping the larger side.
pub fn halfspace_split(ps: &PointSet, a: VertexId, b: VertexId) -> Result<HalfSplit> {
    let all: Vec<VertexId> = (0..ps.len()).collect();
    split_of(ps, &all, a, b)
}

fn split_of(ps: &PointSet, subset: &[VertexId], a: VertexId, b: VertexId) -> Result<HalfSplit> {
    let n = ps.len();
    for id in [a, b] {
        if id >= n {
            return Err(OnngError::VertexOutOfRange { id, n });
        }
    }
    if a == b {
        return Err(OnngError::InvalidParameter(
            "split endpoints must differ".into(),
        ));
    }
    let (mut side_a, mut side_b) = (Vec::new(), Vec::new());
    for &p in subset {
        let to_a = p == a || (p != b && ps.cmp_pairs((p, a), (p, b)).is_lt());
        if to_a {
            side_a.push(p);
        } else {
            side_b.push(p);
        }
    }
    Ok(if side_a.len() >= side_b.len() {
        HalfSplit {
            near: a,
            far: b,
            near_side: side_a,
            far_side: side_b,
        }
    } else {
        HalfSplit {
            near: b,
            far: a,
            near_side: side_b,
            far_side: side_a,
        }
    })
}

/// Buckets `members` into half-open grid cells of side `unit / (2 sqrt d)`
/// anchored at their coordinate-wise minimum. Clusters come back in
/// lexicographic cell order. If the members have diameter at most `unit`,
/// each cluster has diameter strictly below `unit / 2` and there are at most
/// [`grid_cell_bound`] of them.
pub fn grid_partition(
    ps: &PointSet,
    members: &[VertexId],
    unit: f64,
) -> Result<Vec<Vec<VertexId>>> {
    Ok(grid_cells(ps, members, unit)?.into_values().collect())
}

fn grid_cells(
    ps: &PointSet,
    members: &[VertexId],
    unit: f64,
) -> Result<BTreeMap<Vec<u64>, Vec<VertexId>>> {
    if members.is_empty() {
        return Err(OnngError::InvalidParameter(
            "grid partition of an empty set".into(),
        ));
    }
    if !(unit.is_finite() && unit > 0.0) {
        return Err(OnngError::InvalidParameter(format!(
            "grid unit must be positive and finite, got {unit}"
        )));
    }
    let d = ps.dim();
    let side = unit / (2.0 * (d as f64).sqrt());
    let max_index = cells_per_axis_minus_one(d);
    let mut anchor = vec![f64::INFINITY; d];
    for &p in members {
        for (lo, &x) in anchor.iter_mut().zip(ps.point(p)) {
            *lo = lo.min(x);
        }
    }
    let mut cells: BTreeMap<Vec<u64>, Vec<VertexId>> = BTreeMap::new();
    for &p in members {
        let key: Vec<u64> = ps
            .point(p)
            .iter()
            .zip(&anchor)
            .map(|(&x, &lo)| (((x - lo) / side).floor() as u64).min(max_index))
            .collect();
        cells.entry(key).or_default().push(p);
    }
    Ok(cells)
}

/// One level of [`order_euclid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclidLevel {
    /// The far endpoint `b`, revealed second.
    pub far: VertexId,
    /// Number of points handled at this level.
    pub size: usize,
    /// The cluster recursed into.
    pub cluster: Vec<VertexId>,
}

/// Result of [`order_euclid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclidOrder {
    pub order: InsertionOrder,
    pub center: VertexId,
    /// `floor(log(n) / log(2 M))` for the grid cell bound `M`.
    pub guarantee: u32,
    /// Whether `guarantee` dominates `floor(log2(n) / (4d))` in this dimension.
    pub matches_log_bound: bool,
    pub levels: Vec<EuclidLevel>,
}

impl EuclidOrder {
    /// The best lower bound on the center's indegree this construction proves.
    pub fn certified_bound(&self, n: usize, d: usize) -> u32 {
        if self.matches_log_bound {
            self.guarantee.max(log_bound(n, d))
        } else {
            self.guarantee
        }
    }
}

/// Recursive diameter/half/grid order. The returned order starts with the
/// center, followed by the far endpoint of every level.
pub fn order_euclid(ps: &PointSet) -> Result<EuclidOrder> {
    let n = ps.len();
    if n == 0 {
        return Err(OnngError::TooFewVertices {
            what: "order_euclid",
            min: 1,
            got: 0,
        });
    }
    let d = ps.dim();
    let matches_log_bound = grid_matches_log_bound(d);
    let mut current: Vec<VertexId> = (0..n).collect();
    let mut levels = Vec::new();
    let mut rests: Vec<Vec<VertexId>> = Vec::new();
    while current.len() > 1 {
        let (a, b) = diameter_pair_of(ps, &current)?;
        let split = split_of(ps, &current, a, b)?;
        let unit = ps.dist(a, b);
        let cells = grid_cells(ps, &split.near_side, unit)?;
        // largest cell, earliest cell index on ties
        let cluster =
            cells.into_values().fold(
                Vec::new(),
                |best, c| if c.len() > best.len() { c } else { best },
            );
        let mut in_cluster = vec![false; n];
        for &c in &cluster {
            in_cluster[c] = true;
        }
        let mut rest: Vec<VertexId> = current
            .iter()
            .copied()
            .filter(|&p| !in_cluster[p] && p != split.far)
            .collect();
        rest.sort_unstable();
        rests.push(rest);
        levels.push(EuclidLevel {
            far: split.far,
            size: current.len(),
            cluster: cluster.clone(),
        });
        current = cluster;
    }
    let center = current[0];
    let mut seq = Vec::with_capacity(n);
    seq.push(center);
    seq.extend(levels.iter().map(|l| l.far));
    for r in rests.iter().rev() {
        seq.extend_from_slice(r);
    }
    Ok(EuclidOrder {
        order: InsertionOrder::for_size(n, seq)?,
        center,
        guarantee: grid_guarantee(n, d),
        matches_log_bound,
        levels,
    })
}
