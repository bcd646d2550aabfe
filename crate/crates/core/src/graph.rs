//! Ordered nearest neighbor graphs.

use crate::error::{OnngError, Result};
use crate::metric::{RankedMetric, VertexId};

/// Checks that `seq` is a permutation of `0..n`, reporting every offending id.
pub fn check_permutation(n: usize, seq: &[VertexId]) -> Result<()> {
    let mut count = vec![0u32; n];
    let mut out_of_range = Vec::new();
    for &v in seq {
        match count.get_mut(v) {
            Some(c) => *c += 1,
            None => out_of_range.push(v),
        }
    }
    let missing: Vec<usize> = (0..n).filter(|&v| count[v] == 0).collect();
    let duplicate: Vec<usize> = (0..n).filter(|&v| count[v] > 1).collect();
    if missing.is_empty() && duplicate.is_empty() && out_of_range.is_empty() {
        Ok(())
    } else {
        Err(OnngError::NotAPermutation {
            n,
            missing,
            duplicate,
            out_of_range,
        })
    }
}

/// The order in which vertices are revealed; always a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InsertionOrder(Vec<VertexId>);

impl InsertionOrder {
    pub fn new(seq: Vec<VertexId>) -> Result<Self> {
        check_permutation(seq.len(), &seq)?;
        Ok(Self(seq))
    }

    /// As [`InsertionOrder::new`], additionally requiring length `n`.
    pub fn for_size(n: usize, seq: Vec<VertexId>) -> Result<Self> {
        check_permutation(n, &seq)?;
        Ok(Self(seq))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    /// `position[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (p, &v) in self.0.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl AsRef<[VertexId]> for InsertionOrder {
    fn as_ref(&self) -> &[VertexId] {
        &self.0
    }
}

/// Each vertex but the first points to its closest predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedNNG {
    order: InsertionOrder,
    parent: Vec<Option<VertexId>>,
    indegree: Vec<u32>,
}

impl OrderedNNG {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn order(&self) -> &InsertionOrder {
        &self.order
    }

    /// The closest predecessor of `v`; `None` only for the first vertex.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn indegree(&self, v: VertexId) -> u32 {
        self.indegree[v]
    }

    pub fn indegrees(&self) -> &[u32] {
        &self.indegree
    }

    pub fn max_indegree(&self) -> u32 {
        self.indegree.iter().copied().max().unwrap_or(0)
    }

    /// Edges `(child, parent)` sorted by child id.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v, p)))
    }
}

/// Builds the ordered nearest neighbor graph of `metric` under `order`.
pub fn build_onng(metric: &RankedMetric, order: &InsertionOrder) -> Result<OrderedNNG> {
    let n = metric.n();
    check_permutation(n, order.as_slice())?;
    let seq = order.as_slice();
    let mut parent = vec![None; n];
    let mut indegree = vec![0u32; n];
    for (p, &v) in seq.iter().enumerate().skip(1) {
        let mut best = seq[0];
        let mut best_rank = metric.rank(v, best);
        for &u in &seq[1..p] {
            let r = metric.rank(v, u);
            if r < best_rank {
                best = u;
                best_rank = r;
            }
        }
        parent[v] = Some(best);
        indegree[best] += 1;
    }
    Ok(OrderedNNG {
        order: order.clone(),
        parent,
        indegree,
    })
}

pub fn max_indegree(g: &OrderedNNG) -> u32 {
    g.max_indegree()
}

/// An order whose graph is the directed path `tail -> ... -> first`.
///
/// Walking back from `tail`, each step appends the closest vertex not yet
/// chosen; the reversed walk is the insertion order.
pub fn path_order(metric: &RankedMetric, tail: VertexId) -> Result<InsertionOrder> {
    let n = metric.n();
    if tail >= n {
        return Err(OnngError::VertexOutOfRange { id: tail, n });
    }
    let mut remaining: Vec<VertexId> = (0..n).filter(|&v| v != tail).collect();
    let mut walk = Vec::with_capacity(n);
    walk.push(tail);
    let mut current = tail;
    while !remaining.is_empty() {
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &u)| metric.rank(current, u))
            .expect("remaining is non-empty");
        current = remaining.swap_remove(idx);
        walk.push(current);
    }
    walk.reverse();
    Ok(InsertionOrder(walk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::PointSet;

    fn line_metric(xs: &[f64]) -> RankedMetric {
        PointSet::from_flat(1, xs.to_vec()).unwrap().metric()
    }

    #[test]
    fn three_points_order_201() {
        let m = line_metric(&[0.0, 1.0, 3.0]);
        let g = build_onng(&m, &InsertionOrder::new(vec![2, 0, 1]).unwrap()).unwrap();
        assert_eq!(g.parent(0), Some(2));
        assert_eq!(g.parent(1), Some(0));
        assert_eq!(g.parent(2), None);
        assert_eq!(g.indegrees(), &[1, 0, 1]);
    }

    #[test]
    fn single_vertex_has_no_edges() {
        let m = RankedMetric::from_pair_ranks(1, &[]).unwrap();
        let g = build_onng(&m, &InsertionOrder::identity(1)).unwrap();
        assert_eq!(g.indegrees(), &[0]);
        assert_eq!(max_indegree(&g), 0);
        assert_eq!(g.edges().count(), 0);
    }

    #[test]
    fn two_vertices_one_edge() {
        let m = RankedMetric::from_pair_ranks(2, &[0]).unwrap();
        let g = build_onng(&m, &InsertionOrder::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(max_indegree(&g), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn hard_line_two_trace() {
        // coordinates {0,1,3,4}; the order 0,4,1,3 by coordinate is ids 0,3,1,2
        let m = line_metric(&[0.0, 1.0, 3.0, 4.0]);
        let g = build_onng(&m, &InsertionOrder::new(vec![0, 3, 1, 2]).unwrap()).unwrap();
        assert_eq!(g.parent(3), Some(0));
        assert_eq!(g.parent(1), Some(0));
        assert_eq!(g.parent(2), Some(3));
        assert_eq!(max_indegree(&g), 2);
    }

    #[test]
    fn non_permutation_is_rejected_with_details() {
        let err = InsertionOrder::for_size(4, vec![0, 0, 5]).unwrap_err();
        assert_eq!(
            err,
            OnngError::NotAPermutation {
                n: 4,
                missing: vec![1, 2, 3],
                duplicate: vec![0],
                out_of_range: vec![5],
            }
        );
        let m = line_metric(&[0.0, 1.0, 3.0]);
        let short = InsertionOrder::identity(2);
        assert!(build_onng(&m, &short).is_err());
    }

    #[test]
    fn path_order_chases_nearest_neighbors() {
        let m = line_metric(&[0.0, 1.0, 3.0]);
        let ord = path_order(&m, 2).unwrap();
        assert_eq!(ord.as_slice(), &[0, 1, 2]);
        let g = build_onng(&m, &ord).unwrap();
        assert_eq!(g.parent(2), Some(1));
        assert_eq!(g.parent(1), Some(0));
        assert_eq!(max_indegree(&g), 1);
    }

    #[test]
    fn path_order_edge_cases() {
        let m = RankedMetric::from_pair_ranks(1, &[]).unwrap();
        assert_eq!(path_order(&m, 0).unwrap().as_slice(), &[0]);
        assert_eq!(
            path_order(&m, 1).unwrap_err(),
            OnngError::VertexOutOfRange { id: 1, n: 1 }
        );
    }
}
