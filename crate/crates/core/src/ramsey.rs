//! Orders for abstract metric spaces via monochromatic structures in the
//! shortest-side triple coloring.
//!
//! For `i1 < i2 < i3` the triple is Red when `{i2, i3}` is its shortest side,
//! Green when `{i1, i3}` is, and Blue when `{i1, i2}` is. A red clique, or a
//! green or blue forward star on `k` vertices, yields an order in which one
//! vertex receives `k - 1` edges. [`run_process`] searches for one with the
//! vertex-picking process that maintains the picked set `U`, the waiting set
//! `W` and an auxiliary colored graph on `U`.

use serde::{Deserialize, Serialize};

use crate::error::{OnngError, Result};
use crate::graph::InsertionOrder;
use crate::line::ceil_log2;
use crate::metric::{RankedMetric, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleColor {
    Red,
    Green,
    Blue,
}

/// A coloring of the ascending triples of `0..len()`.
pub trait Coloring {
    fn len(&self) -> usize;

    /// Color of `(i1, i2, i3)`; callers guarantee `i1 < i2 < i3 < len()`.
    fn color(&self, i1: VertexId, i2: VertexId, i3: VertexId) -> TripleColor;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Coloring for RankedMetric {
    fn len(&self) -> usize {
        self.n()
    }

    #[inline]
    fn color(&self, i1: VertexId, i2: VertexId, i3: VertexId) -> TripleColor {
        let red = self.rank(i2, i3);
        let green = self.rank(i1, i3);
        let blue = self.rank(i1, i2);
        if red < green && red < blue {
            TripleColor::Red
        } else if green < blue {
            TripleColor::Green
        } else {
            TripleColor::Blue
        }
    }
}

/// A coloring given by a closure, for tests and arbitrary hypergraphs.
pub struct FnColoring<F> {
    n: usize,
    f: F,
}

impl<F> FnColoring<F>
where
    F: Fn(VertexId, VertexId, VertexId) -> TripleColor,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> Coloring for FnColoring<F>
where
    F: Fn(VertexId, VertexId, VertexId) -> TripleColor,
{
    fn len(&self) -> usize {
        self.n
    }

    fn color(&self, i1: VertexId, i2: VertexId, i3: VertexId) -> TripleColor {
        (self.f)(i1, i2, i3)
    }
}

/// Checked color of an ascending triple.
pub fn color_triple(
    m: &RankedMetric,
    i1: VertexId,
    i2: VertexId,
    i3: VertexId,
) -> Result<TripleColor> {
    if !(i1 < i2 && i2 < i3) {
        return Err(OnngError::NotAscending(i1, i2, i3));
    }
    if i3 >= m.n() {
        return Err(OnngError::VertexOutOfRange { id: i3, n: m.n() });
    }
    Ok(m.color(i1, i2, i3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    RedClique,
    GreenStar,
    BlueStar,
}

/// A monochromatic red clique or green/blue forward star, vertices ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoStructure {
    pub kind: StructureKind,
    pub vertices: Vec<VertexId>,
}

impl MonoStructure {
    /// Checks every defining triple against `coloring`, independently of how
    /// the structure was found.
    pub fn verify<C: Coloring>(&self, coloring: &C) -> bool {
        let v = &self.vertices;
        if v.windows(2).any(|w| w[0] >= w[1]) || v.last().is_some_and(|&x| x >= coloring.len()) {
            return false;
        }
        match self.kind {
            StructureKind::RedClique => (0..v.len()).all(|a| {
                (a + 1..v.len()).all(|b| {
                    (b + 1..v.len()).all(|c| coloring.color(v[a], v[b], v[c]) == TripleColor::Red)
                })
            }),
            StructureKind::GreenStar | StructureKind::BlueStar => {
                let want = if self.kind == StructureKind::GreenStar {
                    TripleColor::Green
                } else {
                    TripleColor::Blue
                };
                (1..v.len())
                    .all(|b| (b + 1..v.len()).all(|c| coloring.color(v[0], v[b], v[c]) == want))
            }
        }
    }

    /// The vertex that collects `k - 1` edges in the synthesized order.
    pub fn hub(&self) -> Option<VertexId> {
        match self.kind {
            StructureKind::RedClique => self.vertices.last().copied(),
            _ => self.vertices.first().copied(),
        }
    }
}

/// Counters of the auxiliary graph when the process stops.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessStats {
    pub red_vertices: usize,
    pub green_vertices: usize,
    pub blue_vertices: usize,
    pub red_edges: usize,
    pub green_edges: usize,
    pub blue_edges: usize,
    /// Edge events whose surviving waiting set was smaller than the counting
    /// argument allows: below `|W|/k` for green/blue, below `|W|(1 - 2/k)` for red.
    pub retention_violations: usize,
}

impl ProcessStats {
    pub fn vertices(&self) -> usize {
        self.red_vertices + self.green_vertices + self.blue_vertices
    }

    /// The size bounds a run that finds nothing must satisfy: fewer than
    /// `k + 2(k-1)^2` vertices, `2(k-1)^2` green or blue edges and
    /// `k(k-1)^2/2` red edges.
    pub fn within_failure_bounds(&self, k: usize) -> bool {
        let km1 = k.saturating_sub(1);
        self.vertices() < k + 2 * km1 * km1
            && self.green_edges + self.blue_edges < 2 * km1 * km1
            && 2 * self.red_edges < k * km1 * km1
    }
}

/// Result of one run of [`run_process`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessOutcome {
    pub structure: Option<MonoStructure>,
    pub stats: ProcessStats,
}

struct RedVertex {
    id: VertexId,
    green_star: Vec<VertexId>,
    blue_star: Vec<VertexId>,
}

/// Runs the picking process for structures of size `k`.
///
/// The smallest waiting vertex `v` is picked and joined, in order, to the red
/// vertices of `U`. After each new edge `{u, v}` the waiting set is examined:
/// if at least `|W|/k` of its members `w` make `{u, v, w}` green, the edge and
/// `v` turn green and `W` keeps only those; otherwise the same test runs for
/// blue; otherwise the edge is red and `W` keeps the red completions. A green
/// or blue edge ends the edge creation for `v`. With `W` empty every edge is
/// red. After each insertion the process stops on `k` red vertices, or on a
/// red vertex with `k - 1` green (then blue) neighbors.
pub fn run_process<C: Coloring>(coloring: &C, k: usize) -> Result<ProcessOutcome> {
    if k < 3 {
        return Err(OnngError::InvalidParameter(format!(
            "structure size k must be at least 3, got {k}"
        )));
    }
    let n = coloring.len();
    let mut waiting: Vec<VertexId> = (0..n).rev().collect();
    let mut reds: Vec<RedVertex> = Vec::new();
    let mut stats = ProcessStats::default();
    let mut survivors: Vec<VertexId> = Vec::with_capacity(n);

    // `waiting` is kept in descending order so the smallest vertex pops off the end.
    while let Some(v) = waiting.pop() {
        let mut attached: Option<(usize, TripleColor)> = None;
        for (slot, u) in reds.iter().enumerate().map(|(s, r)| (s, r.id)) {
            let size = waiting.len();
            let (mut green, mut blue) = (0usize, 0usize);
            for &w in &waiting {
                match coloring.color(u, v, w) {
                    TripleColor::Green => green += 1,
                    TripleColor::Blue => blue += 1,
                    TripleColor::Red => {}
                }
            }
            let edge = if size > 0 && green * k >= size {
                TripleColor::Green
            } else if size > 0 && blue * k >= size {
                TripleColor::Blue
            } else {
                TripleColor::Red
            };
            survivors.clear();
            survivors.extend(
                waiting
                    .iter()
                    .copied()
                    .filter(|&w| coloring.color(u, v, w) == edge),
            );
            let kept = survivors.len();
            let retained = match edge {
                TripleColor::Red => kept * k >= size * (k - 2),
                _ => kept * k >= size,
            };
            if !retained {
                stats.retention_violations += 1;
            }
            std::mem::swap(&mut waiting, &mut survivors);
            match edge {
                TripleColor::Red => stats.red_edges += 1,
                TripleColor::Green => stats.green_edges += 1,
                TripleColor::Blue => stats.blue_edges += 1,
            }
            if edge != TripleColor::Red {
                attached = Some((slot, edge));
                break;
            }
        }

        match attached {
            None => {
                stats.red_vertices += 1;
                reds.push(RedVertex {
                    id: v,
                    green_star: Vec::new(),
                    blue_star: Vec::new(),
                });
                if reds.len() >= k {
                    let vertices = reds.iter().take(k).map(|r| r.id).collect();
                    return Ok(ProcessOutcome {
                        structure: Some(MonoStructure {
                            kind: StructureKind::RedClique,
                            vertices,
                        }),
                        stats,
                    });
                }
            }
            Some((slot, color)) => {
                let red = &mut reds[slot];
                let (star, kind) = if color == TripleColor::Green {
                    stats.green_vertices += 1;
                    (&mut red.green_star, StructureKind::GreenStar)
                } else {
                    stats.blue_vertices += 1;
                    (&mut red.blue_star, StructureKind::BlueStar)
                };
                star.push(v);
                if star.len() + 1 >= k {
                    let mut vertices = Vec::with_capacity(k);
                    vertices.push(red.id);
                    vertices.extend(star.iter().take(k - 1));
                    return Ok(ProcessOutcome {
                        structure: Some(MonoStructure { kind, vertices }),
                        stats,
                    });
                }
            }
        }
    }
    Ok(ProcessOutcome {
        structure: None,
        stats,
    })
}

/// An order with a designated hub vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubOrder {
    pub order: InsertionOrder,
    pub hub: VertexId,
}

/// Order in which the structure's hub receives an edge from every other
/// structure vertex; the remaining vertices follow in ascending order.
///
/// - red clique `i1 < ... < ik`: `ik, i1, i2, ..., i(k-1)`, hub `ik`
/// - blue star: `i1, ik, i(k-1), ..., i2`, hub `i1`
/// - green star: `i1, i2, ..., ik`, hub `i1`
pub fn synthesize_order(s: &MonoStructure, n: usize) -> Result<HubOrder> {
    let v = &s.vertices;
    if let Some(&bad) = v.iter().find(|&&x| x >= n) {
        return Err(OnngError::VertexOutOfRange { id: bad, n });
    }
    if let Some(w) = v.windows(2).find(|w| w[0] >= w[1]) {
        return Err(OnngError::InvalidParameter(format!(
            "structure vertices must be strictly ascending, found {} before {}",
            w[0], w[1]
        )));
    }
    if v.len() < 2 {
        return Err(OnngError::TooFewVertices {
            what: "synthesize_order",
            min: 2,
            got: v.len(),
        });
    }
    let mut seq = Vec::with_capacity(n);
    match s.kind {
        StructureKind::RedClique => {
            seq.push(v[v.len() - 1]);
            seq.extend_from_slice(&v[..v.len() - 1]);
        }
        StructureKind::BlueStar => {
            seq.push(v[0]);
            seq.extend(v[1..].iter().rev());
        }
        StructureKind::GreenStar => seq.extend_from_slice(v),
    }
    let mut used = vec![false; n];
    for &x in v {
        used[x] = true;
    }
    seq.extend((0..n).filter(|&x| !used[x]));
    let hub = seq[0];
    Ok(HubOrder {
        order: InsertionOrder::for_size(n, seq)?,
        hub,
    })
}

/// One `k` tried by [`order_metric`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub k: usize,
    pub outcome: ProcessOutcome,
}

/// Result of [`order_metric`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricOrder {
    pub order: InsertionOrder,
    pub hub: VertexId,
    /// Size of the certified structure; the hub's indegree is at least
    /// `k_achieved - 1`.
    pub k_achieved: usize,
    pub structure: Option<MonoStructure>,
    /// Every run, largest `k` first, ending with the successful one if any.
    pub attempts: Vec<Attempt>,
}

/// Largest structure size tried by [`order_metric`]:
/// `max(ceil(log2 n), 3)`, capped at `n`.
pub fn max_structure_size(n: usize) -> usize {
    (ceil_log2(n) as usize).max(3).min(n)
}

/// Tries `k = max_structure_size(n)` down to 3 and synthesizes an order from
/// the first structure found. Without one, falls back to the identity order,
/// where vertex 0 receives the edge from vertex 1 (`k_achieved = 2`).
pub fn order_metric(m: &RankedMetric) -> Result<MetricOrder> {
    let n = m.n();
    if n < 2 {
        return Err(OnngError::TooFewVertices {
            what: "order_metric",
            min: 2,
            got: n,
        });
    }
    let mut attempts = Vec::new();
    for k in (3..=max_structure_size(n)).rev() {
        let outcome = run_process(m, k)?;
        let found = outcome.structure.clone();
        attempts.push(Attempt { k, outcome });
        if let Some(s) = found {
            let HubOrder { order, hub } = synthesize_order(&s, n)?;
            return Ok(MetricOrder {
                order,
                hub,
                k_achieved: k,
                structure: Some(s),
                attempts,
            });
        }
    }
    Ok(MetricOrder {
        order: InsertionOrder::identity(n),
        hub: 0,
        k_achieved: 2,
        structure: None,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_onng;
    use crate::metric::PointSet;

    fn ranks(n: usize, r: &[u32]) -> RankedMetric {
        RankedMetric::from_pair_ranks(n, r).unwrap()
    }

    #[test]
    fn colors_by_shortest_side() {
        // lexicographic pairs (0,1), (0,2), (1,2)
        assert_eq!(
            color_triple(&ranks(3, &[1, 2, 0]), 0, 1, 2).unwrap(),
            TripleColor::Red
        );
        assert_eq!(
            color_triple(&ranks(3, &[1, 0, 2]), 0, 1, 2).unwrap(),
            TripleColor::Green
        );
        assert_eq!(
            color_triple(&ranks(3, &[0, 1, 2]), 0, 1, 2).unwrap(),
            TripleColor::Blue
        );
        assert_eq!(
            color_triple(&ranks(3, &[0, 1, 2]), 1, 0, 2).unwrap_err(),
            OnngError::NotAscending(1, 0, 2)
        );
        assert!(color_triple(&ranks(3, &[0, 1, 2]), 0, 1, 3).is_err());
    }

    #[test]
    fn all_red_three() {
        let c = FnColoring::new(3, |_, _, _| TripleColor::Red);
        let out = run_process(&c, 3).unwrap();
        assert_eq!(
            out.structure,
            Some(MonoStructure {
                kind: StructureKind::RedClique,
                vertices: vec![0, 1, 2]
            })
        );
        assert_eq!(out.stats.red_edges, 3);
        assert_eq!(out.stats.retention_violations, 0);
    }

    #[test]
    fn too_few_vertices_for_k() {
        let c = FnColoring::new(3, |_, _, _| TripleColor::Red);
        let out = run_process(&c, 4).unwrap();
        assert_eq!(out.structure, None);
        assert!(out.stats.within_failure_bounds(4));
        assert!(run_process(&c, 2).is_err());
    }

    #[test]
    fn all_green_gives_green_star() {
        let c = FnColoring::new(6, |_, _, _| TripleColor::Green);
        let s = run_process(&c, 4).unwrap().structure.unwrap();
        assert_eq!(s.kind, StructureKind::GreenStar);
        assert_eq!(s.vertices, vec![0, 1, 2, 3]);
        assert!(s.verify(&c));
    }

    #[test]
    fn all_blue_gives_blue_star() {
        let c = FnColoring::new(6, |_, _, _| TripleColor::Blue);
        let s = run_process(&c, 3).unwrap().structure.unwrap();
        assert_eq!(s.kind, StructureKind::BlueStar);
        assert!(s.verify(&c));
        assert!(!MonoStructure {
            kind: StructureKind::GreenStar,
            vertices: s.vertices.clone()
        }
        .verify(&c));
    }

    #[test]
    fn synthesized_patterns() {
        let red = MonoStructure {
            kind: StructureKind::RedClique,
            vertices: vec![0, 1, 2],
        };
        assert_eq!(
            synthesize_order(&red, 4).unwrap().order.as_slice(),
            &[2, 0, 1, 3]
        );
        assert_eq!(synthesize_order(&red, 4).unwrap().hub, 2);
        let blue = MonoStructure {
            kind: StructureKind::BlueStar,
            vertices: vec![0, 1, 2],
        };
        assert_eq!(
            synthesize_order(&blue, 3).unwrap().order.as_slice(),
            &[0, 2, 1]
        );
        let green = MonoStructure {
            kind: StructureKind::GreenStar,
            vertices: vec![0, 1, 2],
        };
        assert_eq!(
            synthesize_order(&green, 3).unwrap().order.as_slice(),
            &[0, 1, 2]
        );
        assert!(synthesize_order(&green, 2).is_err());
        let unsorted = MonoStructure {
            kind: StructureKind::GreenStar,
            vertices: vec![1, 0],
        };
        assert!(synthesize_order(&unsorted, 3).is_err());
    }

    #[test]
    fn two_points_fall_back() {
        let mo = order_metric(&ranks(2, &[0])).unwrap();
        assert_eq!(mo.k_achieved, 2);
        let g = build_onng(&ranks(2, &[0]), &mo.order).unwrap();
        assert_eq!(g.max_indegree(), 1);
        assert!(order_metric(&ranks(1, &[])).is_err());
    }

    #[test]
    fn three_line_points_form_red_clique() {
        let m = PointSet::from_flat(1, vec![0.0, 10.0, 11.0])
            .unwrap()
            .metric();
        assert_eq!(m.color(0, 1, 2), TripleColor::Red);
        let mo = order_metric(&m).unwrap();
        assert_eq!(mo.k_achieved, 3);
        assert_eq!(mo.order.as_slice(), &[2, 0, 1]);
        let g = build_onng(&m, &mo.order).unwrap();
        assert_eq!(g.indegree(2), 2);
    }

    #[test]
    fn failure_counters_on_small_structures() {
        // alternating colors keep the process from concentrating quickly
        let c = FnColoring::new(40, |a, b, c| match (a + 2 * b + 3 * c) % 3 {
            0 => TripleColor::Red,
            1 => TripleColor::Green,
            _ => TripleColor::Blue,
        });
        for k in 3..8 {
            let out = run_process(&c, k).unwrap();
            assert_eq!(out.stats.retention_violations, 0);
            match out.structure {
                Some(s) => assert!(s.verify(&c)),
                None => assert!(out.stats.within_failure_bounds(k)),
            }
        }
    }
}
