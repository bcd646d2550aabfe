//! Ordered nearest neighbor graphs: each vertex, when revealed, links to its
//! closest predecessor. This crate builds such graphs for any insertion order
//! and synthesizes orders that force a large indegree at one vertex, for
//! points on a line, points in `R^d` and abstract (ordinal) metric spaces. An
//! exhaustive oracle over all orders backs the constructions at small sizes.

pub mod error;
pub mod euclid;
pub mod graph;
pub mod line;
pub mod metric;
pub mod oracle;
pub mod problem1;
pub mod ramsey;
pub mod random;

pub use error::{OnngError, Result};
pub use euclid::{order_euclid, EuclidOrder};
pub use graph::{build_onng, max_indegree, path_order, InsertionOrder, OrderedNNG};
pub use line::{gen_hard_line, order_line, truncate_hard_line, LineOrder, LinePointSet};
pub use metric::{metric_from_points, PointSet, RankedMetric, VertexId};
pub use oracle::{
    best_order_exhaustive, degree_profile_exhaustive, problem1_sum, DegreeProfile, DyadicSum,
};
pub use problem1::{enumerate_rank_metrics, problem1_search, Problem1Report};
pub use ramsey::{
    order_metric, run_process, synthesize_order, MonoStructure, StructureKind, TripleColor,
};
