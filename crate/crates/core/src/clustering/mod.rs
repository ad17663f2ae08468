//! Clustering: k-means with its trace-form objective, exhaustive min-cut,
//! ratio-cut and normalized-cut spectral bipartitioning, and iterative
//! doubly-stochastic balancing.

mod cuts;
mod graph;
mod kmeans;
mod sinkhorn;

pub use cuts::{mincut_brute, nassoc_value, ncut_value, normalized_cut, ratio_cut, MincutResult};
pub use graph::{affinity_rbf, AffinityGraph};
pub use kmeans::{kmeans, kmeans_objective_matrix, KmeansResult, Partition};
pub use sinkhorn::{sinkhorn_ds, SinkhornResult};
