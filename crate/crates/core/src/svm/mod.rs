//! Soft-margin support vector machine trained through its Lagrangian dual,
//! with pluggable Mercer kernels and explicit polynomial feature maps for
//! verification.

mod features;
mod kernel;
mod model;
mod solver;

pub use features::feature_map_poly;
pub use kernel::{gram, kernel_eval, KernelSpec};
pub use model::{classify, duality_report, DualityReport, SvmModel};
pub use solver::{categorize, train, PointCategory, SolverTrace, SvmFit, TrainOptions};
