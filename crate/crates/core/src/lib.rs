//! Classical statistical learning and spectral methods, built on a small
//! dense linear-algebra kernel.
//!
//! The crate is organized around self-contained subsystems:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numerics`] | dense matrices, Jacobi eigensolver, QR, SVD, SPD solves, seeded RNG |
//! | [`probability`] | joint tables, Bayes rules, decision risk, Gaussian MLE |
//! | [`infotheory`] | relative entropy, empirical ML, MaxEnt / Gibbs fitting |
//! | [`mixtures`] | EM for Bernoulli-triple, Gaussian, and multinomial mixtures |
//! | [`svm`] | soft-margin SVM via the dual, Mercer kernels, feature maps |
//! | [`spectral`] | PCA (direct + small-sample), kernel PCA, LDA, CCA |
//! | [`clustering`] | k-means, min-cut, ratio-cut, normalized-cut, Sinkhorn balancing |
//! | [`pac`] | growth functions, VC dimension search, sample-complexity bounds |
//!
//! Everything is deterministic: stochastic routines take an explicit seed and
//! replay exactly across platforms.

pub mod clustering;
mod error;
pub mod infotheory;
pub mod mixtures;
pub mod numerics;
pub mod pac;
pub mod probability;
pub mod spectral;
pub mod svm;
pub mod util;

pub use error::{Error, Result};
pub use numerics::{Matrix, RngState, SymEigResult};
pub use probability::{GaussianParams, JointTable, LossMatrix};
pub use svm::{KernelSpec, SvmModel};
