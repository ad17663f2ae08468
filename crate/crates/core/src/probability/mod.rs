//! Discrete Bayesian inference, decision rules, independence
//! factorizations, Gaussian maximum likelihood, and the two-class normal
//! decision boundary.

mod bayes;
mod gaussian;
mod table;

pub use bayes::{
    decide, incremental_posterior, independent_joint, posterior_bayes, Decision, IndependentJoint,
    LossMatrix, ParameterCount,
};
pub use gaussian::{
    coin_mle, gaussian_mle, two_class_normal_boundary, CovarianceMode, GaussianParams,
    NormalBoundary,
};
pub use table::{conditional, marginals, ConditionalTable, Conditioning, JointTable, Marginals};
