//! Spectral analysis of sample data: principal components (direct and
//! small-sample routes), kernel PCA, Fisher discriminants, and canonical
//! correlation.

mod cca;
mod kpca;
mod lda;
mod pca;

pub use cca::{cca, cca_predict, CcaModel};
pub use kpca::{kpca, kpca_distance, kpca_project, KpcaHandle};
pub use lda::{lda2, lda_general, LdaAxes, LdaModel};
pub use pca::{pca, pca_smallsample, SpectralBasis};
