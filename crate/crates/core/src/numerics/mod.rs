//! Dense linear algebra and deterministic randomness used by every other
//! module.
//!
//! The eigensolver is a cyclic Jacobi iteration (symmetric matrices only),
//! QR is modified Gram-Schmidt with a reorthogonalization pass, and SVD is
//! computed through the eigendecomposition of the smaller Gram matrix.
//! All routines use a deterministic sign convention (first nonzero component
//! of each returned axis is positive) so that results replay bit-for-bit.

mod eig;
mod matrix;
mod qr;
mod rng;
mod solve;
mod svd;

pub use eig::{sym_eig, SymEigResult};
pub use matrix::Matrix;
pub use qr::qr;
pub(crate) use qr::solve_upper;
pub use rng::RngState;
pub use solve::{cholesky, solve_spd};
pub use svd::{svd, SvdResult};

/// Flips `v` in place so its first component larger than `1e-12` in
/// magnitude is positive. No-op for (numerically) zero vectors.
pub(crate) fn canonical_sign(v: &mut [f64]) {
    for &x in v.iter() {
        if x.abs() > 1e-12 {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}
