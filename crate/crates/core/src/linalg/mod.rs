//! Dense complex linear algebra.

mod decomp;
mod matrix;

pub use decomp::{
    complete_to_unitary, expm_i_hermitian, gram_schmidt, gram_schmidt_scaled, hermitian_eigen, normalize_phase, null_space_basis, null_space_basis_scaled,
    orthonormal_completion_vecs, polar, polar_isometry, psd_sqrt, qr_triangle, svd, vdot, vnorm, EigenDecomposition, Svd,
};
pub use matrix::{hs_inner, kron, kron_all, CMatrix};
