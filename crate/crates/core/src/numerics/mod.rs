//! Dense complex linear algebra: matrices, Kronecker products, a Hermitian
//! eigensolver, PSD square roots, density matrices and partial traces.

mod density;
mod eigen;
mod matrix;

pub use density::{partial_trace, partial_trace_matrix, DensityMatrix, TRACE_TOL};
pub use eigen::{eig_hermitian, min_eigenvalue, sqrt_psd, HermitianEigen, HERMITIAN_TOL, PSD_TOL};
pub use matrix::{
    inner, kron, kron_all, kron_vec, norm, real_vec, ComplexMatrix, C64, I, ONE, ZERO,
};
