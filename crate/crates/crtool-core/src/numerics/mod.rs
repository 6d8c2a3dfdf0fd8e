//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Every integer-valued decision (rank, inertia) is made twice, once with
//! `rel_rank_tol` and once with `stability_check_tol`; callers that report
//! integers refuse to do so when the two disagree.

mod decomp;
mod deriv;
mod matrix;

pub use decomp::{
    hermitian_eigen, hermitian_residual, hermitian_signature, hermitian_signature_checked, kernel_basis,
    max_principal_angle, rank_from_singular_values, rank_with_tol, signature_from_eigenvalues, signature_with_scale,
    singular_values, svd, HermitianEigen, Signature, Svd, TolerancePolicy,
};
pub use deriv::{d_derivative_with_step, dbar_derivative, dbar_derivative_with_step, directional_derivative};
pub use matrix::{
    add_vec, conj_vec, det, dot_h, dot_u, norm, orthonormalize, pfaffian, project_out, scale_vec, solve, sub_vec,
    ComplexMatrix,
};

pub use num_complex::Complex64 as C64;

pub(crate) fn unit_vec(n: usize, i: usize) -> alloc::vec::Vec<C64> {
    let mut e = alloc::vec![C64::new(0.0, 0.0); n];
    e[i] = C64::new(1.0, 0.0);
    e
}
