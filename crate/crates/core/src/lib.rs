//! Dense linear algebra for small open quantum systems and stochastic vectors.
//!
//! Superoperators act on column-stacked matrices: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`,
//! so the matrix unit `E_ij` sits at stacked index `j * n + i`. Tensor products
//! put the system factor first.

pub mod error;
pub mod expm;
pub mod json;
pub mod lp;
pub mod matrix;
pub mod perm;
pub mod superop;
pub mod vector;

pub use error::{Error, Result};
pub use expm::{expm, expm_real};
pub use matrix::{
    commutator, is_column_stochastic, is_d_stochastic, is_hermitian, is_permutation_matrix,
    is_unitary, kron, partial_trace_wrt, MatrixKind, SquareMatrix,
};
pub use perm::Permutation;
pub use superop::{ad, stack, unstack, Superoperator};
pub use vector::{gibbs_vector, GibbsVector, ProbVector};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

/// Complex dense matrix.
pub type CMat = DMatrix<Complex64>;
/// Real dense matrix.
pub type RMat = DMatrix<f64>;

/// Default tolerance for algebraic identities.
pub const ALG_TOL: f64 = 1e-9;
/// Default tolerance for geometric comparisons (polytopes, curves).
pub const GEOM_TOL: f64 = 1e-6;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Promote a real matrix to a complex one.
pub fn complexify(m: &RMat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Complex diagonal matrix from real entries.
pub fn diag_c(entries: &[f64]) -> CMat {
    let n = entries.len();
    let mut m = CMat::zeros(n, n);
    for (i, &v) in entries.iter().enumerate() {
        m[(i, i)] = c(v, 0.0);
    }
    m
}

/// Matrix unit `|i⟩⟨j|` of size n.
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}
