use nalgebra::DVector;

use crate::{c, expm, is_hermitian, kron, CMat, Complex64, Error, Result, ALG_TOL};

/// Column-stack a square matrix.
pub fn stack(x: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(x.as_slice())
}

/// Inverse of [`stack`].
pub fn unstack(v: &DVector<Complex64>, n: usize) -> CMat {
    CMat::from_column_slice(n, n, v.as_slice())
}

/// Linear map on n×n matrices, stored as an n²×n² matrix acting on stacked inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    matrix: CMat,
    dim: usize,
}

impl Superoperator {
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        let n2 = matrix.nrows();
        let dim = (n2 as f64).sqrt().round() as usize;
        if !matrix.is_square() || dim * dim != n2 || dim == 0 {
            return Err(Error::invalid(format!(
                "{}x{} is not a superoperator matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, dim })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMat::identity(n * n, n * n),
            dim: n,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: CMat::zeros(n * n, n * n),
            dim: n,
        }
    }

    /// `X ↦ A X B`.
    pub fn left_right(a: &CMat, b: &CMat) -> Self {
        Self {
            matrix: kron(&b.transpose(), a),
            dim: a.nrows(),
        }
    }

    /// `X ↦ U X U†`.
    pub fn conjugation(u: &CMat) -> Self {
        Self::left_right(u, &u.adjoint())
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        unstack(&(&self.matrix * stack(x)), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
            dim: self.dim,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix + &other.matrix,
            dim: self.dim,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix - &other.matrix,
            dim: self.dim,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            matrix: &self.matrix * s,
            dim: self.dim,
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    /// `[self, other]` as superoperators.
    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            dim: self.dim,
        }
    }

    /// Frobenius norm of the matrix representation.
    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `exp(t · self)`.
    pub fn exp(&self, t: f64) -> Result<Self> {
        Ok(Self {
            matrix: expm(&(&self.matrix * c(t, 0.0)))?,
            dim: self.dim,
        })
    }

    /// Normalised Choi matrix `(1/n) Σ E_ij ⊗ L(E_ij)`.
    pub fn choi(&self) -> CMat {
        let n = self.dim;
        let mut out = CMat::zeros(n * n, n * n);
        let w = c(1.0 / n as f64, 0.0);
        for i in 0..n {
            for j in 0..n {
                // column j*n+i of the matrix is L(E_ij) stacked
                for q in 0..n {
                    for p in 0..n {
                        out[(i * n + p, j * n + q)] = self.matrix[(q * n + p, j * n + i)] * w;
                    }
                }
            }
        }
        out
    }

    /// Row functional `X ↦ tr L(X)` as a vector over stacked indices.
    fn trace_row(&self) -> Vec<Complex64> {
        let n = self.dim;
        (0..n * n)
            .map(|col| (0..n).map(|k| self.matrix[(k * n + k, col)]).sum())
            .collect()
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let n = self.dim;
        self.trace_row().iter().enumerate().all(|(col, v)| {
            let want = if col % (n + 1) == 0 { 1.0 } else { 0.0 };
            (v - c(want, 0.0)).norm() <= tol
        })
    }

    pub fn is_trace_annihilating(&self, tol: f64) -> bool {
        self.trace_row().iter().all(|v| v.norm() <= tol)
    }

    /// `L(X†) = L(X)†` on the matrix-unit basis.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        let n = self.dim;
        let s = tol * self.norm().max(1.0);
        for i in 0..n {
            for j in 0..n {
                // L(E_ji) must equal L(E_ij)†
                for p in 0..n {
                    for q in 0..n {
                        let a = self.matrix[(q * n + p, i * n + j)];
                        let b = self.matrix[(p * n + q, j * n + i)].conj();
                        if (a - b).norm() > s {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Diagonal block: the stochastic action on populations, `M[i][j] = ⟨i|L(|j⟩⟨j|)|i⟩`.
    pub fn population_block(&self) -> CMat {
        let n = self.dim;
        CMat::from_fn(n, n, |i, j| self.matrix[(i * n + i, j * n + j)])
    }
}

/// Commutator superoperator `X ↦ [H, X]` of a Hermitian `H`.
pub fn ad(h: &CMat) -> Result<Superoperator> {
    if !is_hermitian(h, ALG_TOL) {
        return Err(Error::invalid("ad needs a Hermitian matrix"));
    }
    let n = h.nrows();
    let id = CMat::identity(n, n);
    Ok(Superoperator {
        matrix: kron(&id, h) - kron(&h.transpose(), &id),
        dim: n,
    })
}
