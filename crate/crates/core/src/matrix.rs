use crate::{CMat, Complex64, Error, RMat, Result};

/// Kronecker product, first factor outermost.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

fn scale(m: &CMat) -> f64 {
    m.norm().max(1.0)
}

pub fn is_hermitian(h: &CMat, tol: f64) -> bool {
    h.is_square() && (h - h.adjoint()).norm() <= tol * scale(h)
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    u.is_square() && (u.adjoint() * u - CMat::identity(u.nrows(), u.ncols())).norm() <= tol
}

pub fn is_column_stochastic(a: &RMat, tol: f64) -> bool {
    a.is_square()
        && a.iter().all(|&v| v >= -tol)
        && a.column_iter().all(|c| (c.sum() - 1.0).abs() <= tol)
}

/// Column-stochastic with `A d = d`.
pub fn is_d_stochastic(a: &RMat, d: &[f64], tol: f64) -> bool {
    if !is_column_stochastic(a, tol) || d.len() != a.nrows() {
        return false;
    }
    (0..d.len()).all(|i| {
        let ad: f64 = (0..d.len()).map(|j| a[(i, j)] * d[j]).sum();
        (ad - d[i]).abs() <= tol
    })
}

pub fn is_permutation_matrix(a: &RMat) -> bool {
    a.is_square()
        && a.iter().all(|&v| v == 0.0 || v == 1.0)
        && a.row_iter().all(|r| r.sum() == 1.0)
        && a.column_iter().all(|c| c.sum() == 1.0)
}

/// Partial trace with respect to `x`: the unique `M` with
/// `tr(A M) = tr((A ⊗ X) B)` for all system operators `A`.
///
/// `x` is m×m and `b` is (n·m)×(n·m); the result is n×n.
pub fn partial_trace_wrt(x: &CMat, b: &CMat) -> Result<CMat> {
    let m = x.nrows();
    if !x.is_square() || !b.is_square() || m == 0 || !b.nrows().is_multiple_of(m) {
        return Err(Error::invalid(format!(
            "cannot factor {}x{} by {}x{}",
            b.nrows(),
            b.ncols(),
            x.nrows(),
            x.ncols()
        )));
    }
    let n = b.nrows() / m;
    Ok(CMat::from_fn(n, n, |i, j| {
        let mut s = Complex64::new(0.0, 0.0);
        for a in 0..m {
            for bb in 0..m {
                s += x[(bb, a)] * b[(i * m + a, j * m + bb)];
            }
        }
        s
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    General,
    ColumnStochastic,
    DStochastic,
    Permutation,
    Hermitian,
    Unitary,
}

/// Square matrix whose kind was checked when it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    entries: CMat,
    kind: MatrixKind,
}

impl SquareMatrix {
    /// Check `entries` against `kind`. `d` is required for [`MatrixKind::DStochastic`].
    pub fn new(entries: CMat, kind: MatrixKind, d: Option<&[f64]>, tol: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::invalid("matrix is not square"));
        }
        let real = || -> Result<RMat> {
            if entries.iter().any(|z| z.im.abs() > tol) {
                return Err(Error::invalid("stochastic matrices must be real"));
            }
            Ok(entries.map(|z| z.re))
        };
        let ok = match kind {
            MatrixKind::General => true,
            MatrixKind::ColumnStochastic => is_column_stochastic(&real()?, tol),
            MatrixKind::DStochastic => {
                let d = d.ok_or_else(|| Error::invalid("d-stochastic check needs d"))?;
                is_d_stochastic(&real()?, d, tol)
            }
            MatrixKind::Permutation => is_permutation_matrix(&real()?),
            MatrixKind::Hermitian => is_hermitian(&entries, tol),
            MatrixKind::Unitary => is_unitary(&entries, tol),
        };
        if !ok {
            return Err(Error::invalid(format!("matrix is not {kind:?}")));
        }
        Ok(Self { entries, kind })
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn real_part(&self) -> RMat {
        self.entries.map(|z| z.re)
    }
}
