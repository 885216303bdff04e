//! Dense square complex matrices.
//!
//! Storage is row-major. Nothing here requires a power-of-two dimension;
//! gates happen to have one, arbitrary operators loaded from files need not.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub mod io;

/// One amplitude entry `<i|U|j>`.
pub type ComplexScalar = Complex64;

/// Largest dimension any constructor or product will produce unless told otherwise.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Tolerance used by [`check_unitarity`] callers that have no better idea.
pub const DEFAULT_UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {found}")]
    EntryCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("shape error: row {row} has {found} entries, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension {requested} exceeds the limit of {limit}")]
    DimensionLimit { requested: usize, limit: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: Box<MatrixError>,
    },
}

impl MatrixError {
    /// True for errors caused by a configured size limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        match self {
            MatrixError::DimensionLimit { .. } => true,
            MatrixError::File { source, .. } => source.is_limit(),
            _ => false,
        }
    }
}

/// Dense `N x N` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries; `entries.len()` must be `dim * dim`.
    pub fn new(dim: usize, entries: Vec<ComplexScalar>) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let expected = dim.checked_mul(dim).ok_or(MatrixError::DimensionLimit {
            requested: dim,
            limit: DEFAULT_MAX_DIM,
        })?;
        if entries.len() != expected {
            return Err(MatrixError::EntryCount {
                dim,
                expected,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from a list of rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<ComplexScalar>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::Shape {
                    row: r + 1,
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    /// Real-valued matrix from row-major values.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self, MatrixError> {
        Self::new(dim, values.iter().map(|&v| ComplexScalar::new(v, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "identity of dimension 0");
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ComplexScalar::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix of dimension 0");
        Self {
            dim,
            entries: vec![ComplexScalar::new(0.0, 0.0); dim * dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[ComplexScalar] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ComplexScalar]> {
        self.entries.chunks_exact(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c];
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = self.transpose();
        out.entries.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn scale(&self, factor: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Ordinary matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.dim != rhs.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let lhs_row = self.row(r);
            let out_row = &mut out.entries[r * n..(r + 1) * n];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == ComplexScalar::new(0.0, 0.0) {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise equality within `tolerance`; matrices of different size are never equal.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.max_abs_diff(other)
            .map(|d| d <= tolerance)
            .unwrap_or(false)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{z}")).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product with the default dimension limit.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
    kron_with_limit(a, b, DEFAULT_MAX_DIM)
}

/// Kronecker product `a ⊗ b`.
///
/// The left operand owns the high-order index digits:
/// `out[p * nb + r, q * nb + s] = a[p, q] * b[r, s]`.
pub fn kron_with_limit(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_dim: usize,
) -> Result<ComplexMatrix, MatrixError> {
    let (na, nb) = (a.dim, b.dim);
    let n = na
        .checked_mul(nb)
        .filter(|&n| n <= max_dim)
        .ok_or(MatrixError::DimensionLimit {
            requested: na.saturating_mul(nb),
            limit: max_dim,
        })?;
    let mut entries = Vec::with_capacity(n * n);
    for p in 0..na {
        for r in 0..nb {
            for q in 0..na {
                let apq = a.get(p, q);
                entries.extend(b.row(r).iter().map(|&brs| apq * brs));
            }
        }
    }
    Ok(ComplexMatrix { dim: n, entries })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitarityReport {
    pub is_unitary: bool,
    /// Largest `|(U U^dagger - I)_ij|`.
    pub max_deviation: f64,
    pub tolerance_used: f64,
}

/// Measures how far `U U^dagger` is from the identity.
///
/// Panics if `tolerance` is not strictly positive.
pub fn check_unitarity(m: &ComplexMatrix, tolerance: f64) -> UnitarityReport {
    assert!(tolerance > 0.0, "unitarity tolerance must be positive");
    let n = m.dim;
    let mut max_deviation: f64 = 0.0;
    // (U U^dagger)_ij = sum_k U_ik conj(U_jk), i.e. row i dotted with conj(row j)
    for i in 0..n {
        let ri = m.row(i);
        for j in 0..n {
            let rj = m.row(j);
            let dot: ComplexScalar = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((dot - target).norm());
        }
    }
    UnitarityReport {
        is_unitary: max_deviation <= tolerance,
        max_deviation,
        tolerance_used: tolerance,
    }
}
