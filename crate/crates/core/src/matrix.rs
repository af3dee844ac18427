//! Dense complex operator matrices that remember how much of themselves
//! survives basis truncation.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix in the weight basis with a trust boundary.
///
/// `trust_rows` counts the leading basis states on which the matrix is
/// unaffected by truncation. Exact operators carry `trust_rows == dim`.
/// Each truncated ladder factor in a product costs one row, so the trust of
/// `A * B` is `trust(A) + trust(B) - dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    trust_rows: usize,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, trust_rows: usize) -> Result<Self> {
        let dim = entries.nrows();
        if dim == 0 || entries.ncols() != dim {
            return Err(Error::InvalidDimension { dim, reason: "operator must be square and non-empty" });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDimension { dim, reason: "operator has non-finite entries" });
        }
        Ok(Self { entries, trust_rows: trust_rows.min(dim) })
    }

    pub(crate) fn from_parts(entries: DMatrix<Complex64>, trust_rows: usize) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        let trust_rows = trust_rows.min(entries.nrows());
        Self { entries, trust_rows }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_parts(DMatrix::identity(dim, dim), dim)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_parts(DMatrix::zeros(dim, dim), dim)
    }

    /// Exact diagonal operator.
    pub fn diagonal<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let v: Vec<Complex64> = values.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        let dim = v.len();
        Self::from_parts(DMatrix::from_diagonal(&DVector::from_vec(v)), dim)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trust_rows(&self) -> usize {
        self.trust_rows
    }

    pub fn with_trust(mut self, trust_rows: usize) -> Self {
        self.trust_rows = trust_rows.min(self.dim());
        self
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.entries.adjoint(), self.trust_rows)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::from_parts(&self.entries * z, self.trust_rows)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: v.len() });
        }
        Ok(&self.entries * v)
    }

    /// Largest entry modulus over the leading `block × block` submatrix.
    pub fn max_abs_block(&self, block: usize) -> f64 {
        self.max_abs_range(0, block)
    }

    /// Largest entry modulus over rows and columns in `start..end`.
    pub fn max_abs_range(&self, start: usize, end: usize) -> f64 {
        let end = end.min(self.dim());
        let mut m = 0.0f64;
        for j in start..end {
            for i in start..end {
                m = m.max(self.entries[(i, j)].norm());
            }
        }
        m
    }

    /// Induced 1-norm (maximum column sum).
    pub fn norm_one(&self) -> f64 {
        self.entries.column_iter().map(|col| col.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    fn combined_trust(&self, other: &Self) -> usize {
        (self.trust_rows + other.trust_rows).saturating_sub(self.dim())
    }
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix::from_parts(&self.entries * &rhs.entries, self.combined_trust(rhs))
    }
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix::from_parts(&self.entries + &rhs.entries, self.trust_rows.min(rhs.trust_rows))
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix::from_parts(&self.entries - &rhs.entries, self.trust_rows.min(rhs.trust_rows))
    }
}
