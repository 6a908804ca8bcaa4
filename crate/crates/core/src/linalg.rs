//! Dense complex matrix helpers shared by the sector and full-space code.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`; dimensions stay small (the
//! symmetric sector is N+1, the full-space oracle at most 2^12).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// `exp(-i t H)` for Hermitian `H`, via eigendecomposition.
///
/// Only the lower triangle of `h` is read.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = h.clone().symmetric_eigen();
    let phases = eig.eigenvalues.map(|lambda| C64::from_polar(1.0, -t * lambda));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (mut col, phase) in scaled.column_iter_mut().zip(phases.iter()) {
        col *= *phase;
    }
    scaled * v.adjoint()
}

pub fn diagonal(values: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(values))
}

/// Largest entry magnitude of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |M†M - I|`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let id = ComplexMatrix::identity(m.nrows(), m.ncols());
    max_abs_diff(&(m.adjoint() * m), &id)
}

/// `max |M - M†|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && unitarity_defect(m) <= tol
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && hermiticity_defect(m) <= tol
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
