use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigen-decomposition of a Hermitian matrix. The input is symmetrized first
/// so round-off in the upper triangle cannot leak into the result.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

pub(crate) fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub(crate) fn hermitian_map(m: &DMatrix<Complex64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let (values, vectors) = hermitian_eigen(m);
    let mapped = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(f(v), 0.0)),
    );
    &vectors * DMatrix::from_diagonal(&mapped) * vectors.adjoint()
}

pub(crate) fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().iter().sum()
}

pub(crate) fn max_hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}
