use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linalg::{hermitian_eigen, hermitian_map, hermitian_part};
use super::state::{DensityMatrix, HilbertDim};
use crate::error::{Error, Result};

/// Eigenvalues of `tau` at or below this are treated as outside its support.
const SUPPORT_TOL: f64 = 1e-10;

/// `Tr[state · φ⁺_d]`.
pub fn entanglement_fidelity(state: &DensityMatrix, d: HilbertDim) -> Result<f64> {
    state.require_dim(d.bipartite())?;
    let d = d.get();
    let m = state.matrix();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            sum += m[(i * d + i, j * d + j)];
        }
    }
    Ok(sum.re / d as f64)
}

/// Half the trace norm of `a - b`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.require_dim(b.dim())?;
    let (values, _) = hermitian_eigen(&(a.matrix() - b.matrix()));
    Ok((0.5 * values.iter().map(|v| v.abs()).sum::<f64>()).min(1.0))
}

/// Root fidelity `Tr √(√a · b · √a)`.
pub fn uhlmann_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.require_dim(b.dim())?;
    let sqrt_a = hermitian_map(a.matrix(), |v| v.max(0.0).sqrt());
    let inner = hermitian_part(&(&sqrt_a * b.matrix() * &sqrt_a));
    let (values, _) = hermitian_eigen(&inner);
    Ok(values.iter().map(|v| v.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

/// `√(1 - F²)` with `F` the root fidelity.
pub fn purified_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let f = uhlmann_fidelity(a, b)?;
    Ok((1.0 - f * f).max(0.0).sqrt())
}

/// `D_max(rho‖tau)` in bits: `log₂` of the largest eigenvalue of
/// `tau^{-1/2} rho tau^{-1/2}` restricted to the support of `tau`.
pub fn max_relative_entropy(rho: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    rho.require_dim(tau.dim())?;
    let (values, vectors) = hermitian_eigen(tau.matrix());
    let dim = tau.dim();
    let support: Vec<usize> = (0..dim).filter(|&k| values[k] > SUPPORT_TOL).collect();
    let kernel: Vec<usize> = (0..dim).filter(|&k| values[k] <= SUPPORT_TOL).collect();

    // rho is PSD, so weight outside supp(tau) shows up on the kernel diagonal.
    let outside: f64 = kernel
        .iter()
        .map(|&k| {
            let v = vectors.column(k);
            (v.adjoint() * rho.matrix() * v)[(0, 0)].re
        })
        .sum();
    if outside > SUPPORT_TOL {
        return Err(Error::InfiniteMaxRelativeEntropy);
    }

    let s = support.len();
    let mut whitened_basis = DMatrix::<Complex64>::zeros(dim, s);
    for (col, &k) in support.iter().enumerate() {
        let scale = 1.0 / values[k].sqrt();
        whitened_basis.set_column(col, &vectors.column(k).scale(scale));
    }
    let sandwiched = whitened_basis.adjoint() * rho.matrix() * &whitened_basis;
    let (lambdas, _) = hermitian_eigen(&sandwiched);
    let lambda_max = lambdas.max();
    // For two states λ_max ≥ 1; anything below is round-off.
    Ok(lambda_max.log2().max(0.0))
}
