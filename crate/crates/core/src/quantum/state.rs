use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::linalg::{hermitian_eigen, max_hermitian_deviation, trace};
use crate::error::{param, Error, Result};

/// Maximum entry-wise deviation from the conjugate transpose.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Maximum deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

/// Local dimension `d` of one side of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertDim(usize);

impl HilbertDim {
    pub const QUBIT: HilbertDim = HilbertDim(2);

    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Dimension `d²` of the bipartite space.
    #[inline]
    pub fn bipartite(self) -> usize {
        self.0 * self.0
    }
}

impl fmt::Display for HilbertDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: DVector<Complex64>,
}

impl PureStateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} differs from 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Computational basis state `|index⟩` in a space of size `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(param("index", format!("{index} >= dimension {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(&self.amplitudes * self.amplitudes.adjoint())
    }
}

/// Trace-one positive-semidefinite matrix.
///
/// Construction through [`DensityMatrix::new`] checks the three invariants
/// (Hermitian, unit trace, PSD) against the module tolerances. Operations in
/// this crate that provably preserve them skip the eigen-solve; call
/// [`DensityMatrix::validate`] to re-check an emitted state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        let state = Self::from_matrix_unchecked(data);
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(data: DMatrix<Complex64>) -> Self {
        debug_assert!(data.is_square());
        Self { data }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        let diag = DVector::from_iterator(
            probabilities.len(),
            probabilities.iter().map(|&p| Complex64::new(p, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&diag))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(param("dim", "must be positive"));
        }
        Ok(Self::from_matrix_unchecked(
            DMatrix::<Complex64>::identity(dim, dim).unscale(dim as f64),
        ))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.data)
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigen(&self.data).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().min()
    }

    /// Re-checks the Hermitian, trace and PSD invariants.
    pub fn validate(&self) -> Result<()> {
        if !self.data.is_square() || self.data.nrows() == 0 {
            return Err(Error::InvalidState("matrix must be square and nonempty".into()));
        }
        let herm = max_hermitian_deviation(&self.data);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(self.data.kronecker(&other.data))
    }

    /// Convex combination `Σ wᵢ·stateᵢ`. Weights must be non-negative and sum
    /// to one within [`TRACE_TOL`].
    pub fn convex(terms: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| param("terms", "empty convex combination"))?;
        let dim = first.dim();
        let mut total = 0.0;
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for &(w, state) in terms {
            if state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: state.dim(),
                });
            }
            if w.is_nan() || w < 0.0 {
                return Err(param("weight", format!("{w} is negative")));
            }
            total += w;
            acc += state.data.scale(w);
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(param("weight", format!("weights sum to {total}")));
        }
        Ok(Self::from_matrix_unchecked(acc))
    }

    pub(crate) fn require_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dim(),
            });
        }
        Ok(())
    }
}

/// Projector onto `(1/√d) Σᵢ |ii⟩`.
pub fn maximally_entangled_state(d: HilbertDim) -> DensityMatrix {
    let d = d.get();
    let mut m = DMatrix::<Complex64>::zeros(d * d, d * d);
    let w = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = w;
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// `p·φ⁺ + (1-p)·I/d²` with `p` chosen so the entanglement fidelity equals
/// `target_fidelity`.
pub fn isotropic_state(target_fidelity: f64, d: HilbertDim) -> Result<DensityMatrix> {
    let dd = d.bipartite() as f64;
    let floor = 1.0 / dd;
    if !(floor..=1.0).contains(&target_fidelity) {
        return Err(param(
            "target_fidelity",
            format!("{target_fidelity} outside [{floor}, 1]"),
        ));
    }
    let p = (target_fidelity - floor) / (1.0 - floor);
    let phi = maximally_entangled_state(d);
    let mixed = DensityMatrix::maximally_mixed(d.bipartite())?;
    DensityMatrix::convex(&[(p, &phi), (1.0 - p, &mixed)])
}
