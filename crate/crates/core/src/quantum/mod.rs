//! Dense complex linear algebra on small Hilbert spaces and the scalar
//! functionals (entanglement fidelity, distances, max-relative entropy) the
//! protocol modules consume.
//!
//! Bipartite spaces use the row-major twin ordering `|i⟩⊗|j⟩ ↔ i·d + j`,
//! 0-based.

mod linalg;
mod measures;
mod partial;
mod state;

pub use measures::{
    entanglement_fidelity, max_relative_entropy, purified_distance, trace_distance,
    uhlmann_fidelity,
};
pub use partial::partial_trace;
pub use state::{
    isotropic_state, maximally_entangled_state, DensityMatrix, HilbertDim, PureStateVector,
    HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
};

pub(crate) use linalg::{hermitian_eigen, max_hermitian_deviation};
