//! Multi-round simulation of embezzling catalysts.
//!
//! Two catalyst families are covered: the convex-split catalyst `τ^{⊗(n-1)}`
//! ([`csla`]) and the embezzling state with amplitudes `∝ 1/√j` ([`esa`]).
//! For each one the crate provides an exact closed form for the state (or
//! fidelity) produced after `r` reuses, the largest number of reuses that still
//! beats a fidelity-improvement threshold, and a brute-force simulator that
//! the closed forms are checked against. [`teleport`] lifts everything to
//! teleportation through the average-fidelity relation and provides a
//! Bell-measurement simulator for qubits.
//!
//! [`quantum`] holds the dense linear algebra that the rest builds on.

pub mod csla;
pub mod error;
pub mod esa;
pub mod quantum;
pub mod teleport;
pub mod threshold;

pub use error::{Error, Result};
pub use quantum::{DensityMatrix, HilbertDim, PureStateVector};
pub use threshold::{ReuseBound, ThresholdConfig};
