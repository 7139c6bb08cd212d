//! Convex-split catalyst `τ^{⊗(n-1)}` reused over several distillation rounds.
//!
//! Slot layout used throughout: slots `0..n-1` hold the catalyst, slot
//! `n-2+t` is the main system of round `t` (1-based `t`).

mod bounds;
mod mixture;
mod oracle;

pub use bounds::{
    catalyst_index_pair, closed_form_coefficients, closed_form_output, fidelity_gain,
    main_index_pair, max_reuse_rounds_distill, required_copies, reuse_bound,
};
pub use mixture::{IndexPair, Label, LabelDistribution, LabeledMixture, MAX_REALIZED_DIM};
pub use oracle::{label_oracle, simulate_reuse_oracle, RoundSnapshot, MAX_ORACLE_BRANCHES};

use crate::error::{param, Result};
use crate::quantum::{DensityMatrix, HilbertDim};

/// Copy parameter `n` plus the input and catalyst constituent states.
#[derive(Debug, Clone)]
pub struct CslaConfig {
    n: u64,
    rho: DensityMatrix,
    tau: DensityMatrix,
    d: HilbertDim,
}

impl CslaConfig {
    pub fn new(n: u64, rho: DensityMatrix, tau: DensityMatrix, d: HilbertDim) -> Result<Self> {
        check_n(n)?;
        rho.require_dim(d.bipartite())?;
        tau.require_dim(d.bipartite())?;
        Ok(Self { n, rho, tau, d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }
    pub fn tau(&self) -> &DensityMatrix {
        &self.tau
    }
    pub fn d(&self) -> HilbertDim {
        self.d
    }
}

pub(crate) fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(param("n", format!("{n} < 2")));
    }
    Ok(())
}
