//! Embezzling-state catalyst `|τ^E⟩ = c_M^{-1/2} Σ_j j^{-1/2} |jj⟩`.
//!
//! Every global state of this protocol has the twin form `Σ_v a_v |v⟩_A |v⟩_B`,
//! so the simulators only track one side's amplitudes and reduced states are
//! stored as the `d×d` coefficient matrix of `Σ c_xy |xx⟩⟨yy|`
//! ([`CompressedDensity`]). Index formulas keep the 1-based convention.

mod fidelity;
mod index;
mod simulate;

pub use fidelity::{
    closed_form_fidelity, for_each_term, max_reuse_rounds_distill, plateau_start, reuse_scan,
    ClosedFormTerm,
};
pub use index::{embezzle_permutation, IndexDecomposition};
pub use simulate::{
    catalyst_drift, reduced_main_state, simulate_rounds_oracle, CatalystDrift, CompressedDensity,
    MAX_DRIFT_RESIDUES, MAX_ORACLE_AMPLITUDES,
};

use num_bigint::BigUint;

use crate::error::{param, Result};
use crate::quantum::HilbertDim;

/// Local dimension and Schmidt rank of the embezzling catalyst.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbezzlingSpec {
    d: HilbertDim,
    m: u64,
    c_m: f64,
}

impl EmbezzlingSpec {
    pub fn new(d: HilbertDim, m: u64) -> Result<Self> {
        if m < 1 {
            return Err(param("M", "Schmidt rank must be at least 1"));
        }
        Ok(Self {
            d,
            m,
            c_m: harmonic(m),
        })
    }

    pub fn d(&self) -> HilbertDim {
        self.d
    }

    /// Schmidt rank `M`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Normalizer `c_M = Σ_{j=1}^{M} 1/j`.
    pub fn c_m(&self) -> f64 {
        self.c_m
    }

    /// Amplitude `1/√(c_M·j)` of `|jj⟩`, 1-based.
    #[inline]
    pub fn amplitude(&self, j: u64) -> f64 {
        1.0 / (self.c_m * j as f64).sqrt()
    }
}

/// `M`-th harmonic number, summed smallest term first.
fn harmonic(m: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in (1..=m).rev() {
        let y = 1.0 / j as f64 - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Largest Schmidt rank the closed-form evaluators are meant to handle.
pub const MAX_CONSTRUCTIBLE_RANK: u64 = 10_000_000;

/// Schmidt rank `⌈d^{1/(1-√(1-ε))}⌉` sufficient for a single round to reach
/// fidelity `1-ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtRank {
    pub log2_m: f64,
    /// Exact ceiling when `log₂ M ≤ 64`.
    pub exact: Option<BigUint>,
}

impl SchmidtRank {
    /// `M` exceeds [`MAX_CONSTRUCTIBLE_RANK`]; only `log₂ M` is meaningful
    /// for reporting.
    pub fn astronomical(&self) -> bool {
        self.log2_m > (MAX_CONSTRUCTIBLE_RANK as f64).log2()
    }
}

pub fn schmidt_rank_for(d: HilbertDim, epsilon: f64) -> Result<SchmidtRank> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(param("epsilon", format!("{epsilon} not in (0, 1)")));
    }
    let exponent = 1.0 / (1.0 - (1.0 - epsilon).sqrt());
    let log2_m = exponent * (d.get() as f64).log2();
    if log2_m > 64.0 {
        return Ok(SchmidtRank { log2_m, exact: None });
    }
    // Integral exponents are common (ε = 0.75 gives 2) and powf may land one
    // ulp above the integer, which would bump the ceiling.
    let rounded = exponent.round();
    let exact = if (exponent - rounded).abs() <= 1e-12 {
        BigUint::from(d.get()).pow(rounded as u32)
    } else {
        let value = (d.get() as f64).powf(exponent).ceil();
        BigUint::from(value as u128)
    };
    Ok(SchmidtRank {
        log2_m,
        exact: Some(exact),
    })
}
