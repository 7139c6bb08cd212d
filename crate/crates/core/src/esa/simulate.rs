use nalgebra::DMatrix;
use num_complex::Complex64;

use super::index::{ceil_div, embezzle_permutation, sat_pow};
use super::EmbezzlingSpec;
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, HilbertDim, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

/// Largest one-side amplitude vector `d^r·M` the dense oracle will build.
pub const MAX_ORACLE_AMPLITUDES: u128 = 1_000_000;
/// Largest number of catalyst residues `⌈M/d^r⌉` handled by [`catalyst_drift`].
pub const MAX_DRIFT_RESIDUES: u64 = 2048;

/// `Σ c_xy |xx⟩⟨yy|` stored as the `d×d` matrix `c` (0-based `x, y`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedDensity {
    d: HilbertDim,
    entries: DMatrix<Complex64>,
}

impl CompressedDensity {
    pub(crate) fn from_real(d: HilbertDim, entries: DMatrix<f64>) -> Self {
        Self {
            d,
            entries: entries.map(|v| Complex64::new(v, 0.0)),
        }
    }

    pub fn d(&self) -> HilbertDim {
        self.d
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// `Tr[ρ·φ⁺] = (1/d) Σ_{x,y} c_xy`.
    pub fn entanglement_fidelity(&self) -> f64 {
        self.entries.iter().map(|c| c.re).sum::<f64>() / self.d.get() as f64
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|c| c.re).sum()
    }

    /// Embeds into the `d²`-dimensional twin basis.
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let d = self.d.get();
        let mut m = DMatrix::<Complex64>::zeros(d * d, d * d);
        for x in 0..d {
            for y in 0..d {
                m[(x * d + x, y * d + y)] = self.entries[(x, y)];
            }
        }
        DensityMatrix::from_matrix_unchecked(m)
    }

    /// Hermitian, unit diagonal sum, PSD.
    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {} differs from 1", self.trace())));
        }
        let dev = crate::quantum::max_hermitian_deviation(&self.entries);
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
        }
        let min = crate::quantum::hermitian_eigen(&self.entries).0.min();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Dense simulation of `rounds` protocol rounds.
///
/// Builds the one-side amplitude vector over `(main_r, …, main_1, catalyst)`:
/// each round appends a fresh main register in `|1⟩` and applies the
/// embezzling unitary to (fresh register, catalyst). The reduced state of the
/// last main register is then contracted from the twin-form pure state.
pub fn simulate_rounds_oracle(spec: &EmbezzlingSpec, rounds: u32) -> Result<CompressedDensity> {
    let d = spec.d().get() as u64;
    let m = spec.m();
    let size = (d as u128)
        .checked_pow(rounds)
        .and_then(|p| p.checked_mul(m as u128))
        .unwrap_or(u128::MAX);
    if size > MAX_ORACLE_AMPLITUDES {
        return Err(Error::TooLarge {
            size,
            limit: MAX_ORACLE_AMPLITUDES,
        });
    }
    if rounds == 0 {
        return Err(crate::error::param("rounds", "must be at least 1"));
    }

    // Permutation table of the unitary on (main, catalyst), 0-based linear
    // index (i-1)·M + (j-1) ↦ (k-1)·M + (l-1).
    let mut table = vec![0usize; (d * m) as usize];
    for i in 1..=d {
        for j in 1..=m {
            let (k, l) = embezzle_permutation(i, j, d, m)?;
            table[((i - 1) * m + (j - 1)) as usize] = ((k - 1) * m + (l - 1)) as usize;
        }
    }

    // Layout: index = (main_t·d^{t-1} + earlier mains)·M + catalyst.
    let mut amps: Vec<f64> = (1..=m).map(|j| spec.amplitude(j)).collect();
    let m = m as usize;
    let d = d as usize;
    let mut earlier = 1usize;
    for _ in 0..rounds {
        let mut fresh = vec![0.0f64; amps.len() * d];
        // Fresh register in |1⟩: main value 0 block.
        fresh[..amps.len()].copy_from_slice(&amps);
        let mut next = vec![0.0f64; fresh.len()];
        for main in 0..d {
            for p in 0..earlier {
                for c in 0..m {
                    let src = (main * earlier + p) * m + c;
                    let amp = fresh[src];
                    if amp == 0.0 {
                        continue;
                    }
                    let image = table[main * m + c];
                    let (k, l) = (image / m, image % m);
                    next[(k * earlier + p) * m + l] += amp;
                }
            }
        }
        amps = next;
        earlier *= d;
    }

    // Contract everything except the last main register (the most significant
    // digit): c_xy = Σ_rest a(x, rest)·a(y, rest).
    let rest = earlier / d * m;
    let mut c = DMatrix::<f64>::zeros(d, d);
    for o in 0..rest {
        for x in 0..d {
            let ax = amps[x * rest + o];
            if ax == 0.0 {
                continue;
            }
            for y in 0..d {
                c[(x, y)] += ax * amps[y * rest + o];
            }
        }
    }
    Ok(CompressedDensity::from_real(spec.d(), c))
}

/// Reduced main-system state after `rounds` rounds from the index constraints:
/// `i` and `j` cohere iff they share the catalyst residue `⌈·/d^r⌉` and
/// differ by a multiple of `d^{r-1}`. `O(M·d)`.
pub fn reduced_main_state(spec: &EmbezzlingSpec, rounds: u32) -> CompressedDensity {
    let d = spec.d().get() as u64;
    let m = spec.m();
    let block = sat_pow(d, rounds);
    let stride = if rounds == 0 { 1 } else { sat_pow(d, rounds - 1) };
    let digit = |v: u64| ceil_div(v, stride) - (ceil_div(v, block) - 1) * d;
    let inv_c = 1.0 / spec.c_m();

    let mut c = DMatrix::<f64>::zeros(d as usize, d as usize);
    for i in 1..=m {
        let xi = (digit(i) - 1) as usize;
        c[(xi, xi)] += inv_c / i as f64;
        for h in 1..d {
            let Some(j) = h.checked_mul(stride).and_then(|o| o.checked_add(i)) else {
                break;
            };
            if j > m || ceil_div(i, block) != ceil_div(j, block) {
                break;
            }
            let xj = (digit(j) - 1) as usize;
            let w = inv_c / ((i as f64) * (j as f64)).sqrt();
            c[(xi, xj)] += w;
            c[(xj, xi)] += w;
        }
    }
    CompressedDensity::from_real(spec.d(), c)
}

/// Disturbance of the catalyst after `rounds` rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalystDrift {
    /// Root fidelity with the initial `|τ^E⟩`.
    pub fidelity: f64,
    pub trace_distance: f64,
}

/// Compares the reduced catalyst state with `|τ^E⟩`.
///
/// After `r` rounds index `j` sits at catalyst value `⌈j/d^r⌉` with main
/// digits `(j-1) mod d^r`, so only indices congruent mod `d^r` cohere on the
/// catalyst. Both states live in the twin subspace; the comparison is done in
/// the span of the occupied catalyst values plus the component of `|τ^E⟩`
/// orthogonal to them.
pub fn catalyst_drift(spec: &EmbezzlingSpec, rounds: u32) -> Result<CatalystDrift> {
    if rounds == 0 {
        return Ok(CatalystDrift {
            fidelity: 1.0,
            trace_distance: 0.0,
        });
    }
    let d = spec.d().get() as u64;
    let m = spec.m();
    let block = sat_pow(d, rounds);
    let residues = ceil_div(m, block);
    if residues > MAX_DRIFT_RESIDUES {
        return Err(Error::TooLarge {
            size: residues as u128,
            limit: MAX_DRIFT_RESIDUES as u128,
        });
    }
    let l = residues as usize;
    let mut rho = DMatrix::<f64>::zeros(l + 1, l + 1);
    for o in 0..block.min(m) {
        for a in 0..residues {
            let ja = a * block + o + 1;
            if ja > m {
                break;
            }
            for b in 0..residues {
                let jb = b * block + o + 1;
                if jb > m {
                    break;
                }
                rho[(a as usize, b as usize)] += spec.amplitude(ja) * spec.amplitude(jb);
            }
        }
    }
    let mut target = nalgebra::DVector::<f64>::zeros(l + 1);
    for a in 0..l {
        target[a] = spec.amplitude(a as u64 + 1);
    }
    let tail: f64 = ((l as u64 + 1)..=m).map(|j| spec.amplitude(j).powi(2)).sum();
    target[l] = tail.sqrt();

    let overlap = (target.transpose() * &rho * &target)[(0, 0)];
    let diff = &rho - &target * target.transpose();
    let eig = diff.symmetric_eigen();
    let td = 0.5 * eig.eigenvalues.iter().map(|v| v.abs()).sum::<f64>();
    Ok(CatalystDrift {
        fidelity: overlap.max(0.0).sqrt().min(1.0),
        trace_distance: td.min(1.0),
    })
}
