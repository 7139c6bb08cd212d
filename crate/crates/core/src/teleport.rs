//! Teleportation with a catalytically distilled resource.
//!
//! Standard teleportation over a resource of entanglement fidelity `F` has
//! average fidelity `f = (F·d + 1)/(d + 1)`, so every distillation result
//! carries over with the effective threshold `(d+1)ε/d`.

use nalgebra::{DVector, Matrix2, Matrix2x4, Matrix4, Vector2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::csla::{self, CslaConfig};
use crate::error::{param, Error, Result};
use crate::esa::{self, EmbezzlingSpec};
use crate::quantum::{DensityMatrix, HilbertDim, PureStateVector};
use crate::threshold::{ReuseBound, ThresholdConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    Standard,
    Csla,
    Esa,
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Protocol::Standard => "standard",
            Protocol::Csla => "csla",
            Protocol::Esa => "esa",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportOutcome {
    pub average_fidelity: f64,
    /// Entanglement fidelity of the resource that was teleported over.
    pub entanglement_fidelity: f64,
    pub rounds: u64,
    pub protocol: Protocol,
}

/// `(F·d + 1)/(d + 1)`.
pub fn avg_fidelity_from_ent_fidelity(f: f64, d: HilbertDim) -> f64 {
    let d = d.get() as f64;
    (f * d + 1.0) / (d + 1.0)
}

/// Threshold on the entanglement-fidelity gain equivalent to an average
/// fidelity gain of `ε`.
pub fn effective_threshold(epsilon: f64, d: HilbertDim) -> f64 {
    let d = d.get() as f64;
    (d + 1.0) * epsilon / d
}

/// Teleportation without a catalyst.
pub fn standard_teleport_fidelity(thr: &ThresholdConfig, d: HilbertDim) -> TeleportOutcome {
    TeleportOutcome {
        average_fidelity: avg_fidelity_from_ent_fidelity(thr.f_rho(), d),
        entanglement_fidelity: thr.f_rho(),
        rounds: 0,
        protocol: Protocol::Standard,
    }
}

/// Teleportation over the round-`rounds` output of the convex-split protocol.
pub fn catalytic_teleport_fidelity_csla(
    thr: &ThresholdConfig,
    n: u64,
    rounds: u64,
    d: HilbertDim,
) -> Result<TeleportOutcome> {
    csla::check_n(n)?;
    let f = thr.f_rho() + csla::fidelity_gain(thr, n, rounds);
    Ok(TeleportOutcome {
        average_fidelity: avg_fidelity_from_ent_fidelity(f, d),
        entanglement_fidelity: f,
        rounds,
        protocol: Protocol::Csla,
    })
}

/// Same as [`catalytic_teleport_fidelity_csla`] but reading the weights off a
/// dense [`CslaConfig`].
pub fn catalytic_teleport_state_csla(config: &CslaConfig, rounds: u32) -> Result<TeleportOutcome> {
    let out = csla::closed_form_output(config, rounds)?;
    let f = crate::quantum::entanglement_fidelity(&out, config.d())?;
    Ok(TeleportOutcome {
        average_fidelity: avg_fidelity_from_ent_fidelity(f, config.d()),
        entanglement_fidelity: f,
        rounds: rounds as u64,
        protocol: Protocol::Csla,
    })
}

/// Teleportation over the round-`rounds` output of the embezzling protocol.
pub fn catalytic_teleport_fidelity_esa(spec: &EmbezzlingSpec, rounds: u32) -> Result<TeleportOutcome> {
    let f = esa::closed_form_fidelity(spec, rounds)?;
    Ok(TeleportOutcome {
        average_fidelity: avg_fidelity_from_ent_fidelity(f, spec.d()),
        entanglement_fidelity: f,
        rounds: rounds as u64,
        protocol: Protocol::Esa,
    })
}

pub fn max_reuse_rounds_teleport_csla(thr: &ThresholdConfig, n: u64, d: HilbertDim) -> Result<ReuseBound> {
    csla::reuse_bound(thr, effective_threshold(thr.epsilon(), d), n)
}

pub fn max_reuse_rounds_teleport_esa(spec: &EmbezzlingSpec, thr: &ThresholdConfig) -> Result<ReuseBound> {
    esa::reuse_scan(spec, thr, effective_threshold(thr.epsilon(), spec.d()))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Bell states on (message, Alice) as 2×2 coefficient matrices `Φ[m, a]`,
/// in the order Φ⁺, Φ⁻, Ψ⁺, Ψ⁻.
fn bell_states() -> [Matrix2<Complex64>; 4] {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = c(0.0, 0.0);
    [
        Matrix2::new(h, z, z, h),
        Matrix2::new(h, z, z, -h),
        Matrix2::new(z, h, h, z),
        Matrix2::new(z, h, -h, z),
    ]
}

/// Bob's corrections `I, Z, X, ZX` matching [`bell_states`].
fn corrections() -> [Matrix2<Complex64>; 4] {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let x = Matrix2::new(z, o, o, z);
    let zz = Matrix2::new(o, z, z, -o);
    [Matrix2::identity(), zz, x, zz * x]
}

/// Qubit teleportation of `message` over `resource` (Alice ⊗ Bob).
///
/// Alice measures (message, her half) in the Bell basis and Bob applies the
/// matching Pauli. Returns `Σ_k ⟨ψ|U_k ρ_k U_k†|ψ⟩` with `ρ_k` Bob's
/// unnormalized conditional state.
pub fn simulate_standard_teleportation(resource: &DensityMatrix, message: &PureStateVector) -> Result<f64> {
    Teleporter::new(resource)?.fidelity(message)
}

struct Teleporter {
    resource: Matrix4<Complex64>,
    bell: [Matrix2<Complex64>; 4],
    fix: [Matrix2<Complex64>; 4],
}

impl Teleporter {
    fn new(resource: &DensityMatrix) -> Result<Self> {
        resource.require_dim(4)?;
        Ok(Self {
            resource: Matrix4::from_fn(|i, j| resource.matrix()[(i, j)]),
            bell: bell_states(),
            fix: corrections(),
        })
    }

    fn fidelity(&self, message: &PureStateVector) -> Result<f64> {
        if message.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: message.dim(),
            });
        }
        let a = message.amplitudes();
        Ok(self.fidelity_of(&Vector2::new(a[0], a[1])))
    }

    fn fidelity_of(&self, psi: &Vector2<Complex64>) -> f64 {
        let mut total = 0.0;
        for (phi, fix) in self.bell.iter().zip(&self.fix) {
            // v[a] = Σ_m conj(Φ[m, a])·ψ[m]; Bob's state is W ρ W† with
            // W = vᵀ ⊗ I₂ mapping (Alice, Bob) to Bob.
            let v = phi.adjoint() * psi;
            let z = c(0.0, 0.0);
            let w = Matrix2x4::new(v[0], z, v[1], z, z, v[0], z, v[1]);
            let bob = w * self.resource * w.adjoint();
            let out = fix * bob * fix.adjoint();
            total += (psi.adjoint() * out * psi)[(0, 0)].re;
        }
        total
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Haar-random qubit: a normalized vector of i.i.d. standard complex
/// Gaussians drawn from ChaCha8 seeded with `seed`.
pub fn haar_qubits(seed: u64) -> impl Iterator<Item = PureStateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(move || loop {
        let mut g = || -> f64 { StandardNormal.sample(&mut rng) };
        let v = DVector::from_vec(vec![c(g(), g()), c(g(), g())]);
        if let Ok(state) = PureStateVector::normalized(v) {
            break state;
        }
    })
}

/// Haar average of [`simulate_standard_teleportation`] over `samples`
/// messages.
pub fn haar_average_teleport_fidelity(
    resource: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 2 {
        return Err(param("samples", "need at least 2"));
    }
    let kit = Teleporter::new(resource)?;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, psi) in haar_qubits(seed).take(samples).enumerate() {
        let x = kit.fidelity(&psi)?;
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (samples - 1) as f64;
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / samples as f64).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{isotropic_state, maximally_entangled_state};
    use approx::assert_abs_diff_eq;

    const Q: HilbertDim = HilbertDim::QUBIT;

    #[test]
    fn relation_examples() {
        assert_eq!(avg_fidelity_from_ent_fidelity(1.0, Q), 1.0);
        assert_abs_diff_eq!(avg_fidelity_from_ent_fidelity(0.6, Q), 2.2 / 3.0, epsilon = 1e-15);
        for d in 2..6 {
            let d = HilbertDim::new(d).unwrap();
            let dd = d.get() as f64;
            assert_abs_diff_eq!(avg_fidelity_from_ent_fidelity(1.0 / dd, d), 2.0 / (dd + 1.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn csla_composed_fidelity() {
        let thr = ThresholdConfig::new(0.05, 0.6, 0.8).unwrap();
        let out = catalytic_teleport_fidelity_csla(&thr, 4, 2, Q).unwrap();
        assert_abs_diff_eq!(out.entanglement_fidelity, 0.7125, epsilon = 1e-12);
        assert_abs_diff_eq!(out.average_fidelity, 0.808_333_333_333_333, epsilon = 1e-12);
        assert_eq!(out.protocol, Protocol::Csla);

        let flat = ThresholdConfig::new(0.05, 0.7, 0.7).unwrap();
        assert_eq!(
            catalytic_teleport_fidelity_csla(&flat, 4, 3, Q).unwrap().average_fidelity,
            standard_teleport_fidelity(&flat, Q).average_fidelity
        );

        let perfect = ThresholdConfig::new(0.05, 0.6, 1.0).unwrap();
        let f = catalytic_teleport_fidelity_csla(&perfect, 100, 1, Q).unwrap();
        assert_abs_diff_eq!(f.entanglement_fidelity, 0.6 + 0.4 * 0.99, epsilon = 1e-12);
        assert_abs_diff_eq!(f.average_fidelity, (2.0 * (0.6 + 0.4 * 0.99) + 1.0) / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn dense_and_scalar_csla_agree() {
        let rho = isotropic_state(0.6, Q).unwrap();
        let tau = isotropic_state(0.8, Q).unwrap();
        let cfg = CslaConfig::new(4, rho, tau, Q).unwrap();
        let thr = ThresholdConfig::new(0.05, 0.6, 0.8).unwrap();
        for r in 1..5 {
            let a = catalytic_teleport_state_csla(&cfg, r).unwrap();
            let b = catalytic_teleport_fidelity_csla(&thr, 4, r as u64, Q).unwrap();
            assert_abs_diff_eq!(a.average_fidelity, b.average_fidelity, epsilon = 1e-12);
        }
    }

    #[test]
    fn csla_teleport_bounds() {
        let thr = ThresholdConfig::new(0.05, 0.6, 0.8).unwrap();
        assert_eq!(max_reuse_rounds_teleport_csla(&thr, 4, Q).unwrap().rounds, 3);
        let three = HilbertDim::new(3).unwrap();
        assert_eq!(max_reuse_rounds_teleport_csla(&thr, 4, three).unwrap().rounds, 3);
        let hard = ThresholdConfig::new(0.15, 0.6, 0.8).unwrap();
        assert_eq!(max_reuse_rounds_teleport_csla(&hard, 4, Q).unwrap().rounds, 0);
    }

    #[test]
    fn esa_teleport_bounds() {
        let spec = EmbezzlingSpec::new(Q, 4).unwrap();
        let thr = ThresholdConfig::new(0.05, 0.7, 0.0).unwrap();
        // F(2) - 0.7 ≈ 0.2468 > 0.075, F(3) = 1/2.
        assert_eq!(max_reuse_rounds_teleport_esa(&spec, &thr).unwrap().rounds, 2);
        let hopeless = ThresholdConfig::new(0.05, 0.99, 0.0).unwrap();
        assert_eq!(max_reuse_rounds_teleport_esa(&spec, &hopeless).unwrap().rounds, 0);

        let big = EmbezzlingSpec::new(Q, 1000).unwrap();
        let tele = max_reuse_rounds_teleport_esa(&big, &thr).unwrap();
        let distill = esa::reuse_scan(&big, &thr, 0.075).unwrap();
        assert_eq!(tele, distill);
    }

    #[test]
    fn ideal_resource_teleports_perfectly() {
        let phi = maximally_entangled_state(Q);
        for psi in haar_qubits(7).take(50) {
            assert_abs_diff_eq!(simulate_standard_teleportation(&phi, &psi).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_resource_gives_one_half() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        for psi in haar_qubits(11).take(20) {
            assert_abs_diff_eq!(simulate_standard_teleportation(&mixed, &psi).unwrap(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_dimensions() {
        let phi = maximally_entangled_state(Q);
        let qutrit = PureStateVector::basis(3, 0).unwrap();
        assert!(simulate_standard_teleportation(&phi, &qutrit).is_err());
        let big = DensityMatrix::maximally_mixed(9).unwrap();
        let q = PureStateVector::basis(2, 0).unwrap();
        assert!(simulate_standard_teleportation(&big, &q).is_err());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let a: Vec<_> = haar_qubits(3).take(5).collect();
        let b: Vec<_> = haar_qubits(3).take(5).collect();
        assert_eq!(a, b);
        let iso = isotropic_state(0.6, Q).unwrap();
        let x = haar_average_teleport_fidelity(&iso, 1000, 9).unwrap();
        let y = haar_average_teleport_fidelity(&iso, 1000, 9).unwrap();
        assert_eq!(x, y);
    }
}
