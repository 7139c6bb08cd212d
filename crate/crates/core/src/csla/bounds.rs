use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::mixture::{rational_to_f64, IndexPair};
use super::{check_n, CslaConfig};
use crate::error::{param, Error, Result};
use crate::quantum::DensityMatrix;
use crate::threshold::{ReuseBound, ThresholdConfig};

/// `⌈2^{k+2}/ε⌉`, the copy count that makes `τ^{⊗(n-1)}` a convex-split
/// catalyst for `k = D_max(ρ‖τ)`.
///
/// The quotient is evaluated exactly on the binary values of `ε` and of the
/// fractional part of `2^k`, so integer `k` gives an exact ceiling.
pub fn required_copies(epsilon: f64, k: f64) -> Result<BigUint> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(param("epsilon", format!("{epsilon} not in (0, 1]")));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(param("k", format!("{k} must be finite and >= 0")));
    }
    let whole = k.floor();
    let frac = BigRational::from_float(2f64.powf(k - whole)).expect("finite");
    let shift = BigUint::one() << (whole as u64 + 2);
    let numerator = frac * BigRational::from_integer(BigInt::from(shift));
    let quotient = numerator / BigRational::from_float(epsilon).expect("finite");
    Ok(quotient
        .ceil()
        .to_integer()
        .to_biguint()
        .expect("positive quotient"))
}

/// Exact weights `((n^r - (n-1)^r)/n^r, (n-1)^r/n^r)` of `ρ` and `τ` in the
/// round-`r` output. Zero rounds leave `ρ` unchanged.
pub fn closed_form_coefficients(n: u64, rounds: u32) -> Result<(BigRational, BigRational)> {
    check_n(n)?;
    if rounds == 0 {
        return Ok((BigRational::one(), BigRational::zero()));
    }
    let total = BigUint::from(n).pow(rounds);
    let tau_part = BigUint::from(n - 1).pow(rounds);
    let rho_part = &total - &tau_part;
    let denom = BigInt::from(total);
    Ok((
        BigRational::new(BigInt::from(rho_part), denom.clone()),
        BigRational::new(BigInt::from(tau_part), denom),
    ))
}

/// Dense round-`r` output state on the main system.
pub fn closed_form_output(config: &CslaConfig, rounds: u32) -> Result<DensityMatrix> {
    let (_, tau_w) = closed_form_coefficients(config.n(), rounds)?;
    if tau_w.is_zero() {
        return Ok(config.rho().clone());
    }
    let tau_w = rational_to_f64(&tau_w);
    DensityMatrix::convex(&[(1.0 - tau_w, config.rho()), (tau_w, config.tau())])
}

/// `[n^r - (n-1)^r, (n-1)^r]` for the main slot of round `r`.
pub fn main_index_pair(n: u64, rounds: u32) -> Result<IndexPair> {
    check_n(n)?;
    let total = BigUint::from(n).pow(rounds);
    let tau_part = BigUint::from(n - 1).pow(rounds);
    Ok(IndexPair {
        x1: &total - &tau_part,
        x2: tau_part,
    })
}

/// `(n-1)·[n^r - (n-1)^r, (n-1)^r]` for the catalyst after round `r`.
pub fn catalyst_index_pair(n: u64, rounds: u32) -> Result<IndexPair> {
    Ok(&BigUint::from(n - 1) * &main_index_pair(n, rounds)?)
}

/// `((n-1)/n)^r · (F(τ) - F(ρ))`, evaluated in log space. Zero rounds gain
/// nothing.
pub fn fidelity_gain(thr: &ThresholdConfig, n: u64, rounds: u64) -> f64 {
    gain(thr.gap(), n, rounds)
}

fn gain(gap: f64, n: u64, rounds: u64) -> f64 {
    if rounds == 0 {
        return 0.0;
    }
    gap * (rounds as f64 * (-1.0 / n as f64).ln_1p()).exp()
}

/// Largest `r` with `ΔF > ε` in every round `1..=r`.
pub fn max_reuse_rounds_distill(thr: &ThresholdConfig, n: u64) -> Result<ReuseBound> {
    reuse_bound(thr, thr.epsilon(), n)
}

/// Reuse bound against an arbitrary effective threshold (the teleportation
/// variants pass `(d+1)ε/d`).
///
/// The log-ratio floor is the starting point; the result is then moved until
/// `gain(r)` clears the threshold and `gain(r+1)` does not, using the strict
/// comparison of [`ThresholdConfig::clears`].
pub fn reuse_bound(thr: &ThresholdConfig, threshold: f64, n: u64) -> Result<ReuseBound> {
    check_n(n)?;
    let gap = thr.gap();
    if gap <= 0.0 {
        return Err(Error::CatalystNeverHelps {
            f_rho: thr.f_rho(),
            f_tau: thr.f_tau(),
        });
    }
    let guard = thr.with_epsilon(threshold);
    let raw = (threshold.ln() - gap.ln()) / (-1.0 / n as f64).ln_1p();
    let raw_floor = raw.floor();
    let raw_floor_i = if raw_floor.is_finite() {
        raw_floor.clamp(i64::MIN as f64, i64::MAX as f64) as i64
    } else {
        i64::MAX
    };
    if gap <= threshold {
        return Ok(ReuseBound {
            rounds: 0,
            raw_value: Some(raw),
            raw_floor: Some(raw_floor_i),
        });
    }
    let mut r = raw_floor_i.max(0) as u64;
    while r > 0 && !guard.clears(gain(gap, n, r)) {
        r -= 1;
    }
    while guard.clears(gain(gap, n, r + 1)) {
        r += 1;
    }
    Ok(ReuseBound {
        rounds: r,
        raw_value: Some(raw),
        raw_floor: Some(raw_floor_i),
    })
}
