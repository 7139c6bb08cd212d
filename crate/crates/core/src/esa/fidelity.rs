use super::index::sat_pow;
use super::EmbezzlingSpec;
use crate::error::{param, Error, Result};
use crate::threshold::{ReuseBound, ThresholdConfig};

/// One term `x(s,t,h)` of the triple sum with the bounds it was emitted under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerm {
    pub s: u64,
    pub t: u64,
    pub h: u64,
    /// `2/√((t+(s-1)d^r)(t+(s-1)d^r+h·d^{r-1}))`.
    pub x: f64,
    pub k_s: u64,
    pub k_st: u64,
}

/// Smallest `r ≥ 1` with `d^{r-1} ≥ M`. From there on no two catalyst
/// indices cohere on the main system and the fidelity is exactly `1/d`.
pub fn plateau_start(d: u64, m: u64) -> u32 {
    let mut r = 1u32;
    while sat_pow(d, r - 1) < m {
        r += 1;
    }
    r
}

/// Visits every term of the round-`r` sum in `(s, t, h)` order.
///
/// Bounds: `s ≤ ⌈M/d^r⌉`,
/// `t ≤ K_s = min(d^r - d^{r-1}, M - d^{r-1}, M - (s-1)d^r)` and
/// `h ≤ K_st = min(d-1, ⌊(d^r-t)/d^{r-1}⌋, ⌊(M-(s-1)d^r-t)/d^{r-1}⌋)`.
/// Non-positive bounds give empty ranges.
pub fn for_each_term(spec: &EmbezzlingSpec, rounds: u32, f: impl FnMut(ClosedFormTerm)) -> Result<()> {
    terms(spec, rounds, Bound::Coherent, f)
}

#[derive(Clone, Copy)]
enum Bound {
    /// `M - d^{r-1}`: the partner index `i + h·d^{r-1}` must exist.
    Coherent,
    /// `M - d^r`, which drops every pair once `M ≤ d^r`.
    #[cfg(test)]
    Printed,
}

fn terms(spec: &EmbezzlingSpec, rounds: u32, bound: Bound, mut f: impl FnMut(ClosedFormTerm)) -> Result<()> {
    if rounds == 0 {
        return Err(param("rounds", "must be at least 1"));
    }
    let d = spec.d().get() as i128;
    let m = spec.m() as i128;
    if rounds >= plateau_start(d as u64, m as u64) {
        return Ok(());
    }
    // d^{r-1} < M, so both powers fit comfortably.
    let stride = d.pow(rounds - 1);
    let block = stride * d;
    let second = match bound {
        Bound::Coherent => m - stride,
        #[cfg(test)]
        Bound::Printed => m - block,
    };
    let s_max = (m + block - 1) / block;
    for s in 1..=s_max {
        let offset = (s - 1) * block;
        let k_s = (block - stride).min(second).min(m - offset);
        for t in 1..=k_s {
            let k_st = (d - 1)
                .min((block - t).div_euclid(stride))
                .min((m - offset - t).div_euclid(stride));
            for h in 1..=k_st {
                let i = (t + offset) as f64;
                let j = (t + offset + h * stride) as f64;
                f(ClosedFormTerm {
                    s: s as u64,
                    t: t as u64,
                    h: h as u64,
                    x: 2.0 / (i * j).sqrt(),
                    k_s: k_s as u64,
                    k_st: k_st as u64,
                });
            }
        }
    }
    Ok(())
}

/// `F = 1/d + (1/(d·c_M)) Σ_s Σ_t Σ_h x(s,t,h)` after `rounds` rounds.
pub fn closed_form_fidelity(spec: &EmbezzlingSpec, rounds: u32) -> Result<f64> {
    fidelity_with(spec, rounds, Bound::Coherent)
}

fn fidelity_with(spec: &EmbezzlingSpec, rounds: u32, bound: Bound) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    terms(spec, rounds, bound, |term| {
        let y = term.x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    })?;
    let d = spec.d().get() as f64;
    Ok(1.0 / d + sum / (d * spec.c_m()))
}

/// Largest `r` such that every round `1..=r` has
/// `F(r) - F(ρ)` clearing `threshold` under the strict guard of `thr`.
///
/// `raw_floor` holds the last round passing the plain comparison
/// `F(r) - F(ρ) > threshold`. Past [`plateau_start`] the gain is constant, so
/// a plateau gain that still clears means reuse never stops.
pub fn reuse_scan(spec: &EmbezzlingSpec, thr: &ThresholdConfig, threshold: f64) -> Result<ReuseBound> {
    let guard = thr.with_epsilon(threshold);
    let d = spec.d().get() as f64;
    let plateau_gain = 1.0 / d - thr.f_rho();
    if guard.clears(plateau_gain) {
        return Err(Error::UnboundedReuse { plateau_gain });
    }
    let last = plateau_start(spec.d().get() as u64, spec.m());
    let mut rounds = 0u64;
    let mut raw = 0i64;
    let mut guarded_open = true;
    for r in 1..=last {
        let gain = closed_form_fidelity(spec, r)? - thr.f_rho();
        if gain > threshold {
            raw = r as i64;
        } else {
            break;
        }
        if guarded_open && guard.clears(gain) {
            rounds = r as u64;
        } else {
            guarded_open = false;
        }
    }
    Ok(ReuseBound {
        rounds,
        raw_value: None,
        raw_floor: Some(raw),
    })
}

/// Reuse rounds for distillation: the threshold is `ε` itself.
pub fn max_reuse_rounds_distill(spec: &EmbezzlingSpec, thr: &ThresholdConfig) -> Result<ReuseBound> {
    reuse_scan(spec, thr, thr.epsilon())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::esa::reduced_main_state;
    use crate::quantum::HilbertDim;
    use approx::assert_abs_diff_eq;

    fn spec(d: usize, m: u64) -> EmbezzlingSpec {
        EmbezzlingSpec::new(HilbertDim::new(d).unwrap(), m).unwrap()
    }

    #[test]
    fn single_round_examples() {
        let s4 = spec(2, 4);
        let expected = 0.5 + (2f64.sqrt() + 1.0 / 3f64.sqrt()) / (2.0 * s4.c_m());
        assert_abs_diff_eq!(closed_form_fidelity(&s4, 1).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.977_975_319_575_053, epsilon = 1e-12);

        let s2 = spec(2, 2);
        let expected = 0.5 + (2.0 / 2f64.sqrt()) / (2.0 * 1.5);
        assert_abs_diff_eq!(closed_form_fidelity(&s2, 1).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn emitted_terms_for_rank_four() {
        let mut seen = Vec::new();
        for_each_term(&spec(2, 4), 1, |t| seen.push(t)).unwrap();
        assert_eq!(seen.len(), 2);
        assert_eq!((seen[0].s, seen[0].t, seen[0].h), (1, 1, 1));
        assert_abs_diff_eq!(seen[0].x, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!((seen[1].s, seen[1].t, seen[1].h), (2, 1, 1));
        assert_abs_diff_eq!(seen[1].x, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert!(seen.iter().all(|t| t.k_s >= 1 && t.k_st >= 1 && t.x > 0.0));
    }

    #[test]
    fn plateau_positions() {
        assert_eq!(plateau_start(2, 1000), 11);
        assert_eq!(plateau_start(2, 1024), 11);
        assert_eq!(plateau_start(2, 1025), 12);
        assert_eq!(plateau_start(2, 4), 3);
        assert_eq!(plateau_start(3, 1), 1);
        let s = spec(2, 1000);
        assert!(closed_form_fidelity(&s, 10).unwrap() > 0.5);
        assert_eq!(closed_form_fidelity(&s, 11).unwrap(), 0.5);
        assert_eq!(closed_form_fidelity(&s, 40).unwrap(), 0.5);
    }

    #[test]
    fn second_round_keeps_partial_coherence() {
        let s = spec(2, 4);
        let expected = 0.5 + (2.0 / 3f64.sqrt() + 2.0 / 8f64.sqrt()) / (2.0 * s.c_m());
        assert_abs_diff_eq!(closed_form_fidelity(&s, 2).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(
            closed_form_fidelity(&s, 2).unwrap(),
            reduced_main_state(&s, 2).entanglement_fidelity(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn printed_bound_drops_live_pairs() {
        // With M - d^r in place of M - d^{r-1} the sum empties as soon as
        // M ≤ d^r, while the reduced state still carries coherences.
        let s = spec(2, 2);
        assert_eq!(fidelity_with(&s, 1, Bound::Printed).unwrap(), 0.5);
        let state = reduced_main_state(&s, 1).entanglement_fidelity();
        assert!((state - 0.5).abs() > 0.4);
        assert_abs_diff_eq!(closed_form_fidelity(&s, 1).unwrap(), state, epsilon = 1e-14);
        // Where M > d^r + d^{r-1}·(d-1) both agree.
        let s = spec(2, 40);
        assert_abs_diff_eq!(
            fidelity_with(&s, 1, Bound::Printed).unwrap(),
            closed_form_fidelity(&s, 1).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_rounds_rejected() {
        assert!(closed_form_fidelity(&spec(2, 4), 0).is_err());
    }

    #[test]
    fn distill_scan_examples() {
        let thr = ThresholdConfig::new(0.05, 0.7, 0.0).unwrap();
        // F(2) - 0.7 ≈ 0.247 still clears, F(3) = 1/2 does not.
        let b = max_reuse_rounds_distill(&spec(2, 4), &thr).unwrap();
        assert_eq!(b.rounds, 2);
        assert!(!b.differs());

        let s = spec(2, 1000);
        let b = max_reuse_rounds_distill(&s, &thr).unwrap();
        let scan = (1..=11)
            .take_while(|&r| closed_form_fidelity(&s, r).unwrap() - 0.7 > 0.05)
            .count() as u64;
        assert_eq!(b.rounds, scan);

        let hopeless = ThresholdConfig::new(0.05, 0.99, 0.0).unwrap();
        assert_eq!(max_reuse_rounds_distill(&s, &hopeless).unwrap().rounds, 0);
    }

    #[test]
    fn weak_baseline_never_stops() {
        let thr = ThresholdConfig::new(0.05, 0.3, 0.0).unwrap();
        assert!(matches!(
            max_reuse_rounds_distill(&spec(2, 16), &thr),
            Err(Error::UnboundedReuse { .. })
        ));
    }
}
