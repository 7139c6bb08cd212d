use num_bigint::BigUint;
use num_traits::One;

use super::mixture::{IndexPair, LabelDistribution, LabeledMixture};
use super::{check_n, CslaConfig};
use crate::error::{Error, Result};

/// Upper bound on `n^rounds` for the brute-force label simulation.
pub const MAX_ORACLE_BRANCHES: u128 = 1_000_000;

/// State of the label simulation after one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundSnapshot {
    pub round: usize,
    /// Label distribution on this round's main slot.
    pub main: LabelDistribution,
    /// Index pairs of main slots `1..=round`, counted over the `n^round`
    /// sequences of the uniform mixture.
    pub main_pairs: Vec<IndexPair>,
    /// Index pair of the `n-1` catalyst slots.
    pub catalyst: IndexPair,
    /// Distinct label sequences after merging duplicates.
    pub distinct_branches: usize,
    pub mixture: LabeledMixture,
}

/// Brute-force multi-round simulation on the symbolic label level.
pub fn simulate_reuse_oracle(config: &CslaConfig, rounds: usize) -> Result<Vec<RoundSnapshot>> {
    label_oracle(config.n(), rounds)
}

/// [`simulate_reuse_oracle`] without the dense states, which the label
/// dynamics never look at.
pub fn label_oracle(n: u64, rounds: usize) -> Result<Vec<RoundSnapshot>> {
    check_n(n)?;
    if rounds == 0 {
        return Err(crate::error::param("rounds", "must be at least 1"));
    }
    let size = (n as u128).checked_pow(rounds as u32).unwrap_or(u128::MAX);
    if size > MAX_ORACLE_BRANCHES {
        return Err(Error::TooLarge {
            size,
            limit: MAX_ORACLE_BRANCHES,
        });
    }
    let catalyst = (n - 1) as usize;
    let mut mix = LabeledMixture::initial(catalyst, rounds)?;
    let mut multiplicity = BigUint::one();
    let n_big = BigUint::from(n);
    let mut snapshots = Vec::with_capacity(rounds);
    for round in 1..=rounds {
        let slot = catalyst + round - 1;
        mix = mix.convex_split_round(slot, catalyst)?;
        multiplicity *= &n_big;
        let main_pairs = (1..=round)
            .map(|t| mix.index_pair([catalyst + t - 1], &multiplicity))
            .collect::<Result<Vec<_>>>()?;
        snapshots.push(RoundSnapshot {
            round,
            main: mix.slot_distribution(slot)?,
            main_pairs,
            catalyst: mix.index_pair(0..catalyst, &multiplicity)?,
            distinct_branches: mix.branch_count(),
            mixture: mix.clone(),
        });
    }
    Ok(snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_round_catalyst_pair() {
        let snaps = label_oracle(4, 1).unwrap();
        assert_eq!(snaps[0].catalyst, IndexPair::new(3u32, 9u32));
        assert_eq!(snaps[0].main_pairs[0], IndexPair::new(1u32, 3u32));
    }

    #[test]
    fn second_round_distribution() {
        let snaps = label_oracle(4, 2).unwrap();
        assert_eq!(snaps[1].main, LabelDistribution::from_ratios((7, 16), (9, 16)));
        assert_eq!(snaps[1].catalyst, IndexPair::new(21u32, 27u32));
    }

    #[test]
    fn three_rounds_of_two_slot_swaps() {
        let snaps = label_oracle(2, 3).unwrap();
        assert_eq!(snaps[2].main, LabelDistribution::from_ratios((7, 8), (1, 8)));
        assert_eq!(label_oracle(2, 1).unwrap()[0].catalyst, IndexPair::new(1u32, 1u32));
    }

    #[test]
    fn refuses_oversized_runs() {
        assert!(matches!(label_oracle(80, 4), Err(Error::TooLarge { .. })));
        assert!(label_oracle(1, 2).is_err());
        assert!(label_oracle(3, 0).is_err());
    }
}
