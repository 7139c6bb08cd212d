use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{param, Error, Result};
use crate::quantum::DensityMatrix;

/// Largest total dimension [`LabeledMixture::realize`] will materialize.
pub const MAX_REALIZED_DIM: usize = 4096;

/// Which state occupies a slot: the noisy input `ρ` or a catalyst copy `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    R,
    T,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::R => "R",
            Label::T => "T",
        })
    }
}

/// `[x1, x2]`: number of `ρ` occurrences and `τ` occurrences across the
/// branches of a mixture, each branch counted with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexPair {
    pub x1: BigUint,
    pub x2: BigUint,
}

impl IndexPair {
    pub fn new(x1: impl Into<BigUint>, x2: impl Into<BigUint>) -> Self {
        Self {
            x1: x1.into(),
            x2: x2.into(),
        }
    }

    pub fn total(&self) -> BigUint {
        &self.x1 + &self.x2
    }

    /// Component-wise difference, `None` if either component would go negative.
    pub fn checked_sub(&self, other: &IndexPair) -> Option<IndexPair> {
        if self.x1 < other.x1 || self.x2 < other.x2 {
            return None;
        }
        Some(IndexPair {
            x1: &self.x1 - &other.x1,
            x2: &self.x2 - &other.x2,
        })
    }
}

impl Add for &IndexPair {
    type Output = IndexPair;
    fn add(self, rhs: &IndexPair) -> IndexPair {
        IndexPair {
            x1: &self.x1 + &rhs.x1,
            x2: &self.x2 + &rhs.x2,
        }
    }
}

impl Mul<&IndexPair> for &BigUint {
    type Output = IndexPair;
    fn mul(self, rhs: &IndexPair) -> IndexPair {
        IndexPair {
            x1: self * &rhs.x1,
            x2: self * &rhs.x2,
        }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.x1, self.x2)
    }
}

/// Exact probability of each label on one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDistribution {
    pub r: BigRational,
    pub t: BigRational,
}

impl LabelDistribution {
    pub fn new(r: BigRational, t: BigRational) -> Self {
        Self { r, t }
    }

    pub fn from_ratios(r: (i64, i64), t: (i64, i64)) -> Self {
        Self {
            r: BigRational::new(r.0.into(), r.1.into()),
            t: BigRational::new(t.0.into(), t.1.into()),
        }
    }
}

impl fmt::Display for LabelDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{R: {}, T: {}}}", self.r, self.t)
    }
}

/// Convex mixture of tensor products of labels with exact rational weights.
///
/// Branches are keyed by their label sequence; identical sequences are merged
/// and their weights added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMixture {
    n_slots: usize,
    branches: BTreeMap<Vec<Label>, BigRational>,
}

impl LabeledMixture {
    /// Single product branch with weight one.
    pub fn product(labels: Vec<Label>) -> Result<Self> {
        if labels.is_empty() {
            return Err(param("labels", "a mixture needs at least one slot"));
        }
        let n_slots = labels.len();
        let mut branches = BTreeMap::new();
        branches.insert(labels, BigRational::one());
        Ok(Self { n_slots, branches })
    }

    /// Builds a mixture from explicit branches. Weights must be positive and
    /// sum to exactly one.
    pub fn from_branches(branches: impl IntoIterator<Item = (Vec<Label>, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<Label>, BigRational> = BTreeMap::new();
        let mut n_slots = None;
        for (labels, w) in branches {
            if !w.is_positive() {
                return Err(param("weight", format!("{w} is not positive")));
            }
            match n_slots {
                None => n_slots = Some(labels.len()),
                Some(n) if n != labels.len() => {
                    return Err(param("labels", "branches have different lengths"))
                }
                _ => {}
            }
            *map.entry(labels).or_insert_with(BigRational::zero) += w;
        }
        let n_slots = n_slots.filter(|&n| n > 0).ok_or_else(|| param("branches", "empty mixture"))?;
        let mix = Self {
            n_slots,
            branches: map,
        };
        if !mix.total_weight().is_one() {
            return Err(param("weight", format!("weights sum to {}", mix.total_weight())));
        }
        Ok(mix)
    }

    /// `τ^{⊗catalyst} ⊗ ρ^{⊗main}` with the catalyst on the leading slots.
    pub fn initial(catalyst: usize, main: usize) -> Result<Self> {
        let mut labels = vec![Label::T; catalyst];
        labels.extend(std::iter::repeat_n(Label::R, main));
        Self::product(labels)
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn branches(&self) -> &BTreeMap<Vec<Label>, BigRational> {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn total_weight(&self) -> BigRational {
        self.branches.values().fold(BigRational::zero(), |acc, w| acc + w)
    }

    /// One application of the convex-split map.
    ///
    /// Slots `0..catalyst_slots` hold the catalyst. Each branch splits into
    /// `catalyst_slots + 1` branches of equal weight: the identity, and the
    /// swap of `round_slot` with each catalyst slot.
    pub fn convex_split_round(&self, round_slot: usize, catalyst_slots: usize) -> Result<Self> {
        if catalyst_slots == 0 || round_slot < catalyst_slots || round_slot >= self.n_slots {
            return Err(param(
                "round_slot",
                format!(
                    "slot {round_slot} is not a main slot (catalyst 0..{catalyst_slots}, {} slots)",
                    self.n_slots
                ),
            ));
        }
        if self.branches.keys().any(|b| b[round_slot] != Label::R) {
            return Err(param("round_slot", format!("slot {round_slot} does not hold a fresh input")));
        }
        let share = BigRational::new(BigInt::one(), BigInt::from(catalyst_slots + 1));
        let mut next: BTreeMap<Vec<Label>, BigRational> = BTreeMap::new();
        for (labels, w) in &self.branches {
            let part = w * &share;
            *next.entry(labels.clone()).or_insert_with(BigRational::zero) += &part;
            for c in 0..catalyst_slots {
                let mut swapped = labels.clone();
                swapped.swap(c, round_slot);
                *next.entry(swapped).or_insert_with(BigRational::zero) += &part;
            }
        }
        Ok(Self {
            n_slots: self.n_slots,
            branches: next,
        })
    }

    /// Marginal label distribution on one slot.
    pub fn slot_distribution(&self, slot: usize) -> Result<LabelDistribution> {
        if slot >= self.n_slots {
            return Err(param("slot", format!("{slot} >= {}", self.n_slots)));
        }
        let mut r = BigRational::zero();
        let mut t = BigRational::zero();
        for (labels, w) in &self.branches {
            match labels[slot] {
                Label::R => r += w,
                Label::T => t += w,
            }
        }
        Ok(LabelDistribution { r, t })
    }

    /// Index pair of the given slots when the mixture is read as a uniform
    /// mixture over `multiplicity` sequences. Fails if some branch weight times
    /// `multiplicity` is not an integer.
    pub fn index_pair(&self, slots: impl IntoIterator<Item = usize> + Clone, multiplicity: &BigUint) -> Result<IndexPair> {
        let scale = BigRational::from_integer(BigInt::from(multiplicity.clone()));
        let mut pair = IndexPair::default();
        for (labels, w) in &self.branches {
            let count = w * &scale;
            if !count.is_integer() {
                return Err(param(
                    "multiplicity",
                    format!("branch weight {w} is not a multiple of 1/{multiplicity}"),
                ));
            }
            let count = count
                .to_integer()
                .to_biguint()
                .expect("weights are positive");
            for s in slots.clone() {
                match labels.get(s) {
                    Some(Label::R) => pair.x1 += &count,
                    Some(Label::T) => pair.x2 += &count,
                    None => return Err(param("slot", format!("{s} >= {}", self.n_slots))),
                }
            }
        }
        Ok(pair)
    }

    /// Dense matrix `Σ w · ⊗_slots (ρ or τ)`.
    pub fn realize(&self, rho: &DensityMatrix, tau: &DensityMatrix) -> Result<DensityMatrix> {
        rho.require_dim(tau.dim())?;
        let total = (rho.dim() as u128).checked_pow(self.n_slots as u32).unwrap_or(u128::MAX);
        if total > MAX_REALIZED_DIM as u128 {
            return Err(Error::TooLarge {
                size: total,
                limit: MAX_REALIZED_DIM as u128,
            });
        }
        let dim = total as usize;
        let mut acc = nalgebra::DMatrix::zeros(dim, dim);
        for (labels, w) in &self.branches {
            let pick = |l: &Label| match l {
                Label::R => rho,
                Label::T => tau,
            };
            let mut iter = labels.iter();
            let first = pick(iter.next().expect("nonempty")).matrix().clone();
            let product = iter.fold(first, |m, l| m.kronecker(pick(l).matrix()));
            acc += product.scale(rational_to_f64(w));
        }
        Ok(DensityMatrix::from_matrix_unchecked(acc))
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
