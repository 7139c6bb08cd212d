//! 1-based index arithmetic of the embezzling unitary.

use crate::error::{param, Result};

#[inline]
pub(crate) fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// `d^e`, saturating at `u64::MAX`.
#[inline]
pub(crate) fn sat_pow(d: u64, e: u32) -> u64 {
    d.checked_pow(e).unwrap_or(u64::MAX)
}

/// Image `(k, l)` of `|i⟩_main |j⟩_cat` under the embezzling unitary:
/// `l = ⌈((i-1)M + j)/d⌉`, `k = (i-1)M + j - (l-1)d`.
pub fn embezzle_permutation(i: u64, j: u64, d: u64, m: u64) -> Result<(u64, u64)> {
    if d < 2 || m < 1 {
        return Err(param("d, M", format!("need d >= 2 and M >= 1, got d={d}, M={m}")));
    }
    if !(1..=d).contains(&i) {
        return Err(param("i", format!("{i} not in [1, {d}]")));
    }
    if !(1..=m).contains(&j) {
        return Err(param("j", format!("{j} not in [1, {m}]")));
    }
    let linear = (i - 1) * m + j;
    let l = ceil_div(linear, d);
    let k = linear - (l - 1) * d;
    Ok((k, l))
}

/// Digits of a catalyst index `j` after `r` rounds: the main-register values
/// `j_1..j_r` and the catalyst residue `j_C^r = ⌈j/d^r⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexDecomposition {
    pub j: u64,
    pub d: u64,
    /// `digits[s-1] = j_s = ⌈j/d^{s-1}⌉ - (⌈j/d^s⌉ - 1)·d`.
    pub digits: Vec<u64>,
    pub residue: u64,
}

impl IndexDecomposition {
    pub fn new(j: u64, d: u64, rounds: u32) -> Result<Self> {
        if d < 2 || j < 1 {
            return Err(param("j, d", format!("need j >= 1 and d >= 2, got j={j}, d={d}")));
        }
        let digits = (1..=rounds)
            .map(|s| ceil_div(j, sat_pow(d, s - 1)) - (ceil_div(j, sat_pow(d, s)) - 1) * d)
            .collect();
        Ok(Self {
            j,
            d,
            digits,
            residue: ceil_div(j, sat_pow(d, rounds)),
        })
    }

    /// `(j_C - 1)·d^r + Σ_s (j_s - 1)·d^{s-1} + 1`.
    pub fn reconstruct(&self) -> u128 {
        let d = self.d as u128;
        let r = self.digits.len() as u32;
        let mut v = (self.residue as u128 - 1) * d.pow(r) + 1;
        for (s, &digit) in self.digits.iter().enumerate() {
            v += (digit as u128 - 1) * d.pow(s as u32);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn permutation_examples() {
        assert_eq!(embezzle_permutation(1, 1, 2, 4).unwrap(), (1, 1));
        assert_eq!(embezzle_permutation(1, 3, 2, 4).unwrap(), (1, 2));
        assert_eq!(embezzle_permutation(2, 4, 2, 4).unwrap(), (2, 4));
    }

    #[test]
    fn permutation_rejects_out_of_range() {
        assert!(embezzle_permutation(0, 1, 2, 4).is_err());
        assert!(embezzle_permutation(3, 1, 2, 4).is_err());
        assert!(embezzle_permutation(1, 5, 2, 4).is_err());
        assert!(embezzle_permutation(1, 1, 1, 4).is_err());
    }

    #[test]
    fn permutation_is_bijective_small() {
        for d in 2..=3 {
            for m in 1..=9 {
                let images: HashSet<_> = (1..=d)
                    .flat_map(|i| (1..=m).map(move |j| embezzle_permutation(i, j, d, m).unwrap()))
                    .collect();
                assert_eq!(images.len() as u64, d * m);
                assert!(images.iter().all(|&(k, l)| (1..=d).contains(&k) && (1..=m).contains(&l)));
            }
        }
    }

    #[test]
    fn decomposition_digits() {
        // j = 6, d = 2: j - 1 = 0b101 → digits (2, 1, 2), residue 1 at r = 3.
        let dec = IndexDecomposition::new(6, 2, 3).unwrap();
        assert_eq!(dec.digits, vec![2, 1, 2]);
        assert_eq!(dec.residue, 1);
        assert_eq!(dec.reconstruct(), 6);
        let dec = IndexDecomposition::new(7, 3, 1).unwrap();
        assert_eq!((dec.digits.clone(), dec.residue), (vec![1], 3));
    }
}
