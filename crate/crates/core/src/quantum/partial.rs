use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::DensityMatrix;
use crate::error::{param, Error, Result};

/// Reduced state on the factors listed in `keep`.
///
/// `dims` gives the factor dimensions in tensor order (factor 0 is the most
/// significant). The output keeps the surviving factors in ascending order,
/// regardless of the order they appear in `keep`.
pub fn partial_trace(state: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(param("dims", "factor dimensions must be positive"));
    }
    let total: usize = dims.iter().product();
    if total != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: total,
            actual: state.dim(),
        });
    }
    if keep.is_empty() {
        return Err(param("keep", "at least one factor must be kept"));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(param("keep", format!("factor {k} out of range")));
        }
        if kept[k] {
            return Err(param("keep", format!("factor {k} listed twice")));
        }
        kept[k] = true;
    }
    if kept.iter().all(|&k| k) {
        return Ok(state.clone());
    }

    // Stride of each factor in the full index.
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len() - 1).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let kept_factors: Vec<usize> = (0..dims.len()).filter(|&f| kept[f]).collect();
    let traced_factors: Vec<usize> = (0..dims.len()).filter(|&f| !kept[f]).collect();

    let offsets = |factors: &[usize]| -> Vec<usize> {
        let size: usize = factors.iter().map(|&f| dims[f]).product();
        (0..size)
            .map(|mut idx| {
                let mut off = 0;
                for &f in factors.iter().rev() {
                    off += (idx % dims[f]) * strides[f];
                    idx /= dims[f];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept_factors);
    let traced_off = offsets(&traced_factors);

    let m = state.matrix();
    let out = DMatrix::<Complex64>::from_fn(kept_off.len(), kept_off.len(), |r, c| {
        traced_off
            .iter()
            .map(|&t| m[(kept_off[r] + t, kept_off[c] + t)])
            .sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
