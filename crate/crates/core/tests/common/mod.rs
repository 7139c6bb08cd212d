#![allow(dead_code)]

use catlab::DensityMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

/// `G·G†/Tr` for a Ginibre-like `G` with entries in `[-1, 1] + i[-1, 1]`.
pub fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
        .prop_filter_map("degenerate sample", move |raw| {
            let g = DMatrix::from_fn(dim, dim, |i, j| {
                let k = 2 * (i * dim + j);
                Complex64::new(raw[k], raw[k + 1])
            });
            let m = &g * g.adjoint();
            let tr = m.trace().re;
            if tr < 1e-3 {
                return None;
            }
            let m = m.map(|z| z / tr);
            DensityMatrix::new(hermitize(m)).ok()
        })
}

/// Diagonal state with strictly positive entries (full support).
pub fn full_rank_diagonal(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(0.05f64..1.0, dim).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        DensityMatrix::diagonal(&p).unwrap()
    })
}

pub fn hermitize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    (&m + m.adjoint()).map(|z| z * 0.5)
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
