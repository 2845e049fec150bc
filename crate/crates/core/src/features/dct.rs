use std::f64::consts::PI;

use crate::dataset::{ImageRecord, IMAGE_SIDE};
use crate::scalar::Real;

/// Side of the retained low-frequency block.
pub const DCT_BLOCK: usize = 8;

/// Orthonormal DCT-II basis: `basis[k * n + i] = s_k cos(pi (2i + 1) k / 2n)`.
fn basis<T: Real>(n: usize) -> Vec<T> {
    let mut b = Vec::with_capacity(n * n);
    for k in 0..n {
        let scale = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
        for i in 0..n {
            b.push(T::of(scale * (PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos()));
        }
    }
    b
}

/// Separable orthonormal 2D DCT-II of an `n x n` row-major grid: rows first, then columns.
///
/// Output index `[k * n + l]` holds vertical frequency `k` and horizontal frequency `l`.
pub fn dct2<T: Real>(grid: &[T], n: usize) -> Vec<T> {
    assert_eq!(grid.len(), n * n, "dct2 expects an n x n grid");
    let c = basis::<T>(n);
    // along each row
    let mut tmp = vec![T::zero(); n * n];
    for r in 0..n {
        let row = &grid[r * n..(r + 1) * n];
        for l in 0..n {
            let ck = &c[l * n..(l + 1) * n];
            tmp[r * n + l] = row.iter().zip(ck).map(|(&x, &w)| x * w).sum();
        }
    }
    // along each column
    let mut out = vec![T::zero(); n * n];
    for k in 0..n {
        let ck = &c[k * n..(k + 1) * n];
        for l in 0..n {
            out[k * n + l] = (0..n).map(|r| ck[r] * tmp[r * n + l]).sum();
        }
    }
    out
}

/// Top-left 8x8 DCT block of each channel (scaled to `[0, 1]`), R then G then B.
pub fn extract_dct<T: Real>(image: &ImageRecord) -> Vec<T> {
    let n = IMAGE_SIDE;
    let mut out = Vec::with_capacity(3 * DCT_BLOCK * DCT_BLOCK);
    let scale = T::of(255.0);
    for ch in 0..3 {
        let plane: Vec<T> = image
            .pixels()
            .iter()
            .skip(ch)
            .step_by(3)
            .map(|&b| T::of(b as f64) / scale)
            .collect();
        let coeffs = dct2(&plane, n);
        for k in 0..DCT_BLOCK {
            out.extend_from_slice(&coeffs[k * n..k * n + DCT_BLOCK]);
        }
    }
    out
}
