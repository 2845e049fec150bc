//! Histogram of oriented gradients on a 32x32 luma plane.
//!
//! Gradients use central differences with edge replication. Orientation is
//! the unsigned edge direction in `[0, 180)` degrees: a purely horizontal
//! gradient (a vertical edge) maps to 90 degrees. Each pixel's magnitude is
//! split linearly between the two nearest of nine bins centred at
//! 10, 30, ..., 170 degrees, wrapping from 170 back to 10.

use crate::scalar::Real;

use super::gray::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HogParams {
    pub orientations: usize,
    pub cell: usize,
    pub block: usize,
    pub clip: f64,
    pub eps: f64,
}

impl Default for HogParams {
    fn default() -> Self {
        Self {
            orientations: 9,
            cell: 8,
            block: 2,
            clip: 0.2,
            eps: 1e-12,
        }
    }
}

/// Per-pixel `(gx, gy)`: `gx[r,c] = g[r,c+1] - g[r,c-1]`, indices clamped at the borders.
pub fn gradients<T: Real>(gray: &GrayImage<T>) -> (Vec<T>, Vec<T>) {
    let n = GrayImage::<T>::SIDE;
    let mut gx = vec![T::zero(); n * n];
    let mut gy = vec![T::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            gx[r * n + c] = gray.at(r, (c + 1).min(n - 1)) - gray.at(r, c.saturating_sub(1));
            gy[r * n + c] = gray.at((r + 1).min(n - 1), c) - gray.at(r.saturating_sub(1), c);
        }
    }
    (gx, gy)
}

/// Unsigned edge orientation in degrees, `[0, 180)`.
fn orientation<T: Real>(gx: T, gy: T) -> T {
    let deg = gy.atan2(gx).to_degrees() + T::of(90.0);
    let full = T::of(180.0);
    let mut t = deg % full;
    if t < T::zero() {
        t += full;
    }
    if t >= full {
        t -= full;
    }
    t
}

/// Orientation histograms of every cell, cells row-major, bins ascending.
pub fn cell_histograms<T: Real>(gray: &GrayImage<T>, params: &HogParams) -> Vec<T> {
    let n = GrayImage::<T>::SIDE;
    let n_cells = n / params.cell;
    let nb = params.orientations;
    let width = T::of(180.0 / nb as f64);
    let (gx, gy) = gradients(gray);
    let mut hist = vec![T::zero(); n_cells * n_cells * nb];
    for r in 0..n_cells * params.cell {
        for c in 0..n_cells * params.cell {
            let (x, y) = (gx[r * n + c], gy[r * n + c]);
            let mag = (x * x + y * y).sqrt();
            if mag == T::zero() {
                continue;
            }
            let pos = orientation(x, y) / width - T::of(0.5);
            let lo = pos.floor();
            let frac = pos - lo;
            let lo_bin = (lo.as_f64() as i64).rem_euclid(nb as i64) as usize;
            let hi_bin = (lo_bin + 1) % nb;
            let base = ((r / params.cell) * n_cells + c / params.cell) * nb;
            hist[base + lo_bin] += mag * (T::one() - frac);
            hist[base + hi_bin] += mag * frac;
        }
    }
    hist
}

/// L2-Hys: L2 normalise, clip at `clip`, normalise again; `eps` sits inside each square root.
fn l2_hys<T: Real>(block: &mut [T], clip: T, eps: T) {
    let norm = (block.iter().map(|&v| v * v).sum::<T>() + eps).sqrt();
    for v in block.iter_mut() {
        *v = (*v / norm).min(clip);
    }
    let norm = (block.iter().map(|&v| v * v).sum::<T>() + eps).sqrt();
    for v in block.iter_mut() {
        *v /= norm;
    }
}

pub fn extract_hog_with<T: Real>(gray: &GrayImage<T>, params: &HogParams) -> Vec<T> {
    let n_cells = GrayImage::<T>::SIDE / params.cell;
    let nb = params.orientations;
    let cells = cell_histograms(gray, params);
    let n_blocks = n_cells + 1 - params.block;
    let block_len = params.block * params.block * nb;
    let mut out = Vec::with_capacity(n_blocks * n_blocks * block_len);
    for br in 0..n_blocks {
        for bc in 0..n_blocks {
            let start = out.len();
            for cr in br..br + params.block {
                for cc in bc..bc + params.block {
                    let base = (cr * n_cells + cc) * nb;
                    out.extend_from_slice(&cells[base..base + nb]);
                }
            }
            l2_hys(&mut out[start..start + block_len], T::of(params.clip), T::of(params.eps));
        }
    }
    out
}

/// 324 values: 3x3 blocks of 2x2 cells of 9 bins.
pub fn extract_hog<T: Real>(gray: &GrayImage<T>) -> Vec<T> {
    extract_hog_with(gray, &HogParams::default())
}
