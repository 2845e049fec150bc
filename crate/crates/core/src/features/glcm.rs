use crate::scalar::Real;

use super::gray::GrayImage;

pub const GLCM_LEVELS: usize = 32;

/// Pixel offsets `(dr, dc)` at distance 1 for 0, 45, 90 and 135 degrees.
pub const GLCM_OFFSETS: [(isize, isize); 4] = [(0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// `min(31, floor(g / 8))`
pub fn quantize<T: Real>(gray: &GrayImage<T>) -> Vec<usize> {
    gray.values()
        .iter()
        .map(|&v| ((v / T::of(8.0)).floor().as_f64() as usize).min(GLCM_LEVELS - 1))
        .collect()
}

/// Symmetric, normalised co-occurrence matrix (`levels x levels`, row-major).
pub fn cooccurrence<T: Real>(levels: &[usize], side: usize, offset: (isize, isize)) -> Vec<T> {
    let mut counts = vec![0u32; GLCM_LEVELS * GLCM_LEVELS];
    let mut total = 0u64;
    for r in 0..side as isize {
        for c in 0..side as isize {
            let (r2, c2) = (r + offset.0, c + offset.1);
            if r2 < 0 || c2 < 0 || r2 >= side as isize || c2 >= side as isize {
                continue;
            }
            let i = levels[r as usize * side + c as usize];
            let j = levels[r2 as usize * side + c2 as usize];
            counts[i * GLCM_LEVELS + j] += 1;
            counts[j * GLCM_LEVELS + i] += 1;
            total += 2;
        }
    }
    let total = T::of(total.max(1) as f64);
    counts.iter().map(|&k| T::of(k as f64) / total).collect()
}

/// `[contrast, homogeneity, energy, correlation]` of a normalised matrix.
/// Correlation is 1 when either marginal has zero variance.
pub fn glcm_properties<T: Real>(p: &[T]) -> [T; 4] {
    let l = GLCM_LEVELS;
    let (mut contrast, mut homogeneity, mut asm) = (T::zero(), T::zero(), T::zero());
    let (mut mu_i, mut mu_j) = (T::zero(), T::zero());
    for i in 0..l {
        for j in 0..l {
            let v = p[i * l + j];
            let d = T::of_usize(i) - T::of_usize(j);
            contrast += d * d * v;
            homogeneity += v / (T::one() + d * d);
            asm += v * v;
            mu_i += T::of_usize(i) * v;
            mu_j += T::of_usize(j) * v;
        }
    }
    let (mut var_i, mut var_j, mut cov) = (T::zero(), T::zero(), T::zero());
    for i in 0..l {
        for j in 0..l {
            let v = p[i * l + j];
            let di = T::of_usize(i) - mu_i;
            let dj = T::of_usize(j) - mu_j;
            var_i += di * di * v;
            var_j += dj * dj * v;
            cov += di * dj * v;
        }
    }
    let (sd_i, sd_j) = (var_i.sqrt(), var_j.sqrt());
    let tiny = T::of(1e-15);
    let correlation = if sd_i < tiny || sd_j < tiny {
        T::one()
    } else {
        (cov / (sd_i * sd_j)).max(-T::one()).min(T::one())
    };
    [contrast, homogeneity, asm.sqrt(), correlation]
}

/// Four properties for each of the four angles, angle-major.
pub fn extract_glcm<T: Real>(gray: &GrayImage<T>) -> Vec<T> {
    let levels = quantize(gray);
    GLCM_OFFSETS
        .iter()
        .flat_map(|&off| glcm_properties(&cooccurrence::<T>(&levels, GrayImage::<T>::SIDE, off)))
        .collect()
}
