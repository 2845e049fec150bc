use crate::scalar::Real;

use super::gray::GrayImage;

/// Neighbour `p` sits at `(row + dr, col + dc)`, starting east and turning counter-clockwise.
const NEIGHBOURS: [(isize, isize); 8] = [
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
];

const INTERIOR: usize = 30;
const LBP_BINS: usize = 16;
/// Label for codes with more than two circular 0/1 transitions.
const NON_UNIFORM: u8 = 9;

/// Raw 8-neighbour codes of the 30x30 interior: bit `p` is set when `g_p >= g_c`.
pub fn lbp_codes<T: Real>(gray: &GrayImage<T>) -> Vec<u8> {
    let mut codes = Vec::with_capacity(INTERIOR * INTERIOR);
    for r in 1..=INTERIOR {
        for c in 1..=INTERIOR {
            let center = gray.at(r, c);
            let mut code = 0u8;
            for (p, &(dr, dc)) in NEIGHBOURS.iter().enumerate() {
                let g = gray.at((r as isize + dr) as usize, (c as isize + dc) as usize);
                if g - center >= T::zero() {
                    code |= 1 << p;
                }
            }
            codes.push(code);
        }
    }
    codes
}

/// Number of set bits for uniform codes (at most two circular transitions), else 9.
pub fn uniform_code(code: u8) -> u8 {
    let transitions = (code ^ code.rotate_right(1)).count_ones();
    if transitions <= 2 {
        code.count_ones() as u8
    } else {
        NON_UNIFORM
    }
}

/// Density histogram of uniform codes over 16 unit-width bins; bins 10..15 stay empty.
pub fn lbp_histogram<T: Real>(codes: &[u8]) -> Vec<T> {
    let mut counts = [0u32; LBP_BINS];
    for &c in codes {
        counts[uniform_code(c) as usize] += 1;
    }
    let n = T::of_usize(codes.len().max(1));
    counts.iter().map(|&k| T::of(k as f64) / n).collect()
}

pub fn extract_lbp<T: Real>(gray: &GrayImage<T>) -> Vec<T> {
    lbp_histogram(&lbp_codes(gray))
}
