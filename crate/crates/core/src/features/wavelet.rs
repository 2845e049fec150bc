use crate::scalar::Real;

use super::gray::GrayImage;

/// Analysis filter pair of an orthonormal wavelet.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilters<T> {
    pub low: Vec<T>,
    pub high: Vec<T>,
}

impl<T: Real> WaveletFilters<T> {
    /// Daubechies db2 (four taps). The high-pass is the quadrature mirror of
    /// the low-pass: reversed, with alternating signs.
    pub fn db2() -> Self {
        let s3 = 3f64.sqrt();
        let norm = 4.0 * 2f64.sqrt();
        let low: Vec<T> = [1.0 + s3, 3.0 + s3, 3.0 - s3, 1.0 - s3]
            .iter()
            .map(|&v| T::of(v / norm))
            .collect();
        let high = low
            .iter()
            .rev()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
            .collect();
        Self { low, high }
    }
}

/// One level of a periodised 1D transform: circular convolution
/// `y[n] = sum_m f[m] x[(n - m) mod N]`, keeping even `n`.
pub fn dwt1<T: Real>(signal: &[T], filters: &WaveletFilters<T>) -> (Vec<T>, Vec<T>) {
    let n = signal.len();
    let half = n / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    for k in 0..half {
        let (mut a, mut d) = (T::zero(), T::zero());
        for (m, (&lo, &hi)) in filters.low.iter().zip(&filters.high).enumerate() {
            let x = signal[(2 * k + n * filters.low.len() - m) % n];
            a += lo * x;
            d += hi * x;
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// Level-1 sub-bands, each `side/2 x side/2` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands<T> {
    /// low rows / low columns
    pub a: Vec<T>,
    /// low rows / high columns
    pub lh: Vec<T>,
    /// high rows / low columns
    pub hl: Vec<T>,
    pub hh: Vec<T>,
}

fn transform_columns<T: Real>(
    plane: &[T],
    rows: usize,
    cols: usize,
    filters: &WaveletFilters<T>,
) -> (Vec<T>, Vec<T>) {
    let half = rows / 2;
    let mut low = vec![T::zero(); half * cols];
    let mut high = vec![T::zero(); half * cols];
    let mut column = vec![T::zero(); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = plane[r * cols + c];
        }
        let (a, d) = dwt1(&column, filters);
        for r in 0..half {
            low[r * cols + c] = a[r];
            high[r * cols + c] = d[r];
        }
    }
    (low, high)
}

/// Separable 2D transform of a square row-major plane: each row first, then each column.
pub fn dwt2_plane<T: Real>(plane: &[T], side: usize, filters: &WaveletFilters<T>) -> Subbands<T> {
    assert_eq!(plane.len(), side * side);
    let half = side / 2;
    let mut row_low = Vec::with_capacity(side * half);
    let mut row_high = Vec::with_capacity(side * half);
    for row in plane.chunks_exact(side) {
        let (a, d) = dwt1(row, filters);
        row_low.extend(a);
        row_high.extend(d);
    }
    let (a, lh) = transform_columns(&row_low, side, half, filters);
    let (hl, hh) = transform_columns(&row_high, side, half, filters);
    Subbands { a, lh, hl, hh }
}

pub fn dwt2<T: Real>(gray: &GrayImage<T>, filters: &WaveletFilters<T>) -> Subbands<T> {
    dwt2_plane(gray.values(), GrayImage::<T>::SIDE, filters)
}

fn mean_square<T: Real>(band: &[T]) -> T {
    band.iter().map(|&b| b * b).sum::<T>() / T::of_usize(band.len())
}

/// `[E(LH), E(HL), E(HH), mean(A), std(A)]` with `E(B) = mean(b^2)` and population std.
pub fn extract_wavelet<T: Real>(gray: &GrayImage<T>) -> Vec<T> {
    let bands = dwt2(gray, &WaveletFilters::db2());
    let n = T::of_usize(bands.a.len());
    let mean = bands.a.iter().copied().sum::<T>() / n;
    let var = bands.a.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    vec![
        mean_square(&bands.lh),
        mean_square(&bands.hl),
        mean_square(&bands.hh),
        mean,
        var.sqrt(),
    ]
}
