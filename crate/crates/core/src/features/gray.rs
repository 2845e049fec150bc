use crate::dataset::{ImageRecord, IMAGE_SIDE};
use crate::scalar::Real;

/// 32x32 luma plane with values in `[0, 255]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage<T> {
    values: Vec<T>,
}

impl<T: Real> GrayImage<T> {
    pub const SIDE: usize = IMAGE_SIDE;

    /// Returns `None` unless there are 1024 values, all in `[0, 255]`.
    pub fn new(values: Vec<T>) -> Option<Self> {
        let ok = values.len() == IMAGE_SIDE * IMAGE_SIDE
            && values.iter().all(|&v| v >= T::zero() && v <= T::of(255.0));
        ok.then_some(Self { values })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Option<Self> {
        let mut values = Vec::with_capacity(IMAGE_SIDE * IMAGE_SIDE);
        for r in 0..IMAGE_SIDE {
            for c in 0..IMAGE_SIDE {
                values.push(T::of(f(r, c)));
            }
        }
        Self::new(values)
    }

    pub fn constant(value: f64) -> Option<Self> {
        Self::from_fn(|_, _| value)
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> T {
        self.values[row * IMAGE_SIDE + col]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// BT.601 luma: `0.299 R + 0.587 G + 0.114 B`, unrounded.
pub fn to_grayscale<T: Real>(image: &ImageRecord) -> GrayImage<T> {
    let (wr, wg, wb) = (T::of(0.299), T::of(0.587), T::of(0.114));
    let values = image
        .pixels()
        .chunks_exact(3)
        .map(|px| {
            let v = wr * T::of(px[0] as f64) + wg * T::of(px[1] as f64) + wb * T::of(px[2] as f64);
            // weights sum to 1 but rounding can push white a hair past 255
            v.min(T::of(255.0))
        })
        .collect();
    GrayImage { values }
}
