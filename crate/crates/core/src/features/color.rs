use crate::dataset::ImageRecord;
use crate::scalar::Real;

pub const HIST_BINS_PER_CHANNEL: usize = 16;

/// Pixels scaled to `[0, 1]`, row-major and channel-interleaved.
pub fn extract_raw<T: Real>(image: &ImageRecord) -> Vec<T> {
    let scale = T::of(255.0);
    image.pixels().iter().map(|&b| T::of(b as f64) / scale).collect()
}

/// 16-bin histogram per channel (bin = value / 16), each channel normalised to sum 1.
/// Output order is R bins, then G, then B.
pub fn extract_hist<T: Real>(image: &ImageRecord) -> Vec<T> {
    let mut counts = [[0u32; HIST_BINS_PER_CHANNEL]; 3];
    for px in image.pixels().chunks_exact(3) {
        for (ch, &v) in px.iter().enumerate() {
            counts[ch][(v / 16) as usize] += 1;
        }
    }
    let n = T::of_usize(image.pixels().len() / 3);
    counts
        .iter()
        .flat_map(|c| c.iter().map(move |&k| T::of(k as f64) / n))
        .collect()
}
