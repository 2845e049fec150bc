//! Synthetic dataset trees with a planted frequency-domain signal.

use std::fs;
use std::path::Path;

use crate::dataset::{Split, IMAGE_BYTES, IMAGE_SIDE};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureOptions {
    pub n_per_class: usize,
    pub seed: u64,
    /// Both classes get white noise, so labels carry no signal.
    pub null_signal: bool,
}

pub fn white_noise(rng: &mut SplitMix64) -> Vec<u8> {
    let mut px = Vec::with_capacity(IMAGE_BYTES);
    while px.len() < IMAGE_BYTES {
        px.extend_from_slice(&rng.next_u64().to_le_bytes());
    }
    px.truncate(IMAGE_BYTES);
    px
}

/// One pass of a 3x3 mean filter per channel, replicating edge pixels.
fn box_blur(src: &[f64]) -> Vec<f64> {
    let n = IMAGE_SIDE as isize;
    let clamp = |v: isize| v.clamp(0, n - 1) as usize;
    let mut out = vec![0.0; src.len()];
    for r in 0..n {
        for c in 0..n {
            for ch in 0..3 {
                let mut sum = 0.0;
                for dr in -1..=1 {
                    for dc in -1..=1 {
                        sum += src[(clamp(r + dr) * IMAGE_SIDE + clamp(c + dc)) * 3 + ch];
                    }
                }
                out[(r as usize * IMAGE_SIDE + c as usize) * 3 + ch] = sum / 9.0;
            }
        }
    }
    out
}

/// Two box-blur passes, then rounding back to 8 bits.
pub fn low_pass(pixels: &[u8]) -> Vec<u8> {
    let v: Vec<f64> = pixels.iter().map(|&p| p as f64).collect();
    box_blur(&box_blur(&v)).into_iter().map(|x| x.round().clamp(0.0, 255.0) as u8).collect()
}

/// Writes `{train,test}/{REAL,FAKE}/{idx:05}.png`, `n_per_class` files per leaf directory.
/// REAL (label 0) is white noise; FAKE (label 1) is blurred noise unless `null_signal` is set.
pub fn make_fixture(out_dir: &Path, opts: FixtureOptions) -> Result<usize> {
    if opts.n_per_class < 2 {
        return Err(Error::Config(format!("fixture needs at least 2 images per class, got {}", opts.n_per_class)));
    }
    let mut rng = SplitMix64::new(opts.seed);
    let mut written = 0;
    for split in [Split::Train, Split::Test] {
        for (label, class_dir) in ["REAL", "FAKE"].into_iter().enumerate() {
            let dir = out_dir.join(split.dir_name()).join(class_dir);
            fs::create_dir_all(&dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
            for idx in 0..opts.n_per_class {
                let noise = white_noise(&mut rng);
                let px = if label == 1 && !opts.null_signal { low_pass(&noise) } else { noise };
                let path = dir.join(format!("{idx:05}.png"));
                let img = image::RgbImage::from_raw(IMAGE_SIDE as u32, IMAGE_SIDE as u32, px)
                    .expect("buffer holds exactly one image");
                img.save(&path)
                    .map_err(|e| Error::io(format!("writing {}", path.display()), std::io::Error::other(e)))?;
                written += 1;
            }
        }
    }
    Ok(written)
}
