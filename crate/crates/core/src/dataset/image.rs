use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const IMAGE_SIDE: usize = 32;
pub const IMAGE_BYTES: usize = IMAGE_SIDE * IMAGE_SIDE * 3;

/// A decoded 32x32 RGB image with its binary label (0 = real, 1 = synthetic).
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRecord {
    pixels: Box<[u8; IMAGE_BYTES]>,
    label: u8,
    path: String,
}

impl ImageRecord {
    pub fn new(pixels: &[u8], label: u8, path: impl Into<String>) -> Result<Self> {
        let pixels: Box<[u8; IMAGE_BYTES]> = pixels
            .to_vec()
            .into_boxed_slice()
            .try_into()
            .map_err(|b: Box<[u8]>| Error::dimension(format!("{IMAGE_BYTES} bytes"), b.len()))?;
        if label > 1 {
            return Err(Error::dimension("label 0 or 1", label));
        }
        Ok(Self {
            pixels,
            label,
            path: path.into(),
        })
    }

    /// Fills every pixel with the same colour.
    pub fn solid(rgb: [u8; 3], label: u8) -> Self {
        let mut pixels = [0u8; IMAGE_BYTES];
        for px in pixels.chunks_exact_mut(3) {
            px.copy_from_slice(&rgb);
        }
        Self::new(&pixels, label, "").expect("valid solid image")
    }

    /// Row-major, channel-interleaved RGB bytes.
    pub fn pixels(&self) -> &[u8; IMAGE_BYTES] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let o = (row * IMAGE_SIDE + col) * 3;
        [self.pixels[o], self.pixels[o + 1], self.pixels[o + 2]]
    }

    pub fn label(&self) -> u8 {
        self.label
    }

    pub fn path(&self) -> &str {
        &self.path
    }
}

/// Decodes a PNG or JPEG file; grayscale sources are replicated across channels.
/// Images that are not exactly 32x32 are rejected rather than resized.
pub fn load_image(path: impl AsRef<Path>, label: u8) -> Result<ImageRecord> {
    let path = path.as_ref();
    let decode_err = |reason: String| Error::Decode {
        path: PathBuf::from(path),
        reason,
    };
    let reader = ::image::ImageReader::open(path)
        .map_err(|e| Error::io(format!("opening {}", path.display()), e))?
        .with_guessed_format()
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let img = reader.decode().map_err(|e| decode_err(e.to_string()))?;
    if img.width() as usize != IMAGE_SIDE || img.height() as usize != IMAGE_SIDE {
        return Err(Error::dimension(
            format!("{IMAGE_SIDE}x{IMAGE_SIDE} image"),
            format!("{}x{} in {}", img.width(), img.height(), path.display()),
        ));
    }
    let rgb = img.to_rgb8();
    ImageRecord::new(rgb.as_raw(), label, path.to_string_lossy())
}
